#include <gtest/gtest.h>

#include <random>

#include "hypdir/clifford.hpp"

using namespace hypdir;

namespace {

Multivector random_mv(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Multivector a(m);
  for (unsigned k = 0; k < a.size(); ++k) a[k] = u(rng);
  return a;
}

CliffordVector random_vec(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CliffordVector x(m);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = u(rng);
  return x;
}

// Product computed from the generator relations by sorting generator words one
// adjacent swap at a time; independent of the bitmask sign formula.
Multivector slow_product(const Multivector& a, const Multivector& b) {
  const int m = a.generators();
  Multivector out(m);
  for (unsigned i = 0; i < a.size(); ++i)
    for (unsigned j = 0; j < b.size(); ++j) {
      if (a[i] == 0 || b[j] == 0) continue;
      std::vector<int> word;
      for (int l = 0; l < m; ++l)
        if (i & (1u << l)) word.push_back(l);
      for (int l = 0; l < m; ++l)
        if (j & (1u << l)) word.push_back(l);
      double sign = 1;
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t k = 0; k + 1 < word.size(); ++k) {
          if (word[k] > word[k + 1]) {
            std::swap(word[k], word[k + 1]);
            sign = -sign;
            changed = true;
          } else if (word[k] == word[k + 1]) {
            word.erase(word.begin() + static_cast<long>(k), word.begin() + static_cast<long>(k) + 2);
            sign = -sign;
            changed = true;
            break;
          }
        }
      }
      unsigned mask = 0;
      for (int l : word) mask |= 1u << l;
      out[mask] += sign * a[i] * b[j];
    }
  return out;
}

}  // namespace

TEST(Clifford, GeneratorSquares) {
  const auto i1 = Multivector::generator(2, 1);
  const auto r = i1 * i1;
  EXPECT_EQ(r, Multivector::scalar(2, -1.0));
}

TEST(Clifford, GeneratorsAnticommute) {
  const auto i1 = Multivector::generator(2, 1);
  const auto i2 = Multivector::generator(2, 2);
  EXPECT_EQ(i1 * i2, Multivector::blade(2, 0b11, 1.0));
  EXPECT_EQ(i2 * i1, Multivector::blade(2, 0b11, -1.0));
}

TEST(Clifford, OnePlusI1TimesOneMinusI1) {
  const Multivector a(1, {1.0, 1.0});
  const Multivector b(1, {1.0, -1.0});
  EXPECT_EQ(a * b, Multivector::scalar(1, 2.0));
}

TEST(Clifford, ProductMatchesWordSorting) {
  std::mt19937_64 rng(11);
  for (int m = 0; m <= 4; ++m)
    for (int k = 0; k < 20; ++k) {
      const auto a = random_mv(m, rng), b = random_mv(m, rng);
      EXPECT_TRUE(approx_equal(a * b, slow_product(a, b), 1e-12)) << "m=" << m;
    }
}

TEST(Clifford, MismatchedGeneratorsThrow) {
  EXPECT_THROW((void)(Multivector(1) * Multivector(2)), dimension_error);
  EXPECT_THROW((void)(Multivector(1) + Multivector(2)), dimension_error);
  EXPECT_THROW(Multivector(9), dimension_error);
}

TEST(Clifford, Associativity) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const int m = k % 5;
    const auto a = random_mv(m, rng), b = random_mv(m, rng), c = random_mv(m, rng);
    const double bound = 1e-10 * norm(a) * norm(b) * norm(c);
    EXPECT_LE(distance((a * b) * c, a * (b * c)), bound);
  }
}

TEST(Clifford, InvolutionExamples) {
  const auto e12 = Multivector::blade(2, 0b11, 1.0);
  EXPECT_EQ(e12.main(), e12);
  EXPECT_EQ(e12.reversion(), -e12);
  const auto i2 = Multivector::generator(2, 2), i1 = Multivector::generator(2, 1);
  EXPECT_EQ(e12.reversion(), i2 * i1);
  std::mt19937_64 rng(3);
  for (int m = 0; m <= 4; ++m) {
    const auto x = random_vec(m, rng).to_multivector();
    EXPECT_EQ(x.conjugation(), x.main());
  }
}

TEST(Clifford, InvolutionSignsByGrade) {
  Multivector a(3);
  for (unsigned k = 0; k < a.size(); ++k) a[k] = 1.0;
  const double main_signs[] = {1, -1, -1, 1, -1, 1, 1, -1};
  const double rev_signs[] = {1, 1, 1, -1, 1, -1, -1, -1};
  const double conj_signs[] = {1, -1, -1, -1, -1, -1, -1, 1};
  for (unsigned k = 0; k < 8; ++k) {
    EXPECT_EQ(a.main()[k], main_signs[k]);
    EXPECT_EQ(a.reversion()[k], rev_signs[k]);
    EXPECT_EQ(a.conjugation()[k], conj_signs[k]);
  }
}

TEST(Clifford, MainIsAutomorphismReversionIsAntiAutomorphism) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const int m = k % 5;
    const auto a = random_mv(m, rng), b = random_mv(m, rng);
    EXPECT_TRUE(approx_equal((a * b).main(), a.main() * b.main(), 1e-12));
    EXPECT_TRUE(approx_equal((a * b).reversion(), b.reversion() * a.reversion(), 1e-12));
    EXPECT_TRUE(approx_equal((a * b).conjugation(), b.conjugation() * a.conjugation(), 1e-12));
  }
}

TEST(Clifford, InvolutionsAreInvolutive) {
  std::mt19937_64 rng(7);
  for (int m = 0; m <= 5; ++m) {
    const auto a = random_mv(m, rng);
    EXPECT_EQ(a.main().main(), a);
    EXPECT_EQ(a.reversion().reversion(), a);
    EXPECT_EQ(a.conjugation().conjugation(), a);
  }
}

TEST(Clifford, VectorNormIdentities) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const int m = k % 5;
    const auto xv = random_vec(m, rng), yv = random_vec(m, rng);
    const auto x = xv.to_multivector(), y = yv.to_multivector();
    const auto n2 = Multivector::scalar(m, xv.norm2());
    EXPECT_TRUE(approx_equal(x * x.conjugation(), n2, 1e-12));
    EXPECT_TRUE(approx_equal(x.conjugation() * x, n2, 1e-12));
    EXPECT_NEAR(norm(x * y), xv.norm() * yv.norm(), 1e-12);
  }
}

TEST(Clifford, VectorInverseExamples) {
  EXPECT_EQ(vector_inverse(CliffordVector{1.0}), (CliffordVector{1.0}));
  EXPECT_EQ(vector_inverse(CliffordVector{0.0, 1.0}), (CliffordVector{0.0, -1.0}));
  const auto inv = vector_inverse(CliffordVector{1.0, 1.0});
  EXPECT_NEAR(inv[0], 0.5, 1e-15);
  EXPECT_NEAR(inv[1], -0.5, 1e-15);
  EXPECT_THROW(vector_inverse(CliffordVector{0.0, 0.0}), singular_error);
}

TEST(Clifford, VectorInverseIsInverse) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const int m = k % 5;
    const auto x = random_vec(m, rng);
    const auto p = x.to_multivector() * vector_inverse(x).to_multivector();
    EXPECT_TRUE(approx_equal(p, Multivector::scalar(m, 1.0), 1e-12));
  }
}

TEST(Clifford, ExactRationalInverse) {
  const ExactMultivector x(1, {Rational(1), Rational(1)});
  const auto inv = x.inverse(Rational(0));
  EXPECT_EQ(inv, ExactMultivector(1, {Rational(1, 2), Rational(-1, 2)}));
  EXPECT_EQ(x * inv, ExactMultivector::scalar(1, Rational(1)));
  const ExactMultivector e12 = ExactMultivector::blade(2, 0b11, Rational(3));
  EXPECT_EQ(e12 * e12, ExactMultivector::scalar(2, Rational(-9)));
}

TEST(Clifford, NonInvertibleThrows) {
  const Multivector a(2, {1.0, 0.0, 0.0, 1.0});
  EXPECT_TRUE(approx_equal(a.inverse(1e-12), Multivector(2, {0.5, 0.0, 0.0, -0.5})));
  Multivector z(2);
  EXPECT_THROW((void)z.inverse(1e-12), singular_error);
}

TEST(Clifford, FromMultivectorRejectsHigherGrades) {
  EXPECT_THROW(CliffordVector::from_multivector(Multivector::blade(2, 0b11, 1.0)), std::exception);
  const auto x = CliffordVector::from_multivector(Multivector(1, {2.0, -1.0}));
  EXPECT_EQ(x, (CliffordVector{2.0, -1.0}));
}
