#include "hypdir/clifford.hpp"

#include <bit>

namespace hypdir {

CliffordVector CliffordVector::from_multivector(const Multivector& a, double tol) {
  if (!a.supported_on_vectors(tol)) throw dimension_error("multivector is not a Clifford vector");
  const int m = a.generators();
  CliffordVector v(m);
  v.x_[0] = a[0];
  for (int l = 1; l <= m; ++l) v.x_[static_cast<std::size_t>(l)] = a[1u << (l - 1)];
  return v;
}

CliffordVector vector_inverse(const CliffordVector& x) {
  const double n2 = x.norm2();
  if (!(n2 > 0.0)) throw singular_error("zero Clifford vector has no inverse");
  CliffordVector r(x.generators());
  r[0] = x[0] / n2;
  for (std::size_t l = 1; l < x.size(); ++l) r[l] = -x[l] / n2;
  return r;
}

}  // namespace hypdir
