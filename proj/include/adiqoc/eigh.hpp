#pragma once

#include "adiqoc/types.hpp"

namespace adiqoc {

// Dense Hermitian eigendecomposition (ascending eigenvalues, orthonormal
// columns). Backed by LAPACK zheevd with an Eigen fallback; the caller is
// responsible for Hermiticity.
void eigh_hermitian(const Matrix& h, RealVector& values, Matrix& vectors);

} // namespace adiqoc
