#include "adiqoc/eigh.hpp"

#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include <lapacke.h>

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace adiqoc {

namespace {

// Small problems lose badly to BLAS thread fan-out; pin the backend once.
void pin_blas_threads() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (openblas_set_num_threads) openblas_set_num_threads(1);
    });
}

} // namespace

void eigh_hermitian(const Matrix& h, RealVector& values, Matrix& vectors) {
    const lapack_int n = static_cast<lapack_int>(h.rows());
    if (n == 0) throw std::invalid_argument("eigh_hermitian: empty matrix");
    pin_blas_threads();

    vectors = h;
    values.resize(n);
    const lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(vectors.data()), n, values.data());
    if (info == 0) return;

    // rare convergence failure: fall back to Eigen's QL implementation
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigh_hermitian: eigendecomposition failed");
    values = es.eigenvalues();
    vectors = es.eigenvectors();
}

} // namespace adiqoc
