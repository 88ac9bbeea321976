#include "adiqoc/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "adiqoc/eigh.hpp"

namespace adiqoc {

Operator pauli_x() {
    Operator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Operator pauli_y() {
    Operator m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Operator pauli_z() {
    Operator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Operator identity_op(int dim) { return Operator::Identity(dim, dim); }

double hermiticity_defect(const Operator& op) {
    const double scale = op.norm();
    if (scale == 0.0) return 0.0;
    return (op - op.adjoint()).norm() / scale;
}

bool is_hermitian(const Operator& op, double relTol) {
    if (op.rows() != op.cols()) return false;
    return hermiticity_defect(op) <= relTol;
}

Operator tensor_product(const std::vector<Operator>& ops) {
    if (ops.empty()) throw std::invalid_argument("tensor_product: empty operator list");
    Operator acc = ops.front();
    for (std::size_t i = 1; i < ops.size(); ++i) {
        const Operator& b = ops[i];
        Operator next(acc.rows() * b.rows(), acc.cols() * b.cols());
        for (Eigen::Index r = 0; r < acc.rows(); ++r)
            for (Eigen::Index c = 0; c < acc.cols(); ++c)
                next.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = acc(r, c) * b;
        acc = std::move(next);
    }
    return acc;
}

QuantumState QuantumState::pure(Vector psi) {
    if (psi.size() < 1) throw std::invalid_argument("QuantumState: empty vector");
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-10)
        throw std::invalid_argument("QuantumState: pure vector not normalized, |norm-1| = " +
                                    std::to_string(std::abs(norm - 1.0)));
    const int d = static_cast<int>(psi.size());
    return QuantumState(Representation::PureVector, d, std::move(psi), Matrix());
}

QuantumState QuantumState::density(Matrix rho) {
    if (rho.rows() < 1 || rho.rows() != rho.cols())
        throw std::invalid_argument("QuantumState: density matrix must be square");
    if (hermiticity_defect(rho) > 1e-10)
        throw std::invalid_argument("QuantumState: density matrix not Hermitian");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw std::invalid_argument("QuantumState: density trace != 1, defect = " +
                                    std::to_string(std::abs(tr - 1.0)));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("QuantumState: density matrix has negative eigenvalue " +
                                    std::to_string(es.eigenvalues().minCoeff()));
    const int d = static_cast<int>(rho.rows());
    return QuantumState(Representation::DensityMatrix, d, Vector(), std::move(rho));
}

QuantumState QuantumState::densityUnchecked(Matrix rho) {
    const int d = static_cast<int>(rho.rows());
    return QuantumState(Representation::DensityMatrix, d, Vector(), std::move(rho));
}

const Vector& QuantumState::vector() const {
    if (!isPure()) throw std::runtime_error("QuantumState: not a pure vector");
    return vec_;
}

const Matrix& QuantumState::matrix() const {
    if (isPure()) throw std::runtime_error("QuantumState: not a density matrix");
    return mat_;
}

Matrix QuantumState::densityMatrix() const {
    if (isPure()) return vec_ * vec_.adjoint();
    return mat_;
}

namespace {

int largest_component_index(const Vector& v) {
    int best = 0;
    double bestMag = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::norm(v(i));
        if (mag > bestMag * (1.0 + 1e-12)) {
            bestMag = mag;
            best = static_cast<int>(i);
        }
    }
    return best;
}

void fix_phase(Vector& v) {
    const int idx = largest_component_index(v);
    const Complex pivot = v(idx);
    const double mag = std::abs(pivot);
    if (mag > 0.0) v *= std::conj(pivot) / mag;
    v(idx) = Complex(std::abs(v(idx).real()), 0.0); // scrub residual imaginary dust
}

} // namespace

EigenSystem hermitian_eigen(const Operator& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eigen: non-square input");
    const double defect = hermiticity_defect(h);
    if (defect > 1e-10)
        throw std::invalid_argument("hermitian_eigen: input not Hermitian, relative defect = " +
                                    std::to_string(defect));
    EigenSystem sys;
    eigh_hermitian(0.5 * (h + h.adjoint()), sys.values, sys.vectors);

    const int n = static_cast<int>(sys.values.size());
    for (int k = 0; k < n; ++k) {
        Vector col = sys.vectors.col(k);
        fix_phase(col);
        sys.vectors.col(k) = col;
    }

    // Order members of a degenerate group by the index of their dominant
    // component so level crossings resolve deterministically.
    const double scale = std::max(std::abs(sys.values(0)), std::abs(sys.values(n - 1)));
    const double degenTol = 1e-12 * std::max(scale, 1.0);
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && sys.values(end) - sys.values(start) <= degenTol) ++end;
        if (end - start > 1) {
            std::vector<int> order(end - start);
            std::iota(order.begin(), order.end(), 0);
            std::vector<int> pivot(end - start);
            for (int j = 0; j < end - start; ++j)
                pivot[j] = largest_component_index(sys.vectors.col(start + j));
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return pivot[a] < pivot[b]; });
            Matrix block(n, end - start);
            RealVector vals(end - start);
            for (int j = 0; j < end - start; ++j) {
                block.col(j) = sys.vectors.col(start + order[j]);
                vals(j) = sys.values(start + order[j]);
            }
            sys.vectors.middleCols(start, end - start) = block;
            sys.values.segment(start, end - start) = vals;
        }
        start = end;
    }
    return sys;
}

namespace {

Matrix psd_sqrt(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
    RealVector lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::sqrt(std::max(lam(i), 0.0));
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

double check_psd(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace

double fidelity_amplitude(const QuantumState& a, const QuantumState& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("fidelity_amplitude: dimension mismatch");

    if (a.isPure() && b.isPure())
        return std::min(1.0, std::abs(a.vector().dot(b.vector())));

    // Pure-vs-mixed shortcut: sqrt(<psi|rho|psi>).
    if (a.isPure() || b.isPure()) {
        const QuantumState& p = a.isPure() ? a : b;
        const QuantumState& m = a.isPure() ? b : a;
        if (check_psd(m.matrix()) < -1e-8)
            throw std::invalid_argument("fidelity_amplitude: density matrix not PSD");
        const double overlap = (p.vector().adjoint() * m.matrix() * p.vector())(0).real();
        return std::min(1.0, std::sqrt(std::max(overlap, 0.0)));
    }

    if (check_psd(a.matrix()) < -1e-8 || check_psd(b.matrix()) < -1e-8)
        throw std::invalid_argument("fidelity_amplitude: density matrix not PSD");

    const Matrix sa = psd_sqrt(a.matrix());
    const Matrix inner = sa * b.matrix() * sa;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        sum += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
    return std::min(1.0, sum);
}

} // namespace adiqoc
