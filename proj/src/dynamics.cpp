#include "adiqoc/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "adiqoc/eigh.hpp"
#include "adiqoc/parallel.hpp"
#include "adiqoc/rng.hpp"

namespace adiqoc {

void LindbladModel::validate() const {
    if (dim < 1) throw std::invalid_argument("LindbladModel: dim must be positive");
    if (!hamiltonianAt) throw std::invalid_argument("LindbladModel: missing hamiltonianAt");
    for (const auto& jump : jumps)
        if (jump.rows() != dim || jump.cols() != dim)
            throw std::invalid_argument("LindbladModel: jump dimension mismatch");
}

Matrix hermitian_step_unitary(const Operator& h, double dt) {
    if (h.rows() == 2) {
        // closed form from the half-angle decomposition, exactly unitary
        const double a = h(0, 0).real();
        const double b = h(1, 1).real();
        const Complex c = h(0, 1);
        const double m = 0.5 * (a + b);
        const double d = 0.5 * (a - b);
        const double r = std::sqrt(d * d + std::norm(c));
        const double phase = m * dt;
        const Complex e = Complex(std::cos(phase), -std::sin(phase));
        const double ang = r * dt;
        const double cosr = std::cos(ang);
        const double sinc = r > 1e-300 ? std::sin(ang) / r : dt;
        Matrix u(2, 2);
        u(0, 0) = e * (cosr - kImag * sinc * d);
        u(0, 1) = e * (-kImag * sinc * c);
        u(1, 0) = e * (-kImag * sinc * std::conj(c));
        u(1, 1) = e * (cosr + kImag * sinc * d);
        return u;
    }
    RealVector values;
    Matrix vectors;
    eigh_hermitian(h, values, vectors);
    Vector phases(values.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        const double phi = values(i) * dt;
        phases(i) = Complex(std::cos(phi), -std::sin(phi));
    }
    return vectors * phases.asDiagonal() * vectors.adjoint();
}

namespace {

void require_hermitian_step(const Operator& h, int step) {
    if (hermiticity_defect(h) > 1e-10)
        throw std::invalid_argument("propagation: non-Hermitian Hamiltonian at step " +
                                    std::to_string(step));
}

// psi <- exp(-i h dt) psi by Taylor summation of the exponential action with
// exact power-of-two substepping; converges to machine precision, so it
// matches the eigendecomposition route bit-for-bit in practice.
void apply_hermitian_exponential(const Operator& h, double dt, Vector& psi, Vector& term,
                                 Vector& next) {
    const double stepNorm = h.norm() * std::abs(dt);
    int splits = 1;
    while (stepNorm / splits > 0.5) splits *= 2;
    const Complex factor = -kImag * dt;
    for (int s = 0; s < splits; ++s) {
        term = psi;
        next = psi;
        for (int k = 1; k <= 60; ++k) {
            term = (factor / static_cast<double>(k * splits)) * (h * term).eval();
            next += term;
            if (term.squaredNorm() <= 1e-32 * next.squaredNorm()) break;
        }
        psi = next;
    }
    psi /= psi.norm();
}

} // namespace

Trajectory propagate_closed(const LindbladModel& model, const QuantumState& psi0,
                            const TimeGrid& grid) {
    model.validate();
    if (!model.jumps.empty())
        throw std::invalid_argument("propagate_closed: model has jump operators");
    if (!psi0.isPure()) throw std::invalid_argument("propagate_closed: initial state must be pure");
    if (psi0.dim() != model.dim) throw std::invalid_argument("propagate_closed: dim mismatch");

    Trajectory traj;
    traj.grid = grid;
    traj.states.reserve(grid.nSteps + 1);
    traj.states.push_back(psi0);
    Vector psi = psi0.vector();
    for (int k = 0; k < grid.nSteps; ++k) {
        const Operator h = model.hamiltonianAt(grid.midpoint(k));
        require_hermitian_step(h, k);
        psi = hermitian_step_unitary(h, grid.dt()) * psi;
        traj.states.push_back(QuantumState::pure(psi));
    }
    return traj;
}

Trajectory propagate_closed_action(const LindbladModel& model, const QuantumState& psi0,
                                   const TimeGrid& grid) {
    model.validate();
    if (!model.jumps.empty())
        throw std::invalid_argument("propagate_closed_action: model has jump operators");
    if (!psi0.isPure())
        throw std::invalid_argument("propagate_closed_action: initial state must be pure");
    if (psi0.dim() != model.dim)
        throw std::invalid_argument("propagate_closed_action: dim mismatch");

    Trajectory traj;
    traj.grid = grid;
    traj.states.reserve(grid.nSteps + 1);
    traj.states.push_back(psi0);
    Vector psi = psi0.vector();
    Vector term(model.dim), next(model.dim);
    for (int k = 0; k < grid.nSteps; ++k) {
        const Operator h = model.hamiltonianAt(grid.midpoint(k));
        require_hermitian_step(h, k);
        apply_hermitian_exponential(h, grid.dt(), psi, term, next);
        traj.states.push_back(QuantumState::pure(psi));
    }
    return traj;
}

namespace {

// Constant dissipator part of the column-stacking superoperator.
Matrix dissipator_superoperator(const std::vector<Operator>& jumps, Eigen::Index d) {
    Matrix sup = Matrix::Zero(d * d, d * d);
    const Matrix id = Matrix::Identity(d, d);
    auto kron = [&](const Matrix& a, const Matrix& b) {
        Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            for (Eigen::Index c = 0; c < a.cols(); ++c)
                out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        return out;
    };
    for (const auto& jump : jumps) {
        const Matrix jdj = jump.adjoint() * jump;
        sup += kron(jump.conjugate(), jump);
        sup -= 0.5 * kron(id, jdj);
        sup -= 0.5 * kron(jdj.transpose(), id);
    }
    return sup;
}

// sup = dissipator - i (I (x) H - H^T (x) I), written in place.
void fill_lindblad_superoperator(const Operator& h, const Matrix& dissipator, Matrix& sup) {
    const Eigen::Index d = h.rows();
    sup = dissipator;
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r2 = 0; r2 < d; ++r2) {
            for (Eigen::Index r = 0; r < d; ++r) sup(c * d + r, c * d + r2) -= kImag * h(r, r2);
            for (Eigen::Index r = 0; r < d; ++r) sup(r2 * d + r, c * d + r) += kImag * h(c, r2);
        }
}

// v <- exp(sup dt) v by Taylor summation with exact substepping.
void apply_superoperator_exponential(const Matrix& sup, double dt, Vector& v, Vector& term,
                                     Vector& next) {
    const double stepNorm = sup.norm() * std::abs(dt);
    int splits = 1;
    while (stepNorm / splits > 0.5) splits *= 2;
    for (int s = 0; s < splits; ++s) {
        term = v;
        next = v;
        for (int k = 1; k <= 60; ++k) {
            term = (dt / static_cast<double>(k * splits)) * (sup * term).eval();
            next += term;
            if (term.squaredNorm() <= 1e-32 * next.squaredNorm()) break;
        }
        v = next;
    }
}

} // namespace

Trajectory propagate_lindblad(const LindbladModel& model, const QuantumState& rho0,
                              const TimeGrid& grid) {
    model.validate();
    if (model.dim > 64)
        throw std::invalid_argument(
            "propagate_lindblad: dim > 64; use propagate_trajectories or propagate_closed");
    if (rho0.dim() != model.dim) throw std::invalid_argument("propagate_lindblad: dim mismatch");

    Trajectory traj;
    traj.grid = grid;
    traj.states.reserve(grid.nSteps + 1);
    Matrix rho = rho0.densityMatrix();
    traj.states.push_back(QuantumState::densityUnchecked(rho));

    const Eigen::Index d = model.dim;
    const Matrix dissipator = dissipator_superoperator(model.jumps, d);
    Matrix sup(d * d, d * d);
    Vector vecRho = Eigen::Map<const Vector>(rho.data(), d * d);
    Vector term(d * d), next(d * d);

    for (int k = 0; k < grid.nSteps; ++k) {
        const Operator h = model.hamiltonianAt(grid.midpoint(k));
        require_hermitian_step(h, k);
        fill_lindblad_superoperator(h, dissipator, sup);
        apply_superoperator_exponential(sup, grid.dt(), vecRho, term, next);
        rho = Eigen::Map<const Matrix>(vecRho.data(), d, d);
        rho = 0.5 * (rho + rho.adjoint()); // scrub roundoff asymmetry
        vecRho = Eigen::Map<const Vector>(rho.data(), d * d);
        traj.states.push_back(QuantumState::densityUnchecked(rho));
    }
    return traj;
}

Trajectory propagate_trajectories(const LindbladModel& model, const QuantumState& psi0,
                                  const TimeGrid& grid, int nTraj, std::uint64_t seed,
                                  int threads) {
    model.validate();
    if (!psi0.isPure())
        throw std::invalid_argument("propagate_trajectories: initial state must be pure");
    if (psi0.dim() != model.dim)
        throw std::invalid_argument("propagate_trajectories: dim mismatch");
    if (nTraj < 1) throw std::invalid_argument("propagate_trajectories: nTraj must be >= 1");

    const int n = grid.nSteps;
    const double dt = grid.dt();

    // The no-jump propagator is trajectory independent; build it once per step.
    Matrix decay = Matrix::Zero(model.dim, model.dim);
    for (const auto& jump : model.jumps) decay += jump.adjoint() * jump;
    std::vector<Matrix> stepProps(n);
    for (int k = 0; k < n; ++k) {
        const Operator h = model.hamiltonianAt(grid.midpoint(k));
        require_hermitian_step(h, k);
        if (model.jumps.empty()) {
            stepProps[k] = hermitian_step_unitary(h, dt);
        } else {
            const Matrix heff = h - 0.5 * kImag * decay;
            stepProps[k] = Matrix((-kImag * dt * heff).exp());
        }
    }

    // Fixed-size chunks keep the reduction order independent of threading.
    const int chunkSize = 64;
    const int nChunks = (nTraj + chunkSize - 1) / chunkSize;
    std::vector<std::vector<Matrix>> partials(nChunks);

    parallel_for(nChunks, threads, [&](int chunk) {
        std::vector<Matrix> acc(n + 1, Matrix::Zero(model.dim, model.dim));
        const int lo = chunk * chunkSize;
        const int hi = std::min(nTraj, lo + chunkSize);
        for (int tr = lo; tr < hi; ++tr) {
            KeyedRng rng(seed, static_cast<std::uint64_t>(tr));
            Vector psi = psi0.vector();
            acc[0] += psi * psi.adjoint();
            for (int k = 0; k < n; ++k) {
                if (!model.jumps.empty()) {
                    double totalP = 0.0;
                    std::vector<double> probs(model.jumps.size());
                    for (std::size_t j = 0; j < model.jumps.size(); ++j) {
                        probs[j] = dt * (model.jumps[j] * psi).squaredNorm();
                        totalP += probs[j];
                    }
                    const double u1 = rng.uniform(2 * static_cast<std::uint64_t>(k));
                    if (u1 < totalP) {
                        const double u2 =
                            rng.uniform(2 * static_cast<std::uint64_t>(k) + 1) * totalP;
                        double cum = 0.0;
                        std::size_t pick = model.jumps.size() - 1;
                        for (std::size_t j = 0; j < model.jumps.size(); ++j) {
                            cum += probs[j];
                            if (u2 < cum) {
                                pick = j;
                                break;
                            }
                        }
                        psi = model.jumps[pick] * psi;
                        psi /= psi.norm();
                        acc[k + 1] += psi * psi.adjoint();
                        continue;
                    }
                }
                psi = stepProps[k] * psi;
                psi /= psi.norm();
                acc[k + 1] += psi * psi.adjoint();
            }
        }
        partials[chunk] = std::move(acc);
    });

    Trajectory traj;
    traj.grid = grid;
    traj.states.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        Matrix rho = Matrix::Zero(model.dim, model.dim);
        for (int chunk = 0; chunk < nChunks; ++chunk) rho += partials[chunk][k];
        rho /= static_cast<double>(nTraj);
        rho = 0.5 * (rho + rho.adjoint());
        traj.states.push_back(QuantumState::densityUnchecked(rho));
    }
    return traj;
}

Trajectory instantaneous_ground_trajectory(const LindbladModel& model, const TimeGrid& grid) {
    model.validate();
    Trajectory traj;
    traj.grid = grid;
    traj.states.reserve(grid.nSteps + 1);
    std::vector<double>& gaps = traj.observables["gap"];
    gaps.reserve(grid.nSteps + 1);

    Vector prev;
    for (int k = 0; k <= grid.nSteps; ++k) {
        const Operator h = model.hamiltonianAt(grid.node(k));
        const EigenSystem sys = hermitian_eigen(h);
        Vector ground = sys.vectors.col(0);
        if (prev.size() > 0 && (prev.adjoint() * ground)(0).real() < 0.0) ground = -ground;

        const double scale = std::max({std::abs(sys.values(0)),
                                       std::abs(sys.values(sys.values.size() - 1)), 1.0});
        const double gap = sys.values.size() > 1 ? sys.values(1) - sys.values(0)
                                                 : std::numeric_limits<double>::infinity();
        gaps.push_back(gap);
        if (gap < 1e-10 * scale) {
            traj.degeneracyFlagged = true;
            traj.degenerateNodes.push_back(k);
        }
        traj.states.push_back(QuantumState::pure(ground));
        prev = ground;
    }
    return traj;
}

} // namespace adiqoc
