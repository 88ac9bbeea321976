#include "adiqoc/problems.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "adiqoc/eigh.hpp"

namespace adiqoc {

Trajectory RapProblem::propagate(const ControlSet& controls) const {
    RapSpec spec{tf_, controls, {}};
    return propagate_closed(rap_model(spec), rap_initial_state(), grid_);
}

Trajectory RapProblem::referenceTrajectory(const ControlSet& controls) const {
    RapSpec spec{tf_, controls, {}};
    return instantaneous_ground_trajectory(rap_model(spec), grid_);
}

Trajectory RapProblem::propagatePerturbed(const ControlSet& controls,
                                          const PerturbationAlpha& alpha) const {
    RapSpec spec{tf_, controls, {alpha.amplitudeScale, alpha.detuningShift}};
    return propagate_closed(rap_model(spec), rap_initial_state(), grid_);
}

StirapSpec StirapProblem::withControls(const ControlSet& controls) const {
    StirapSpec spec = spec_;
    spec.controls = controls;
    return spec;
}

Trajectory StirapProblem::propagate(const ControlSet& controls) const {
    const StirapSpec spec = withControls(controls);
    const LindbladModel model = stirap_open_model(spec);
    const QuantumState rho0 = stirap_initial_state(model.dim);
    return propagate_lindblad(model, rho0, grid_);
}

Trajectory StirapProblem::referenceTrajectory(const ControlSet& controls) const {
    const StirapSpec spec = withControls(controls);
    const int dim = stirap_levels(spec) + 1;
    Trajectory traj;
    traj.grid = grid_;
    traj.states.reserve(grid_.nSteps + 1);
    for (int k = 0; k <= grid_.nSteps; ++k)
        traj.states.push_back(embed_state(quasi_dark_state(spec, grid_.node(k)), dim));
    return traj;
}

QuantumState StirapProblem::target(const ControlSet&) const {
    return stirap_target_state(stirap_levels(spec_) + 1);
}

namespace {

// Ground eigenvector of a dense Hermitian matrix by Lanczos with full
// reorthogonalization, warm-started from the previous node's ground state.
// Falls back to the full eigendecomposition if the residual stalls.
Vector lanczos_ground(const Matrix& h, const Vector& seed, double hScale) {
    const int dim = static_cast<int>(h.rows());
    const int mMax = std::min(dim, 36);
    const double tol = 1e-11 * std::max(hScale, 1.0);

    std::vector<Vector> basis;
    basis.reserve(mMax + 1);
    Vector v = seed / seed.norm();
    basis.push_back(v);
    std::vector<double> alpha, beta;
    Eigen::SelfAdjointEigenSolver<RealMatrix> tri;

    for (int m = 0; m < mMax; ++m) {
        Vector w = h * basis[m];
        alpha.push_back(basis[m].dot(w).real());
        w -= alpha[m] * basis[m];
        if (m > 0) w -= beta[m - 1] * basis[m - 1];
        for (const auto& b : basis) w -= b.dot(w) * b; // full reorthogonalization
        const double nb = w.norm();

        // Rayleigh-Ritz on the current Krylov space
        const int mm = m + 1;
        Eigen::Map<const RealVector> diag(alpha.data(), mm);
        RealVector sub = RealVector::Zero(std::max(mm - 1, 1));
        for (int i = 0; i + 1 < mm; ++i) sub(i) = beta[i];
        tri.computeFromTridiagonal(diag, sub.head(std::max(mm - 1, 0)));
        const double residual = (mm < dim) ? std::abs(nb * tri.eigenvectors()(mm - 1, 0))
                                           : 0.0;
        if (residual <= tol || nb < 1e-14 || mm == dim) {
            Vector ground = Vector::Zero(dim);
            for (int i = 0; i < mm; ++i) ground += tri.eigenvectors()(i, 0) * basis[i];
            ground /= ground.norm();
            return ground;
        }
        beta.push_back(nb);
        basis.push_back(w / nb);
    }

    RealVector values;
    Matrix vectors;
    eigh_hermitian(h, values, vectors);
    return vectors.col(0);
}

} // namespace

Trajectory MisSectorProblem::propagate(const ControlSet& controls) const {
    return propagate_closed_action(mis_sector_model(sector_, controls),
                                   sector_initial_state(sector_), grid_);
}

Trajectory MisSectorProblem::referenceTrajectory(const ControlSet& controls) const {
    const LindbladModel model = mis_sector_model(sector_, controls);
    const double hScale = sector_.xSym.norm() + sector_.zDiag.cwiseAbs().maxCoeff();

    Trajectory traj;
    traj.grid = grid_;
    traj.states.reserve(grid_.nSteps + 1);
    Vector seed = sector_initial_state(sector_).vector();
    for (int k = 0; k <= grid_.nSteps; ++k) {
        Vector ground = lanczos_ground(model.hamiltonianAt(grid_.node(k)), seed, hScale);
        if ((seed.adjoint() * ground)(0).real() < 0.0) ground = -ground;
        traj.states.push_back(QuantumState::pure(ground));
        seed = ground;
    }
    return traj;
}

} // namespace adiqoc
