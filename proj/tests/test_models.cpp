#include <doctest.h>

#include <cmath>
#include <random>

#include "adiqoc/models/mis.hpp"
#include "adiqoc/models/rap.hpp"
#include "adiqoc/models/stirap.hpp"
#include "adiqoc/problems.hpp"
#include "test_util.hpp"

using namespace adiqoc;

namespace {

ControlSet constant_controls(double gac, double gbc, double t0, double tf) {
    ControlPulse a, b;
    a.reference = ReferencePulse::constant(gac, t0, tf);
    b.reference = ReferencePulse::constant(gbc, t0, tf);
    return {{a, b}, {"g_ac", "g_bc"}};
}

ControlSet rap_like_controls(double omegaAmp, double deltaAmp, double tf) {
    ControlPulse omega, delta;
    omega.reference = ReferencePulse::rapOmega(omegaAmp, 0.0, tf);
    delta.reference = ReferencePulse::rapDelta(deltaAmp, 0.0, tf);
    return {{omega, delta}, {"Omega", "Delta"}};
}

} // namespace

TEST_CASE("rap hamiltonian assembly") {
    const double tf = 20.0;
    RapSpec spec{tf, rap_like_controls(1.0, 1.0, tf), {}};

    // at t = tf/2 the detuning vanishes and Omega peaks
    const Operator mid = rap_hamiltonian_at(spec, tf / 2.0);
    CHECK(std::abs(mid(0, 0)) < 1e-12);
    CHECK(mid(0, 1).real() == doctest::Approx(1.0));

    // no drive: diagonal in sigma_z
    RapSpec frozen = spec;
    frozen.perturbation.epsilon = 0.0;
    const Operator diag = rap_hamiltonian_at(frozen, tf / 4.0);
    CHECK(std::abs(diag(0, 1)) < 1e-15);

    // perturbed entries match the hand-assembled matrix
    RapSpec bumped = spec;
    bumped.perturbation = {1.1, 0.05 * 0.55};
    const double t = 0.3 * tf;
    const double omega = 1.1 * evaluate(spec.controls.byLabel("Omega"), t);
    const double delta = evaluate(spec.controls.byLabel("Delta"), t) + 0.05 * 0.55;
    Operator expected(2, 2);
    expected << delta, omega, omega, -delta;
    CHECK((rap_hamiltonian_at(bumped, t) - expected).norm() < 1e-12);
    CHECK(hermiticity_defect(rap_hamiltonian_at(bumped, t)) < 1e-12);
}

TEST_CASE("rap sweep moves the ground state from |0> to |1>") {
    const double tf = 20.0;
    const ControlSet controls = reference_polynomial_rap(tf / 2.0);
    RapSpec spec{tf, controls, {}};

    const EigenSystem start = hermitian_eigen(rap_hamiltonian_at(spec, 0.0));
    CHECK(std::abs(start.vectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-9));

    const EigenSystem end = hermitian_eigen(rap_hamiltonian_at(spec, tf));
    CHECK(std::abs(end.vectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("stirap hamiltonian structure") {
    StirapSpec spec;
    spec.fsr = 5.0;
    spec.controls = constant_controls(0.3, 0.8, 0.0, 1.0);

    SUBCASE("resonant three-level model") {
        spec.nSidebands = 0;
        const Operator h = stirap_hamiltonian_at(spec, 0.5);
        REQUIRE(h.rows() == 3);
        CHECK(h(0, 2).real() == doctest::Approx(0.3));
        CHECK(h(1, 2).real() == doctest::Approx(0.8));
        CHECK(std::abs(h(0, 1)) < 1e-15);
        CHECK(std::abs(h(2, 2)) < 1e-15);
        CHECK(hermiticity_defect(h) < 1e-12);
    }

    SUBCASE("five-level model with one sideband pair") {
        spec.nSidebands = 1;
        const Operator h = stirap_hamiltonian_at(spec, 0.5);
        REQUIRE(h.rows() == 5);
        CHECK(h(2, 2).real() == doctest::Approx(-5.0));
        CHECK(std::abs(h(3, 3)) < 1e-15);
        CHECK(h(4, 4).real() == doctest::Approx(5.0));
        // alternating coupling signs, (-1)^n
        CHECK(h(0, 2).real() == doctest::Approx(-0.3));
        CHECK(h(0, 3).real() == doctest::Approx(0.3));
        CHECK(h(0, 4).real() == doctest::Approx(-0.3));
        CHECK(h(1, 2).real() == doctest::Approx(-0.8));
    }

    SUBCASE("zero couplings decouple the qubits") {
        spec.nSidebands = 1;
        spec.controls = constant_controls(0.0, 0.0, 0.0, 1.0);
        const Operator h = stirap_hamiltonian_at(spec, 0.5);
        CHECK(h.cwiseAbs().sum() == doctest::Approx(10.0)); // only the photon diagonal
    }
}

TEST_CASE("dark state is an exact null vector of the resonant model") {
    StirapSpec spec;
    spec.nSidebands = 0;
    const double tf = 20.0;
    for (double theta : {0.1, 0.5, 1.0, 1.4}) {
        spec.controls =
            constant_controls(std::sin(theta), std::cos(theta), 0.0, tf);
        const Operator h = stirap_hamiltonian_at(spec, 1.0);
        Vector dark(3);
        dark << std::cos(theta), -std::sin(theta), 0.0;
        CHECK((h * dark).norm() <= 1e-10);
    }
}

TEST_CASE("satd fields") {
    StirapSpec spec;
    spec.nSidebands = 0;
    spec.couplingMagnitude = 1.0;
    const double tf = 20.0;
    const TimeGrid grid(0.0, tf, 2000);

    // ramp with vanishing second derivative at the ends
    ControlPulse theta;
    theta.reference = ReferencePulse::trigSmoothstep(0.5 * kPi, 0.0, tf);
    const ControlSet satd = satd_controls(spec, grid, theta);

    // pump off, Stokes at g when the protocol starts
    CHECK(std::abs(evaluate(satd.byLabel("g_ac"), 0.0)) < 1e-4);
    CHECK(evaluate(satd.byLabel("g_bc"), 0.0) == doctest::Approx(1.0).epsilon(1e-4));

    // at mid-protocol theta'' = 0: plain (g sin, g cos) and the power identity
    const double mid = tf / 2.0;
    const double thetaMid = evaluate(theta, mid);
    const double gac = evaluate(satd.byLabel("g_ac"), mid);
    const double gbc = evaluate(satd.byLabel("g_bc"), mid);
    CHECK(gac == doctest::Approx(std::sin(thetaMid)).epsilon(1e-6));
    CHECK(gbc == doctest::Approx(std::cos(thetaMid)).epsilon(1e-6));
    CHECK(gac * gac + gbc * gbc == doctest::Approx(1.0).epsilon(1e-6));

    // bad ramp endpoints are rejected
    ControlPulse badRamp;
    badRamp.reference = ReferencePulse::constant(0.3, 0.0, tf);
    CHECK_THROWS_AS(satd_controls(spec, grid, badRamp), std::invalid_argument);
}

TEST_CASE("satd transfer in the closed three-level model is essentially exact") {
    StirapSpec spec;
    spec.nSidebands = 0;
    const double tf = 20.0; // g tf = 20
    const TimeGrid grid(0.0, tf, 4000);

    ControlPulse theta;
    theta.reference = ReferencePulse::sin2Ramp(0.5 * kPi, 0.0, tf);
    StirapSpec driven = spec;
    driven.controls = satd_controls(spec, grid, theta);

    const LindbladModel model = stirap_closed_model(driven);
    const Trajectory traj = propagate_closed(model, stirap_initial_state(3), grid);
    const double fidelity = fidelity_amplitude(stirap_target_state(3), traj.final_state());
    CHECK(1.0 - fidelity < 1e-6);
}

TEST_CASE("quasi-dark state endpoints and sideband amplitudes") {
    StirapSpec spec;
    spec.nSidebands = 1;
    spec.fsr = 10.0;
    const double tf = 1.0;

    spec.controls = constant_controls(0.0, 1.0, 0.0, tf); // theta = 0
    const QuantumState atStart = quasi_dark_state(spec, 0.5);
    CHECK(std::abs(atStart.vector()(0)) == doctest::Approx(1.0).epsilon(1e-12));

    spec.controls = constant_controls(1.0, 0.0, 0.0, tf); // theta = pi/2
    const QuantumState atEnd = quasi_dark_state(spec, 0.5);
    CHECK(std::abs(atEnd.vector()(1)) == doctest::Approx(1.0).epsilon(1e-12));

    // theta = pi/4 with g / Delta_c = 0.1: photon amplitude 0.1 each before
    // normalization, i.e. photon / qubit-a amplitude = 0.1 / cos(pi/4)
    const double invSqrt2 = 1.0 / std::sqrt(2.0);
    spec.controls = constant_controls(invSqrt2, invSqrt2, 0.0, tf);
    const QuantumState mid = quasi_dark_state(spec, 0.5);
    const double ratio = (mid.vector()(2) / mid.vector()(0)).real();
    CHECK(ratio == doctest::Approx(0.1 / invSqrt2).epsilon(1e-12));
    CHECK(mid.vector()(2) == mid.vector()(4));

    StirapSpec resonantOnly = spec;
    resonantOnly.nSidebands = 0;
    CHECK_THROWS_AS(quasi_dark_state(resonantOnly, 0.5), std::invalid_argument);
}

TEST_CASE("stirap jump operators") {
    StirapSpec spec;
    spec.nSidebands = 1;
    spec.controls = constant_controls(0.1, 0.1, 0.0, 1.0);

    SUBCASE("all channels off") { CHECK(stirap_jumps(spec).empty()); }

    SUBCASE("rates follow the stated conversions") {
        StirapPhysical phys;
        phys.gRadPerSec = 2.0 * kPi * 10e6;
        phys.t1Sec = 50e-6;
        phys.qc = 1e5;
        phys.omegaCRadPerSec = 2.0 * kPi * 5e9;
        spec.decay = to_internal_decay(phys);

        // T1 = 50 us -> gamma_1 = 2e4 s^-1, here in units of g
        CHECK(1.0 / spec.decay.t1 == doctest::Approx(2e4 / phys.gRadPerSec).epsilon(1e-12));
        // gamma_c = omega_c / Q_c
        CHECK(spec.decay.omegaC / spec.decay.qc ==
              doctest::Approx((phys.omegaCRadPerSec / phys.qc) / phys.gRadPerSec).epsilon(1e-12));

        const auto jumps = stirap_jumps(spec);
        REQUIRE(jumps.size() == 5); // 2 relaxation + 3 photon loss, no dephasing
        const double gamma1 = 1.0 / spec.decay.t1;
        CHECK(std::norm(jumps[0](5, 0)) == doctest::Approx(gamma1).epsilon(1e-12));
        const double gammaC = spec.decay.omegaC / spec.decay.qc;
        CHECK(std::norm(jumps[2](5, 2)) == doctest::Approx(gammaC).epsilon(1e-12));
    }

    SUBCASE("dephasing uses the sigma_z convention") {
        spec.decay.tphi = 100.0;
        const auto jumps = stirap_jumps(spec);
        REQUIRE(jumps.size() == 2);
        const double amp2 = 1.0 / (2.0 * spec.decay.tphi);
        CHECK(std::norm(jumps[0](0, 0)) == doctest::Approx(amp2));
        CHECK(jumps[0](0, 0).real() < 0.0);
        CHECK(std::norm(jumps[0](1, 1)) == doctest::Approx(amp2));
        CHECK(jumps[0](1, 1).real() > 0.0);
    }
}

TEST_CASE("blockade subspace dimensions match brute-force independent-set counts") {
    // Lucas numbers via the recurrence, an independent oracle for rings
    auto lucas = [](int n) {
        long a = 1, b = 3; // L1, L2
        if (n == 1) return a;
        if (n == 2) return b;
        for (int i = 3; i <= n; ++i) {
            const long c = a + b;
            a = b;
            b = c;
        }
        return b;
    };
    for (int n = 3; n <= 12; ++n) {
        const BlockadeSubspace sub = build_blockade_subspace(Graph::ring(n));
        CHECK(sub.dim == lucas(n));
    }
    CHECK(build_blockade_subspace(Graph::ring(4)).dim == 7);
    CHECK(build_blockade_subspace(Graph::ring(8)).dim == 47);

    Graph edgeless;
    edgeless.nodes = 3;
    CHECK(build_blockade_subspace(edgeless).dim == 8);
}

TEST_CASE("projected hamiltonian equals P H P^dag on the full space") {
    std::mt19937 rng(3);
    for (const int n : {4, 6, 8}) {
        MisSpec spec;
        spec.graph = Graph::ring(n);
        spec.vR = 7.3;
        ControlPulse omega, delta;
        omega.reference = ReferencePulse::constant(0.9, 0.0, 1.0);
        delta.reference = ReferencePulse::constant(-0.4, 0.0, 1.0);
        spec.controls = {{omega, delta}, {"Omega", "Delta"}};

        const BlockadeSubspace sub = build_blockade_subspace(spec.graph);
        const Matrix p = blockade_projector(sub);
        const Operator full = mis_hamiltonian_full(spec, 0.5);
        const Operator projected = mis_hamiltonian_projected(spec, sub, 0.5);
        CHECK((p * full * p.adjoint() - projected).norm() < 1e-12);
        CHECK(hermiticity_defect(projected) < 1e-12);
    }
}

TEST_CASE("full mis hamiltonian agrees with a tensor-product oracle") {
    MisSpec spec;
    spec.graph = Graph::ring(4);
    spec.vR = 3.7;
    ControlPulse omega, delta;
    omega.reference = ReferencePulse::constant(0.8, 0.0, 1.0);
    delta.reference = ReferencePulse::constant(0.25, 0.0, 1.0);
    spec.controls = {{omega, delta}, {"Omega", "Delta"}};

    const int n = 4;
    // node i corresponds to bit i, i.e. tensor slot n-1-i
    auto onNode = [&](const Operator& op, int node) {
        std::vector<Operator> factors(n, identity_op(2));
        factors[n - 1 - node] = op;
        return tensor_product(factors);
    };
    const Operator nOp = 0.5 * (identity_op(2) - pauli_z());
    Operator oracle = Operator::Zero(16, 16);
    for (int i = 0; i < n; ++i)
        oracle += 0.8 * onNode(pauli_x(), i) - 0.25 * onNode(pauli_z(), i);
    for (const auto& [a, b] : spec.graph.edges)
        oracle += spec.vR * onNode(nOp, a) * onNode(nOp, b);

    CHECK((mis_hamiltonian_full(spec, 0.5) - oracle).norm() < 1e-12);
}

TEST_CASE("mis hamiltonian special cases") {
    // Omega = 0: diagonal, with zero interaction on independent sets
    MisSpec spec;
    spec.graph = Graph::ring(6);
    spec.vR = 11.0;
    ControlPulse omega, delta;
    omega.reference = ReferencePulse::zero(0.0, 1.0);
    delta.reference = ReferencePulse::constant(0.5, 0.0, 1.0);
    spec.controls = {{omega, delta}, {"Omega", "Delta"}};
    const BlockadeSubspace sub = build_blockade_subspace(spec.graph);
    const Operator h = mis_hamiltonian_projected(spec, sub, 0.0);
    CHECK((h - Matrix(h.diagonal().asDiagonal())).norm() < 1e-15);

    // N = 2: the interaction only hits |rr>
    MisSpec two;
    two.graph = Graph::ring(2);
    two.vR = 5.0;
    two.controls = spec.controls;
    const Operator hFull = mis_hamiltonian_full(two, 0.0);
    // diagonal of |rr>: V_r plus the detuning term -Delta (N - 2 popcount) = +1
    CHECK(hFull(3, 3).real() == doctest::Approx(5.0 + 1.0).epsilon(1e-12));
    CHECK(std::abs(hFull(1, 1).real() - hFull(2, 2).real()) < 1e-12);
    // only the doubly excited state carries the interaction
    CHECK(hFull(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("mis solution state and independence numbers") {
    MisSpec spec;
    spec.graph = Graph::ring(2);
    const BlockadeSubspace sub2 = build_blockade_subspace(spec.graph);
    const QuantumState sol2 = mis_solution_state(spec, sub2);
    // configurations {01, 10} with equal weight
    int hits = 0;
    for (int i = 0; i < sub2.dim; ++i)
        if (std::abs(sol2.vector()(i)) > 0) {
            CHECK(std::abs(sol2.vector()(i)) == doctest::Approx(1.0 / std::sqrt(2.0)));
            ++hits;
        }
    CHECK(hits == 2);

    CHECK(independence_number(Graph::ring(6)) == 3);
    CHECK(independence_number(Graph::ring(8)) == 4);
    const auto [m1, m2] = ring_alternating_masks(8);
    CHECK(__builtin_popcount(m1) == 4);
    CHECK(__builtin_popcount(m2) == 4);

    MisSpec nonRing;
    nonRing.graph.nodes = 3;
    nonRing.graph.edges = {{0, 1}};
    const BlockadeSubspace sub3 = build_blockade_subspace(nonRing.graph);
    CHECK_THROWS_AS(mis_solution_state(nonRing, sub3), std::invalid_argument);
}

TEST_CASE("blockade propagation converges to the projected model as V_r grows") {
    const int n = 6;
    const double tf = 10.0;
    ControlPulse omega, delta;
    omega.reference = ReferencePulse::squaredSine(0.9, 0.0, tf);
    delta.reference = ReferencePulse::rapDelta(-1.0, 0.0, tf);
    const ControlSet controls{{omega, delta}, {"Omega", "Delta"}};

    MisSpec projectedSpec;
    projectedSpec.graph = Graph::ring(n);
    projectedSpec.controls = controls;
    const BlockadeSubspace sub = build_blockade_subspace(projectedSpec.graph);
    const Matrix p = blockade_projector(sub);
    const TimeGrid grid(0.0, tf, 400);

    Vector psi0Full = Vector::Zero(1 << n);
    psi0Full(0) = 1.0;
    const Trajectory projTraj = propagate_closed(mis_subspace_model(projectedSpec, sub),
                                                 QuantumState::pure(p * psi0Full), grid);
    const Vector projFinalFull = p.adjoint() * projTraj.final_state().vector();

    double prevErr = -1.0;
    for (const double v : {10.0, 40.0, 160.0}) {
        MisSpec fullSpec = projectedSpec;
        fullSpec.vR = v;
        const Trajectory fullTraj =
            propagate_closed(mis_full_model(fullSpec), QuantumState::pure(psi0Full), grid);
        const double err = (fullTraj.final_state().vector() - projFinalFull).norm();
        if (prevErr > 0.0) CHECK(err < 0.5 * prevErr);
        prevErr = err;
    }
    CHECK(prevErr < 0.8 * 0.9 * 0.9 * 10.0 / 160.0 * 2.0); // ~ Omega^2 tf / V
}

TEST_CASE("ring sector is an exact invariant subspace") {
    for (const int n : {4, 6, 8, 10}) {
        const RingSector sector = build_ring_sector(n);
        const BlockadeSubspace sub = build_blockade_subspace(Graph::ring(n));
        const Matrix s = sector.embedding(sub);

        // isometry
        CHECK((s.adjoint() * s - Matrix::Identity(sector.dim, sector.dim)).norm() < 1e-12);

        ControlPulse omega, delta;
        omega.reference = ReferencePulse::constant(0.73, 0.0, 1.0);
        delta.reference = ReferencePulse::constant(-0.31, 0.0, 1.0);
        const ControlSet controls{{omega, delta}, {"Omega", "Delta"}};

        MisSpec spec;
        spec.graph = Graph::ring(n);
        spec.controls = controls;
        const Operator hBlock = mis_hamiltonian_projected(spec, sub, 0.5);
        const Operator hSector = mis_sector_model(sector, controls).hamiltonianAt(0.5);
        CHECK(hermiticity_defect(hSector) < 1e-12);
        // intertwiner: H_block S = S H_sector
        CHECK((hBlock * s - s * hSector).norm() < 1e-12);
    }
}

TEST_CASE("sector propagation matches blockade-subspace propagation") {
    const int n = 8;
    const double tf = 12.0;
    ControlPulse omega, delta;
    omega.reference = ReferencePulse::squaredSine(1.1, 0.0, tf);
    delta.reference = ReferencePulse::rapDelta(-1.0, 0.0, tf);
    const ControlSet controls{{omega, delta}, {"Omega", "Delta"}};

    const RingSector sector = build_ring_sector(n);
    const BlockadeSubspace sub = build_blockade_subspace(Graph::ring(n));
    const Matrix s = sector.embedding(sub);
    const TimeGrid grid(0.0, tf, 600);

    MisSpec spec;
    spec.graph = Graph::ring(n);
    spec.controls = controls;

    const Trajectory inSector =
        propagate_closed(mis_sector_model(sector, controls), sector_initial_state(sector), grid);
    Vector psi0g = Vector::Zero(sub.dim);
    for (int i = 0; i < sub.dim; ++i)
        if (sub.basisStates[i] == 0) psi0g(i) = 1.0;
    const Trajectory inSubspace =
        propagate_closed(mis_subspace_model(spec, sub), QuantumState::pure(psi0g), grid);

    for (int k = 0; k <= grid.nSteps; k += 100)
        CHECK((s * inSector.states[k].vector() - inSubspace.states[k].vector()).norm() < 1e-8);

    // target states agree through the embedding
    const QuantumState solution = mis_solution_state(spec, sub);
    CHECK((s * sector_target_state(sector).vector() - solution.vector()).norm() < 1e-12);

    // ground states agree wherever the drive is on
    for (const double t : {0.2 * tf, 0.5 * tf, 0.8 * tf}) {
        const EigenSystem gSector =
            hermitian_eigen(mis_sector_model(sector, controls).hamiltonianAt(t));
        const EigenSystem gBlock = hermitian_eigen(mis_hamiltonian_projected(spec, sub, t));
        const double overlap = std::abs((s * gSector.vectors.col(0)).dot(gBlock.vectors.col(0)));
        CHECK(overlap == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("sector reference trajectory matches the spec ground tracker") {
    const int n = 10;
    const double tf = 32.0;
    const TimeGrid grid(0.0, tf, 200);
    const RingSector sector = build_ring_sector(n);

    ControlPulse omega;
    omega.basis = BasisKind::Gaussian;
    omega.reference = ReferencePulse::squaredSine(2.0 * 4.0 * kPi / tf, 0.0, tf);
    omega.gaussians = {{0.4, 9.0, 3.0}, {-0.25, 21.0, 5.0}};
    ControlPulse delta;
    delta.reference = ReferencePulse::rapDelta(-1.0, 0.0, tf);
    const ControlSet controls{{omega, delta}, {"Omega", "Delta"}};

    MisSectorProblem problem(sector, grid);
    const Trajectory fast = problem.referenceTrajectory(controls);
    const Trajectory exact =
        instantaneous_ground_trajectory(mis_sector_model(sector, controls), grid);
    REQUIRE(fast.states.size() == exact.states.size());
    for (std::size_t k = 0; k < fast.states.size(); k += 10)
        CHECK(fidelity_amplitude(fast.states[k], exact.states[k]) ==
              doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("action-based closed propagation matches the eigendecomposition route") {
    const int n = 8;
    const double tf = 32.0;
    const TimeGrid grid(0.0, tf, 150);
    const RingSector sector = build_ring_sector(n);
    ControlPulse omega;
    omega.reference = ReferencePulse::squaredSine(2.0 * 4.0 * kPi / tf, 0.0, tf);
    ControlPulse delta;
    delta.reference = ReferencePulse::rapDelta(-1.0, 0.0, tf);
    const ControlSet controls{{omega, delta}, {"Omega", "Delta"}};
    const LindbladModel model = mis_sector_model(sector, controls);

    const Trajectory viaEigh = propagate_closed(model, sector_initial_state(sector), grid);
    const Trajectory viaAction =
        propagate_closed_action(model, sector_initial_state(sector), grid);
    for (std::size_t k = 0; k < viaEigh.states.size(); k += 15)
        CHECK((viaEigh.states[k].vector() - viaAction.states[k].vector()).norm() < 1e-11);
}
