#include "adiqoc/models/rap.hpp"

#include <stdexcept>

namespace adiqoc {

Operator rap_hamiltonian_at(const RapSpec& spec, double t) {
    if (!(spec.perturbation.epsilon >= 0.0))
        throw std::invalid_argument("rap_hamiltonian_at: epsilon must be nonnegative");
    const double omega = spec.perturbation.epsilon * evaluate(spec.controls.byLabel("Omega"), t);
    const double delta = evaluate(spec.controls.byLabel("Delta"), t) + spec.perturbation.deltaDopp;
    Operator h(2, 2);
    h << delta, omega, omega, -delta;
    return h;
}

LindbladModel rap_model(const RapSpec& spec) {
    LindbladModel model;
    model.dim = 2;
    model.hamiltonianAt = [spec](double t) { return rap_hamiltonian_at(spec, t); };
    return model;
}

QuantumState rap_initial_state() {
    Vector psi(2);
    psi << 1, 0;
    return QuantumState::pure(psi);
}

QuantumState rap_target_state() {
    Vector psi(2);
    psi << 0, 1;
    return QuantumState::pure(psi);
}

} // namespace adiqoc
