#pragma once

#include <string>
#include <vector>

#include "adiqoc/types.hpp"

namespace adiqoc {

// Operators are dense complex square matrices. Hamiltonian entries carry
// angular-frequency units (rad per time unit).
using Operator = Matrix;

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator identity_op(int dim);

double hermiticity_defect(const Operator& op);
bool is_hermitian(const Operator& op, double relTol = 1e-12);

/// Kronecker product of a list of operators, leftmost factor most significant.
Operator tensor_product(const std::vector<Operator>& ops);

enum class Representation { PureVector, DensityMatrix };

// Immutable quantum state; validates normalization / trace / positivity
// at construction.
class QuantumState {
public:
    static QuantumState pure(Vector psi);
    static QuantumState density(Matrix rho);
    // Skips the positivity eigencheck; for propagator-internal use where the
    // construction guarantees validity (invariants are covered by tests).
    static QuantumState densityUnchecked(Matrix rho);

    Representation representation() const { return repr_; }
    bool isPure() const { return repr_ == Representation::PureVector; }
    int dim() const { return dim_; }

    const Vector& vector() const;
    const Matrix& matrix() const;

    /// Density-matrix view (|psi><psi| for pure states).
    Matrix densityMatrix() const;

private:
    QuantumState(Representation r, int dim, Vector v, Matrix m)
        : repr_(r), dim_(dim), vec_(std::move(v)), mat_(std::move(m)) {}

    Representation repr_;
    int dim_;
    Vector vec_;
    Matrix mat_;
};

struct EigenSystem {
    RealVector values;       // ascending
    Matrix vectors;          // orthonormal columns, phase-fixed
    std::string phaseConvention = "largest-magnitude component real positive";
};

/// Eigendecomposition of a Hermitian operator with a deterministic phase
/// and degeneracy convention: eigenvalues ascend, each vector is rotated so
/// its largest-magnitude component is real and positive, and degenerate
/// groups are ordered by the index of that component.
EigenSystem hermitian_eigen(const Operator& h);

/// Fidelity amplitude Tr sqrt(sqrt(rho_a) rho_b sqrt(rho_a)); collapses to
/// |<a|b>| for pure states and to sqrt(<psi|rho|psi>) for pure-vs-mixed.
double fidelity_amplitude(const QuantumState& a, const QuantumState& b);

} // namespace adiqoc
