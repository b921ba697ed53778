#pragma once

#include <array>
#include <vector>

#include "chronoq/model.hpp"

namespace chronoq {

/// Reference evolution backends. Nothing here touches the Runge-Kutta code;
/// only hamiltonian() is shared.

struct PropagatorConfig {
  double slice_dt = 0.001;  // Hamiltonian frozen at each slice midpoint

  void validate() const;
};

using Matrix4 = std::array<std::array<Complex, 4>, 4>;

/// Eigenpairs of a Hermitian 4x4 matrix; column k of `vectors` belongs to values[k].
struct Eigensystem {
  std::array<double, 4> values{};
  Matrix4 vectors{};
  int sweeps = 0;
};

/// Cyclic complex Jacobi rotations. Throws NumericalError if the off-diagonal
/// mass has not vanished after 100 sweeps.
Eigensystem hermitian_eigensystem(const Matrix4& hermitian);

/// exp(-i M delta) assembled as V diag(exp(-i lambda delta)) V^dagger.
Matrix4 slice_unitary(const HamiltonianMatrix& m, double delta);

Matrix4 multiply(const Matrix4& a, const Matrix4& b);
Matrix4 adjoint(const Matrix4& a);
TwoQubitState apply_unitary(const Matrix4& u, const TwoQubitState& state);

/// Closed-form evolution from t = 0 when omega = 0: C_k(t) = exp(-i E_k t) C_k(0).
TwoQubitState evolve_diagonal(const SystemParameters& params, const TwoQubitState& initial,
                              double t);

/// Ordered product of midpoint slice unitaries. Slices are uniform with
/// width |t_end - t_start| / ceil(|t_end - t_start| / slice_dt).
TwoQubitState evolve_propagator(const SystemParameters& params, const TwoQubitState& initial,
                                double t_start, double t_end, const PropagatorConfig& config);

/// Same product, keeping the state at every `every`-th slice boundary
/// (plus both endpoints).
std::vector<TimedState> propagator_samples(const SystemParameters& params,
                                           const TwoQubitState& initial, double t_start,
                                           double t_end, const PropagatorConfig& config,
                                           long long every);

/// Richardson combination (4 U_{d/2} - U_d) / 3 of two propagator runs. The
/// midpoint product is symmetric, so its error expands in even powers of the
/// slice width and the combination is fourth order.
TwoQubitState evolve_propagator_extrapolated(const SystemParameters& params,
                                             const TwoQubitState& initial, double t_start,
                                             double t_end, const PropagatorConfig& config);

}  // namespace chronoq
