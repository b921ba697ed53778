#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>

namespace chronoq {

using Complex = std::complex<double>;

/// Physical constants of the driven two-qubit system (hbar = 1).
struct SystemParameters {
  double w1 = 0.2;     // Larmor frequency, qubit 1
  double w2 = 0.0015;  // Larmor frequency, qubit 2
  double j = 0.0015;   // spin-spin coupling, either sign
  double omega = 0.01; // Rabi frequency, >= 0
  double phi1 = std::numbers::pi / 2;
  double phi2 = std::numbers::pi / 4;

  /// Throws UsageError on omega < 0 or any non-finite field.
  void validate() const;

  friend bool operator==(const SystemParameters&, const SystemParameters&) = default;
};

/// The constants the CNOT experiment was run with.
inline constexpr SystemParameters kPaperDefaults{};

/// Amplitudes over the basis (|00>, |01>, |10>, |11>).
struct TwoQubitState {
  std::array<Complex, 4> amplitudes{};

  Complex& operator[](std::size_t k) { return amplitudes[k]; }
  const Complex& operator[](std::size_t k) const { return amplitudes[k]; }

  double norm2() const;
  bool is_finite() const;

  static TwoQubitState basis(std::size_t k);

  TwoQubitState& operator+=(const TwoQubitState& other);
  TwoQubitState& operator*=(Complex factor);

  friend TwoQubitState operator+(TwoQubitState a, const TwoQubitState& b) { return a += b; }
  friend TwoQubitState operator*(Complex s, TwoQubitState a) { return a *= s; }
  friend bool operator==(const TwoQubitState&, const TwoQubitState&) = default;
};

/// One point of a trajectory.
struct TimedState {
  double t = 0.0;
  TwoQubitState state;
};

/// Largest componentwise |a_k - b_k|.
double max_amplitude_distance(const TwoQubitState& a, const TwoQubitState& b);

/// 4x4 Hermitian generator M(t) with i dC/dt = M(t) C.
class HamiltonianMatrix {
 public:
  using Entries = std::array<std::array<Complex, 4>, 4>;

  HamiltonianMatrix() = default;

  const Complex& operator()(std::size_t row, std::size_t col) const { return entries_[row][col]; }
  const Entries& entries() const { return entries_; }

  TwoQubitState apply(const TwoQubitState& state) const;
  double trace() const;

 private:
  friend HamiltonianMatrix hamiltonian(const SystemParameters& params, double t);
  Entries entries_{};
};

/// theta_i = w_i t + phi_i. qubit must be 1 or 2.
double drive_phase(const SystemParameters& params, int qubit, double t);

/// Assemble M(t). The upper triangle is evaluated once and mirrored as its
/// conjugate, so the result is Hermitian bit for bit.
HamiltonianMatrix hamiltonian(const SystemParameters& params, double t);

/// Diagonal energies E_k = M(k,k); independent of t.
std::array<double, 4> diagonal_energies(const SystemParameters& params);

/// dC/dt = -i M(t) C.
TwoQubitState rhs(const SystemParameters& params, double t, const TwoQubitState& state);

}  // namespace chronoq
