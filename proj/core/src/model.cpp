#include "chronoq/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chronoq/errors.hpp"

namespace chronoq {

void SystemParameters::validate() const {
  for (double v : {w1, w2, j, omega, phi1, phi2}) {
    if (!std::isfinite(v)) {
      throw UsageError("system parameters must be finite");
    }
  }
  if (omega < 0.0) {
    throw UsageError("Rabi frequency omega must be >= 0, got " + std::to_string(omega));
  }
}

double TwoQubitState::norm2() const {
  double sum = 0.0;
  for (const auto& c : amplitudes) sum += std::norm(c);
  return sum;
}

bool TwoQubitState::is_finite() const {
  for (const auto& c : amplitudes) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

TwoQubitState TwoQubitState::basis(std::size_t k) {
  if (k > 3) throw UsageError("basis index must be in 0..3");
  TwoQubitState s;
  s.amplitudes[k] = 1.0;
  return s;
}

TwoQubitState& TwoQubitState::operator+=(const TwoQubitState& other) {
  for (std::size_t k = 0; k < 4; ++k) amplitudes[k] += other.amplitudes[k];
  return *this;
}

TwoQubitState& TwoQubitState::operator*=(Complex factor) {
  for (auto& c : amplitudes) c *= factor;
  return *this;
}

double max_amplitude_distance(const TwoQubitState& a, const TwoQubitState& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < 4; ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

TwoQubitState HamiltonianMatrix::apply(const TwoQubitState& state) const {
  TwoQubitState out;
  for (std::size_t r = 0; r < 4; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < 4; ++c) acc += entries_[r][c] * state[c];
    out[r] = acc;
  }
  return out;
}

double HamiltonianMatrix::trace() const {
  double t = 0.0;
  for (std::size_t k = 0; k < 4; ++k) t += entries_[k][k].real();
  return t;
}

double drive_phase(const SystemParameters& params, int qubit, double t) {
  switch (qubit) {
    case 1:
      return params.w1 * t + params.phi1;
    case 2:
      return params.w2 * t + params.phi2;
    default:
      throw UsageError("qubit index must be 1 or 2, got " + std::to_string(qubit));
  }
}

std::array<double, 4> diagonal_energies(const SystemParameters& p) {
  return {-(p.w1 + p.w2) - p.j,
          -(p.w1 - p.w2) + p.j,
          -(-p.w1 + p.w2) + p.j,
          -(-p.w1 - p.w2) - p.j};
}

HamiltonianMatrix hamiltonian(const SystemParameters& params, double t) {
  HamiltonianMatrix m;
  auto& e = m.entries_;

  const auto energies = diagonal_energies(params);
  for (std::size_t k = 0; k < 4; ++k) e[k][k] = energies[k];

  const double half = 0.5 * params.omega;
  // (Omega/2) e^{-i theta}
  const Complex drive1 = std::polar(half, -drive_phase(params, 1, t));
  const Complex drive2 = std::polar(half, -drive_phase(params, 2, t));

  // Single spin flips only; qubit 2 couples 00<->01 and 10<->11, qubit 1
  // couples 00<->10 and 01<->11.
  e[0][1] = drive2;
  e[0][2] = drive1;
  e[1][3] = drive1;
  e[2][3] = drive2;

  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = r + 1; c < 4; ++c) e[c][r] = std::conj(e[r][c]);
  }
  return m;
}

TwoQubitState rhs(const SystemParameters& params, double t, const TwoQubitState& state) {
  auto d = hamiltonian(params, t).apply(state);
  d *= Complex(0.0, -1.0);
  return d;
}

}  // namespace chronoq
