#include "chronoq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chronoq/errors.hpp"

namespace chronoq {

void PropagatorConfig::validate() const {
  if (!(slice_dt > 0.0) || !std::isfinite(slice_dt)) {
    throw UsageError("slice_dt must be a finite positive number");
  }
}

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kMaxSlices = 1e9;

double off_diagonal_mass(const Matrix4& a) {
  double off = 0.0;
  for (std::size_t p = 0; p < 4; ++p) {
    for (std::size_t q = p + 1; q < 4; ++q) off += std::norm(a[p][q]);
  }
  return off;
}

long long slice_count(double t_start, double t_end, double slice_dt) {
  const double ratio = std::abs(t_end - t_start) / slice_dt;
  if (ratio > kMaxSlices) throw UsageError("propagator slice count exceeds 1e9");
  return std::max(1LL, static_cast<long long>(std::ceil(ratio - 1e-9)));
}

}  // namespace

Eigensystem hermitian_eigensystem(const Matrix4& hermitian) {
  Matrix4 a = hermitian;
  Matrix4 v{};
  for (std::size_t k = 0; k < 4; ++k) v[k][k] = 1.0;

  double frob = 0.0;
  for (const auto& row : a) {
    for (const auto& x : row) frob += std::norm(x);
  }
  const double stop = frob * 1e-34;
  // Rotations this small no longer move anything at double precision.
  const double skip = std::sqrt(frob) * 1e-18;

  Eigensystem out;
  for (int sweep = 0;; ++sweep) {
    if (off_diagonal_mass(a) <= stop) {
      out.sweeps = sweep;
      break;
    }
    if (sweep == kMaxSweeps) throw NumericalError("Jacobi eigensolver did not converge");

    for (std::size_t p = 0; p < 3; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) {
        const double mag = std::sqrt(std::norm(a[p][q]));
        if (mag <= skip) continue;
        const Complex phase = a[p][q] / mag;  // e^{i alpha}

        // Real Jacobi rotation on the phase-stripped 2x2 block.
        const double tau = (a[q][q].real() - a[p][p].real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex s_pq = s * phase;             // J(p,q)
        const Complex s_qp = -s * std::conj(phase);  // J(q,p)

        // A <- J^dagger A J, touching only rows/columns p and q and keeping
        // the lower triangle as the conjugate of the upper.
        for (std::size_t k = 0; k < 4; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = a[k][p];
          const Complex akq = a[k][q];
          a[k][p] = c * akp + s_qp * akq;
          a[k][q] = s_pq * akp + c * akq;
          a[p][k] = std::conj(a[k][p]);
          a[q][k] = std::conj(a[k][q]);
        }
        a[p][p] = a[p][p].real() - t * mag;
        a[q][q] = a[q][q].real() + t * mag;
        a[p][q] = 0.0;
        a[q][p] = 0.0;
        // V <- V J
        for (std::size_t k = 0; k < 4; ++k) {
          const Complex vkp = v[k][p];
          const Complex vkq = v[k][q];
          v[k][p] = c * vkp + s_qp * vkq;
          v[k][q] = s_pq * vkp + c * vkq;
        }
      }
    }
  }

  for (std::size_t k = 0; k < 4; ++k) out.values[k] = a[k][k].real();
  out.vectors = v;
  return out;
}

Matrix4 multiply(const Matrix4& a, const Matrix4& b) {
  Matrix4 out{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k) acc += a[r][k] * b[k][c];
      out[r][c] = acc;
    }
  }
  return out;
}

Matrix4 adjoint(const Matrix4& a) {
  Matrix4 out{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) out[r][c] = std::conj(a[c][r]);
  }
  return out;
}

TwoQubitState apply_unitary(const Matrix4& u, const TwoQubitState& state) {
  TwoQubitState out;
  for (std::size_t r = 0; r < 4; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < 4; ++c) acc += u[r][c] * state[c];
    out[r] = acc;
  }
  return out;
}

Matrix4 slice_unitary(const HamiltonianMatrix& m, double delta) {
  const auto eig = hermitian_eigensystem(m.entries());
  std::array<Complex, 4> phases;
  for (std::size_t k = 0; k < 4; ++k) phases[k] = std::polar(1.0, -eig.values[k] * delta);

  Matrix4 u{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k) {
        acc += eig.vectors[r][k] * phases[k] * std::conj(eig.vectors[c][k]);
      }
      u[r][c] = acc;
    }
  }
  return u;
}

TwoQubitState evolve_diagonal(const SystemParameters& params, const TwoQubitState& initial,
                              double t) {
  if (params.omega != 0.0) throw UsageError("evolve_diagonal requires omega == 0");
  const auto energies = diagonal_energies(params);
  TwoQubitState out;
  for (std::size_t k = 0; k < 4; ++k) out[k] = std::polar(1.0, -energies[k] * t) * initial[k];
  return out;
}

namespace {

using WideComplex = std::complex<long double>;

// y <- U (I - E/2) y with E = U^dagger U - I, evaluated in extended
// precision. A double-precision U misses unitarity by ~1e-16 in a way that
// repeats from slice to slice; the correction removes that bias to first
// order so the norm only sees unbiased rounding of the result.
TwoQubitState apply_unitary_polished(const Matrix4& u, const TwoQubitState& y) {
  std::array<WideComplex, 4> in, w, r;
  for (std::size_t k = 0; k < 4; ++k) in[k] = WideComplex(y[k].real(), y[k].imag());

  auto wide = [&](std::size_t row, std::size_t col) {
    return WideComplex(u[row][col].real(), u[row][col].imag());
  };
  for (std::size_t i = 0; i < 4; ++i) {
    WideComplex acc = 0.0L;
    for (std::size_t j = 0; j < 4; ++j) acc += wide(i, j) * in[j];
    w[i] = acc;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    WideComplex acc = 0.0L;
    for (std::size_t j = 0; j < 4; ++j) acc += std::conj(wide(j, i)) * w[j];
    r[i] = acc - in[i];
  }
  TwoQubitState out;
  for (std::size_t i = 0; i < 4; ++i) {
    WideComplex acc = 0.0L;
    for (std::size_t j = 0; j < 4; ++j) acc += wide(i, j) * r[j];
    const WideComplex v = w[i] - 0.5L * acc;
    out[i] = Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  }
  return out;
}

std::vector<TimedState> propagate_slices(const SystemParameters& params,
                                         const TwoQubitState& initial, double t_start,
                                         double t_end, long long slices, long long every) {
  std::vector<TimedState> out{{t_start, initial}};
  const double width = (t_end - t_start) / static_cast<double>(slices);
  TwoQubitState y = initial;
  for (long long k = 0; k < slices; ++k) {
    const double mid = t_start + (static_cast<double>(k) + 0.5) * width;
    y = apply_unitary_polished(slice_unitary(hamiltonian(params, mid), width), y);
    if ((k + 1) % every == 0 || k + 1 == slices) {
      const double t = k + 1 == slices ? t_end : t_start + static_cast<double>(k + 1) * width;
      out.push_back({t, y});
    }
  }
  return out;
}

}  // namespace

std::vector<TimedState> propagator_samples(const SystemParameters& params,
                                           const TwoQubitState& initial, double t_start,
                                           double t_end, const PropagatorConfig& config,
                                           long long every) {
  params.validate();
  config.validate();
  if (every < 1) throw UsageError("sampling interval must be >= 1");
  if (t_start == t_end) return {{t_start, initial}};
  const long long n = slice_count(t_start, t_end, config.slice_dt);
  return propagate_slices(params, initial, t_start, t_end, n, every);
}

TwoQubitState evolve_propagator(const SystemParameters& params, const TwoQubitState& initial,
                                double t_start, double t_end, const PropagatorConfig& config) {
  params.validate();
  config.validate();
  if (t_start == t_end) return initial;
  const long long n = slice_count(t_start, t_end, config.slice_dt);
  return propagate_slices(params, initial, t_start, t_end, n, n).back().state;
}

TwoQubitState evolve_propagator_extrapolated(const SystemParameters& params,
                                             const TwoQubitState& initial, double t_start,
                                             double t_end, const PropagatorConfig& config) {
  params.validate();
  config.validate();
  if (t_start == t_end) return initial;
  const long long n = slice_count(t_start, t_end, config.slice_dt);
  const auto coarse = propagate_slices(params, initial, t_start, t_end, n, n).back().state;
  const auto fine = propagate_slices(params, initial, t_start, t_end, 2 * n, 2 * n).back().state;
  TwoQubitState out;
  for (std::size_t k = 0; k < 4; ++k) out[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
  return out;
}

}  // namespace chronoq
