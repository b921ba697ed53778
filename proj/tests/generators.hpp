#pragma once

#include <cmath>
#include <random>

#include "chronoq/model.hpp"

// Hand-rolled generators for the property tests.
namespace chronoq::testgen {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// |w| <= 1, |J| <= 0.01, 0 <= Omega <= 0.05, phases in [-pi, pi].
inline SystemParameters random_params(std::mt19937_64& rng) {
  SystemParameters p;
  p.w1 = uniform(rng, -1.0, 1.0);
  p.w2 = uniform(rng, -1.0, 1.0);
  p.j = uniform(rng, -0.01, 0.01);
  p.omega = uniform(rng, 0.0, 0.05);
  p.phi1 = uniform(rng, -M_PI, M_PI);
  p.phi2 = uniform(rng, -M_PI, M_PI);
  return p;
}

inline TwoQubitState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  TwoQubitState s;
  for (std::size_t k = 0; k < 4; ++k) s[k] = {g(rng), g(rng)};
  s *= 1.0 / std::sqrt(s.norm2());
  return s;
}

}  // namespace chronoq::testgen
