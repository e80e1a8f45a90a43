#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "tlq/netlist.hpp"
#include "tlq/spectral.hpp"
#include "tlq/tline.hpp"

namespace tlq::testing {

inline CircuitTopology lc_topology(const LcExampleParams& p) {
  CircuitTopology t;
  t.node_count = 1;
  t.capacitors.push_back({1, 2, p.c_r});
  t.inductors.push_back({1, 2, p.l_r});
  t.coupling_capacitance = p.c_c;
  return t;
}

inline LineParams lc_line(const LcExampleParams& p, double v_p = 1.0) {
  return line_from_impedance(p.z_c, v_p);
}

/// Random valid topology: every node has a capacitor and an inductive element to ground,
/// plus random inter-node capacitors, inductors and junctions. Values carry a common scale.
inline CircuitTopology random_topology(std::mt19937_64& rng, int max_nodes = 20) {
  std::uniform_int_distribution<int> nodes(1, max_nodes);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double scale = std::pow(10.0, -15.0 + 3.0 * u(rng));
  CircuitTopology t;
  t.node_count = nodes(rng);
  const int ground = t.ground();
  for (int i = 1; i <= t.node_count; ++i) {
    t.capacitors.push_back({i, ground, scale * (0.5 + 1.5 * u(rng))});
    if (u(rng) < 0.3)
      t.junctions.push_back({i, ground, 1e-23 * (0.5 + u(rng))});
    else
      t.inductors.push_back({i, ground, 1e-9 * (0.5 + u(rng))});
    for (int j = i + 1; j <= t.node_count; ++j) {
      if (u(rng) < 0.2) t.capacitors.push_back({i, j, scale * (0.1 + u(rng))});
      if (u(rng) < 0.05) t.inductors.push_back({i, j, 1e-9 * (0.5 + u(rng))});
    }
  }
  t.coupling_capacitance = scale * (0.05 + 2.0 * u(rng));
  return t;
}

/// Closed-form roots of a3 x³ + a2 x² + a1 x + a0 (a3 != 0) by the Cardano/trigonometric
/// formulas, kept independent of the companion-matrix solver.
inline std::vector<std::complex<double>> cardano_roots(double a3, double a2, double a1, double a0) {
  using C = std::complex<double>;
  const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
  // x = y − b/3 turns the cubic into y³ + P y + Q.
  const double P = c - b * b / 3.0;
  const double Q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = Q * Q / 4.0 + P * P * P / 27.0;
  const double shift = -b / 3.0;
  std::vector<C> r;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-Q / 2.0 + sq), v = std::cbrt(-Q / 2.0 - sq);
    const double re = -(u + v) / 2.0, im = std::sqrt(3.0) / 2.0 * (u - v);
    r = {C(u + v + shift, 0.0), C(re + shift, im), C(re + shift, -im)};
  } else {
    const double m = 2.0 * std::sqrt(-P / 3.0);
    const double arg = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      r.emplace_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift, 0.0);
  }
  return r;
}

/// Largest distance from any root in `a` to its nearest neighbour in `b`.
inline double root_set_distance(const std::vector<std::complex<double>>& a,
                                const std::vector<std::complex<double>>& b) {
  double worst = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

/// Least-squares slope of log(values) against times.
inline double log_slope(const std::vector<std::pair<double, double>>& points) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [t, v] : points) {
    const double y = std::log(v);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace tlq::testing
