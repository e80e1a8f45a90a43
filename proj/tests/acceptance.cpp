// Acceptance gate: one PASS/FAIL line per criterion. `acceptance N...` runs a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tlq/inversion.hpp"
#include "tlq/ladder.hpp"
#include "tlq/netlist.hpp"
#include "tlq/quantum.hpp"
#include "tlq/reduced_dynamics.hpp"
#include "tlq/spectral.hpp"

using namespace tlq;
using tlq::testing::lc_line;
using tlq::testing::lc_topology;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// max |a − b| / max |b|
double peak_relative(const std::vector<double>& a, const std::vector<double>& b) {
  return max_abs_diff(a, b) / max_abs(b);
}

void c1_identities(Outcome& o) {
  std::mt19937_64 rng(20240611);
  double worst_cb = 0.0, worst_cp = 0.0, worst_ab = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const CircuitTopology t = tlq::testing::random_topology(rng, 20);
    const ReducedModel m = derive_reduced_model(t, 50.0);
    const ModelResiduals r = check_invariants(m, t.coupling_capacitance);
    worst_cb = std::max(worst_cb, r.cb_p_minus_e1);
    worst_cp = std::max(worst_cp, r.c_p_identity);
    worst_ab = std::max(worst_ab, r.a_plus_b);
  }
  o.detail << "1000 topologies, max residuals Cb.p=1: " << worst_cb << ", 1/Cp: " << worst_cp
           << ", A+B: " << worst_ab;
  o.require(worst_cb <= 1e-12 && worst_cp <= 1e-12 && worst_ab <= 1e-12, "residual <= 1e-12");
}

void c2_stability(Outcome& o) {
  // Residuals are scaled by Σ|a_k||s|^k: at |s| ~ 300 the double nearest the exact root
  // already leaves |p| ~ 1e-11, so an unscaled bound would measure representation error.
  double max_re = -1e300, max_res = 0.0, max_abs_res = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double g = i / 101.0;
    for (int j = 1; j <= 100; ++j) {
      const double alpha = 0.05 + 4.95 * j / 100.0;
      const CubicCoefficients c = char_poly(g, alpha);
      const PoleSet ps = find_poles(c);
      const Polynomial p = c.polynomial();
      for (const auto& s : ps.poles) {
        max_re = std::max(max_re, s.real());
        double scale = 0.0;
        for (int k = 0; k <= 3; ++k) scale += std::abs(p.coefficient(k)) * std::pow(std::abs(s), k);
        max_res = std::max(max_res, std::abs(p(s)) / scale);
        max_abs_res = std::max(max_abs_res, std::abs(p(s)));
      }
    }
  }
  o.detail << "100x100 grid, max Re(pole) = " << max_re << ", max scaled |p(root)| = " << max_res
           << " (unscaled " << max_abs_res << ")";
  o.require(max_re < 0.0, "Re < 0");
  o.require(max_res <= 1e-12, "|p(root)| <= 1e-12");
}

void c3_weak_asymptotics(Outcome& o) {
  const std::vector<std::pair<double, double>> cases{
      {0.5, 0.01}, {0.5, 0.02}, {1.0, 0.005}, {1.0, 0.01}, {2.0, 0.005}, {0.1, 0.1}, {5.0, 0.002}};
  double worst_im = 0.0, worst_re = 0.0, worst_re_ratio = 0.0;
  for (const auto& [alpha, g] : cases) {
    const PoleSet ps = find_poles(char_poly(g, alpha));
    const Complex s2 = ps[1];
    worst_im = std::max(worst_im, std::abs(s2.imag() - std::sqrt(1.0 - g)) / std::sqrt(1.0 - g));
    const double target = alpha * g * g;
    worst_re = std::max(worst_re, std::abs(s2.real() + target) / target);
    worst_re_ratio = std::max(worst_re_ratio, -s2.real() / target);
  }
  double worst_s1 = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const PoleSet ps = find_poles(char_poly(0.001, alpha));
    const double target = -1.0 / (alpha * 0.001);
    worst_s1 = std::max(worst_s1, std::abs(ps[0].real() - target) / std::abs(target));
  }
  o.detail << "Im(s2) vs sqrt(1-g): " << worst_im << "; Re(s2) vs -alpha g^2: " << worst_re
           << " (Re(s2)/(-alpha g^2) = " << worst_re_ratio << "); s1 vs -1/(alpha g): " << worst_s1;
  o.require(worst_im <= 0.01, "Im within 1%");
  o.require(worst_re <= 0.10, "Re within 10%");
  o.require(worst_s1 <= 0.05, "s1 within 5%");
}

void c4_pole_loci(Outcome& o) {
  const std::vector<double> grid = uniform_grid(0.001, 0.999, 0.001);
  for (double alpha : {0.5, 1.0, 2.0}) {
    const PoleLocus l = pole_locus(alpha, grid);
    const auto& first = l.branches.front();
    const auto& last = l.branches.back();
    bool aperiodic_pair = false;
    for (const auto& b : l.branches) aperiodic_pair = aperiodic_pair || b[1].imag() == 0.0;
    // Smallest pole magnitude at g = 0.999 and at g = 0.9.
    auto smallest = [](const std::array<Complex, 3>& b) {
      return std::min({std::abs(b[0]), std::abs(b[1]), std::abs(b[2])});
    };
    const double at_09 = smallest(l.branches[899]);
    o.detail << "alpha=" << alpha << ": s1(0.001)=" << first[0].real() << ", s1(0.999)=" << last[0].real()
             << ", min|s|(0.999)=" << smallest(last) << ", transitions=" << l.transitions.size() << "; ";
    o.require(first[0].real() < -100.0, "s1 diverges as g -> 0");
    if (alpha >= 1.0) {
      o.require(std::abs(last[0]) < 0.01 && std::abs(last[0]) < std::abs(l.branches[899][0]),
                "s1 -> 0 as g -> 1");
      o.require(!aperiodic_pair, "no Im(s2) = 0 transition for alpha >= 1");
    } else {
      o.require(smallest(last) < 0.01 && smallest(last) < at_09, "a pole -> 0 as g -> 1");
      o.require(aperiodic_pair && !l.transitions.empty(), "Im(s2) = 0 transition for alpha = 0.5");
    }
  }
}

void c5_oracle_triangle(Outcome& o) {
  for (double g : {0.3, 0.8}) {
    const double alpha = 2.0;
    const LcExampleParams p = LcExampleParams::from_normalized(g, alpha);
    const TransferMatrixSpec spec = transfer_matrix(g, alpha);
    const CircuitTopology topo = lc_topology(p);
    const ReducedModel model = derive_reduced_model(topo, p.z_c);
    const ReducedRhs rhs = assemble_rhs(model, topo);
    IfftOptions opts;
    opts.t_max = 10.0 * p.period();

    std::vector<Signal> ifft, pf;
    for (Entry e : all_entries) {
      ifft.push_back(invert_ifft(spec, e, opts).signal);
      pf.push_back(partial_fractions(spec, e).evaluate(ifft.back().grid()));
    }
    const TimeGrid grid = ifft.front().grid();

    // Impulsive initial data reproducing a unit δ in F1 (first column) or F2 (second column).
    ReducedState col1 = ReducedState::zeros(1), col2 = ReducedState::zeros(1);
    col1.q(0) = p.c_r + p.c_c;
    col1.q0 = -p.c_p() * (p.c_r + p.c_c) / p.c_r;
    col2.q0 = p.c_p() / p.tau();
    const Trajectory t1 = integrate(rhs, col1, grid);
    const Trajectory t2 = integrate(rhs, col2, grid);
    const std::vector<double> sim[4] = {t1.phi(1), t2.phi(1), t1.v0, t2.v0};

    double ifft_pf = 0.0, ifft_sim = 0.0, pf_sim = 0.0;
    for (int k = 0; k < 4; ++k) {
      ifft_pf = std::max(ifft_pf, peak_relative(ifft[k].samples(), pf[k].samples()));
      ifft_sim = std::max(ifft_sim, peak_relative(ifft[k].samples(), sim[k]));
      pf_sim = std::max(pf_sim, peak_relative(sim[k], pf[k].samples()));
    }
    o.detail << "g=" << g << ": ifft/pf " << ifft_pf << ", ifft/sim " << ifft_sim << ", pf/sim "
             << pf_sim << "; ";
    o.require(ifft_pf <= 1e-6, "IFFT vs partial fractions <= 1e-6");
    o.require(ifft_sim <= 1e-4 && pf_sim <= 1e-4, "time-domain leg <= 1e-4");
  }
}

void c6_continuum_limit(Outcome& o) {
  const LcExampleParams p = LcExampleParams::from_normalized(0.3, 2.0);
  const CircuitTopology topo = lc_topology(p);
  const ReducedModel model = derive_reduced_model(topo, p.z_c);
  const LineParams line = lc_line(p);
  ReducedState init = ReducedState::zeros(1);
  init.phi(0) = 1.0;
  const TimeGrid grid = TimeGrid::span(10.0 * p.period(), p.period() / 100.0);
  const Trajectory reduced = integrate(assemble_rhs(model, topo), init, grid);
  double previous = 1e300;
  bool monotone = true;
  double last = 0.0;
  for (std::size_t n : {500, 1000, 2000, 4000}) {
    LadderOptions opts;
    opts.n_sections = n;
    const LadderRun run = ladder_oracle(line, topo, model, init, nullptr, grid, opts);
    last = relative_l2(run.trajectory.phi(1), reduced.phi(1));
    o.detail << "n=" << n << ": " << last << "; ";
    monotone = monotone && last < previous;
    previous = last;
  }
  o.require(last <= 0.01, "n=4000 error <= 1%");
  o.require(monotone, "error decreases with n");
}

void c7_commutators(Outcome& o) {
  const LcExampleParams p = LcExampleParams::from_normalized(0.3, 2.0);
  const LineParams line = lc_line(p);
  const double dt = p.period() / 1000.0;
  const std::size_t n = 100;
  const LadderSystem ladder(line, lc_topology(p), n, 2.0 * static_cast<double>(n) * line.v_p * dt);
  const Propagator s = propagator_of(ladder, 5.0 * p.period(), dt);
  const double r = commutator_residual(s);
  o.detail << "dimension " << s.matrix.rows() << ", ||S^T J S - J|| = " << r;
  o.require(r <= 1e-8, "residual <= 1e-8");
}

void c8_langevin(Outcome& o) {
  // Decay rates from log-linear fits to the peaks of |Φ1| over five decay times 2/κ.
  auto rates = [](double g, double alpha, double samples_per_period) {
    const LcExampleParams p = LcExampleParams::from_normalized(g, alpha);
    const CircuitTopology topo = lc_topology(p);
    const ReducedModel model = derive_reduced_model(topo, p.z_c);
    const double kappa = weak_coupling(g, alpha).kappa;
    const TimeGrid grid = TimeGrid::span(5.0 * 2.0 / kappa, p.period() / samples_per_period);
    ReducedState init = ReducedState::zeros(1);
    init.phi(0) = 1.0;
    const Trajectory full = integrate(assemble_rhs(model, topo), init, grid);
    const LangevinWeakResult weak = langevin_weak(p, std::nullopt, 1.0, 0.0, grid);
    const double r_full = -tlq::testing::log_slope(envelope_peaks(grid, full.phi(1)));
    const double r_weak = -tlq::testing::log_slope(envelope_peaks(grid, weak.phi1.samples()));
    return std::pair{r_full, r_weak};
  };
  const auto [full_w, weak_w] = rates(0.1, 0.1, 50.0);
  const double d_weak = std::abs(weak_w - full_w) / full_w;
  const auto [full_s, weak_s] = rates(0.5, 2.0, 400.0);
  const double d_strong = std::abs(weak_s - full_s) / full_s;
  o.detail << "alpha g=0.01: envelope rate full " << full_w << " vs Langevin " << weak_w
           << " (" << d_weak << "); alpha g=1: " << full_s << " vs " << weak_s << " (" << d_strong << ")";
  o.require(d_weak <= 0.05, "agreement within 5% at alpha g = 0.01");
  o.require(d_strong > 0.20, "disagreement above 20% at alpha g = 1");
}

void c9_energy(Outcome& o) {
  const LcExampleParams p = LcExampleParams::from_normalized(0.3, 2.0);
  const CircuitTopology topo = lc_topology(p);
  const ReducedModel model = derive_reduced_model(topo, p.z_c);
  ReducedState init = ReducedState::zeros(1);
  init.phi(0) = 1.0;
  const TimeGrid grid = TimeGrid::span(10.0 * p.period(), p.period() / 100.0);
  LadderOptions opts;
  opts.dt = p.period() / 10000.0;
  const LadderRun run = ladder_oracle(lc_line(p), topo, model, init, nullptr, grid, opts);
  o.detail << "leapfrog dt = " << run.dt << ", max relative energy drift " << run.max_energy_drift;
  o.require(run.max_energy_drift <= 1e-6, "drift <= 1e-6");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
  double time_limit;  // seconds, 0 = none
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "exact identities on random topologies", c1_identities, 5.0},
      {2, "stability sweep of p(s)", c2_stability, 5.0},
      {3, "weak-coupling pole asymptotics", c3_weak_asymptotics, 0.0},
      {4, "pole-locus qualitative behaviour", c4_pole_loci, 0.0},
      {5, "impulse-response oracle triangle", c5_oracle_triangle, 30.0},
      {6, "ladder continuum limit", c6_continuum_limit, 60.0},
      {7, "commutator preservation (symplectic propagator)", c7_commutators, 0.0},
      {8, "weak-coupling Langevin model", c8_langevin, 0.0},
      {9, "ladder energy conservation", c9_energy, 0.0},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      o.pass = false;
      o.detail << " [over time limit " << c.time_limit << " s]";
    }
    std::printf("%s  %d  %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
