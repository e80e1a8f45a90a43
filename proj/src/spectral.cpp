#include "tlq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tlq/errors.hpp"

namespace tlq {

LcExampleParams LcExampleParams::from_normalized(double g, double alpha, double omega_r,
                                                 double z_r) {
  if (!(g >= 0.0 && g < 1.0)) throw InputError("g must lie in [0, 1)");
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  if (!(omega_r > 0.0) || !(z_r > 0.0)) throw InputError("omega_r and Z_r must be positive");
  LcExampleParams p;
  p.l_r = z_r / omega_r;
  p.c_r = 1.0 / (z_r * omega_r);
  p.c_c = g * p.c_r / (1.0 - g);
  p.z_c = alpha * z_r;
  return p;
}

double LcExampleParams::omega_r() const { return 1.0 / std::sqrt(l_r * c_r); }
double LcExampleParams::z_r() const { return std::sqrt(l_r / c_r); }
double LcExampleParams::g() const { return c_c / (c_r + c_c); }
double LcExampleParams::alpha() const { return z_c / z_r(); }
double LcExampleParams::c_p() const { return c_c * c_r / (c_c + c_r); }
double LcExampleParams::tau() const { return z_c * c_p(); }
double LcExampleParams::period() const { return 2.0 * std::numbers::pi / omega_r(); }

CubicCoefficients char_poly(double g, double alpha) {
  if (!(g >= 0.0 && g <= 1.0)) throw InputError("g must lie in [0, 1]");
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  CubicCoefficients c;
  c.a3 = alpha * g;
  c.a2 = 1.0;
  c.a1 = alpha * g;
  c.a0 = 1.0 - g;
  c.degenerate = g == 0.0 || g == 1.0;
  return c;
}

double PoleSet::slowest_decay() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : poles) m = std::min(m, -s.real());
  return m;
}

double PoleSet::max_real() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : poles) m = std::max(m, s.real());
  return m;
}

PoleSet find_poles(const CubicCoefficients& coeffs, double omega_r) {
  if (!(omega_r > 0.0)) throw InputError("omega_r must be positive");
  PoleSet out;
  out.omega_r = omega_r;
  std::vector<Complex> roots;
  if (coeffs.a0 == 0.0 && coeffs.a3 != 0.0) {
    // x (a3 x² + a2 x + a1): keep the exact zero root.
    roots = polynomial_roots(Polynomial{coeffs.a1, coeffs.a2, coeffs.a3});
    roots.insert(roots.begin(), Complex(0.0, 0.0));
  } else {
    roots = polynomial_roots(coeffs.polynomial());
  }
  out.reduced_degree = coeffs.a3 == 0.0;

  std::vector<Complex> reals, pairs;
  for (const auto& z : roots) (z.imag() == 0.0 ? reals : pairs).push_back(z);
  std::sort(reals.begin(), reals.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  for (const auto& z : reals) out.poles.push_back(z * omega_r);
  for (const auto& z : pairs) out.poles.push_back(z * omega_r);

  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-6 * std::max(1.0, std::abs(roots[i])))
        out.near_double_root = true;
  return out;
}

std::vector<ModeLabel> classify_modes(const PoleSet& poles) {
  std::vector<ModeLabel> out;
  for (const auto& s : poles.poles) {
    ModeLabel m;
    m.kind = s.imag() == 0.0 ? ModeKind::aperiodic : ModeKind::oscillatory;
    m.decay = -s.real();
    m.frequency = std::abs(s.imag());
    out.push_back(m);
  }
  return out;
}

const char* to_string(ModeKind kind) {
  return kind == ModeKind::aperiodic ? "aperiodic" : "oscillatory";
}

const char* to_string(Entry e) {
  switch (e) {
    case Entry::h11: return "h11";
    case Entry::h12: return "h12";
    case Entry::h21: return "h21";
    case Entry::h22: return "h22";
  }
  return "?";
}

Rational TransferMatrixSpec::entry(Entry e) const {
  const auto i = static_cast<std::size_t>(e);
  const double w = omega_r;
  Rational r;
  r.num = numerators[i].scaled_argument(1.0 / w);
  r.den = denominator.scaled_argument(1.0 / w) * std::pow(w, omega_power[i]);
  return r;
}

TransferMatrixSpec transfer_matrix(double g, double alpha, double omega_r) {
  if (!(omega_r > 0.0)) throw InputError("omega_r must be positive");
  const CubicCoefficients c = char_poly(g, alpha);
  TransferMatrixSpec t;
  t.g = g;
  t.alpha = alpha;
  t.omega_r = omega_r;
  t.denominator = c.polynomial();
  const double ag = alpha * g;
  t.numerators = {Polynomial{1.0, ag}, Polynomial{0.0, g}, Polynomial{-ag},
                  Polynomial{1.0 - g, 0.0, 1.0}};
  t.omega_power = {2, 1, 1, 0};
  return t;
}

Eigen::Matrix2cd transfer_eval(const TransferMatrixSpec& spec, Complex s) {
  const Complex x = s / spec.omega_r;
  const Complex d = spec.denominator(x);
  const double scale = spec.denominator.max_abs_coefficient() * std::max(1.0, std::pow(std::abs(x), 3));
  if (std::abs(d) <= 1e-14 * scale) {
    std::ostringstream os;
    os << "s = " << s.real() << (s.imag() < 0 ? " - " : " + ") << std::abs(s.imag())
       << "i is a pole of the transfer matrix";
    throw NumericalError(os.str());
  }
  Eigen::Matrix2cd h;
  for (Entry e : all_entries) {
    const auto i = static_cast<std::size_t>(e);
    h(static_cast<int>(i / 2), static_cast<int>(i % 2)) =
        spec.numerators[i](x) / (std::pow(spec.omega_r, spec.omega_power[i]) * d);
  }
  return h;
}

Eigen::Matrix2cd transfer_inverse_from_equations(const TransferMatrixSpec& spec, Complex s) {
  // Laplace form of the resonator and port equations for (Φ1, V0) with sources (F1, F2):
  //   (s² + ω_r²(1 − g)) Φ1 − g s V0 = F1
  //   τ ω_r² Φ1 + (τ s + 1) V0       = F2
  const double w = spec.omega_r;
  const double tau = spec.alpha * spec.g / w;
  Eigen::Matrix2cd m;
  m(0, 0) = s * s + w * w * (1.0 - spec.g);
  m(0, 1) = -spec.g * s;
  m(1, 0) = tau * w * w;
  m(1, 1) = tau * s + 1.0;
  return m;
}

WeakCoupling weak_coupling(double g, double alpha, double omega_r) {
  WeakCoupling w;
  w.omega_renormalized = omega_r * std::sqrt(1.0 - g);
  w.kappa = omega_r * alpha * g * g;
  w.valid = alpha * g <= 0.1;
  return w;
}

std::vector<double> uniform_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw InputError("grid needs step > 0 and stop >= start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = start + static_cast<double>(k) * step;
  return g;
}

namespace {

using Triple = std::array<Complex, 3>;

// Pair conjugate roots so that slot 1 carries Im > 0.
void order_pair(Triple& t) {
  if (t[1].imag() != 0.0 && t[1].imag() < 0.0 && std::abs(t[2] - std::conj(t[1])) == 0.0)
    std::swap(t[1], t[2]);
}

int real_count(const Triple& t) {
  return static_cast<int>(std::count_if(t.begin(), t.end(), [](Complex z) { return z.imag() == 0.0; }));
}

}  // namespace

PoleLocus pole_locus(double alpha, const std::vector<double>& g_grid) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  for (double g : g_grid)
    if (!(g > 0.0 && g < 1.0)) throw InputError("pole locus needs g inside (0, 1)");

  const std::size_t n = g_grid.size();
  std::vector<Triple> raw(n);
  std::vector<bool> dbl(n, false);
  // Roots are independent per g; only the matching below is sequential.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const PoleSet ps = find_poles(char_poly(g_grid[static_cast<std::size_t>(i)], alpha));
    Triple t{};
    for (std::size_t k = 0; k < 3 && k < ps.size(); ++k) t[k] = ps[k];
    raw[static_cast<std::size_t>(i)] = t;
    dbl[static_cast<std::size_t>(i)] = ps.near_double_root;
  }

  PoleLocus out;
  out.alpha = alpha;
  out.g = g_grid;
  out.near_double_root = dbl;
  out.branches.resize(n);
  static constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      out.branches[0] = raw[0];
      continue;
    }
    Triple pred = out.branches[i - 1];
    if (i >= 2) {
      // Linear extrapolation in g keeps fast-moving branches on their own track.
      const double h0 = g_grid[i - 1] - g_grid[i - 2];
      const double h1 = g_grid[i] - g_grid[i - 1];
      for (int k = 0; k < 3; ++k)
        pred[k] += (out.branches[i - 1][k] - out.branches[i - 2][k]) * (h1 / h0);
    }
    double best = std::numeric_limits<double>::infinity();
    Triple chosen = raw[i];
    for (const auto& p : perms) {
      double cost = 0.0;
      for (int k = 0; k < 3; ++k) cost += std::norm(raw[i][p[k]] - pred[k]);
      if (cost < best) {
        best = cost;
        chosen = {raw[i][p[0]], raw[i][p[1]], raw[i][p[2]]};
      }
    }
    order_pair(chosen);
    out.branches[i] = chosen;
    if (real_count(chosen) != real_count(out.branches[i - 1])) out.transitions.push_back(g_grid[i]);
  }
  return out;
}

std::vector<std::string> PoleLocus::csv_header() const {
  return {"g", "re_s1", "im_s1", "re_s2", "im_s2", "re_s3", "im_s3"};
}

std::vector<std::vector<double>> PoleLocus::csv_columns() const {
  std::vector<std::vector<double>> cols(7);
  cols[0] = g;
  for (const auto& b : branches)
    for (int k = 0; k < 3; ++k) {
      cols[1 + 2 * k].push_back(b[k].real());
      cols[2 + 2 * k].push_back(b[k].imag());
    }
  return cols;
}

}  // namespace tlq
