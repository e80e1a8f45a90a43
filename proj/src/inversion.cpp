#include "tlq/inversion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "tlq/errors.hpp"

namespace tlq {

namespace {

std::mutex fftw_planner_mutex;  // FFTW planning is not thread-safe

// Nyquist frequency of the FFT grid over the largest pole magnitude.
constexpr double resolution_factor = 32.0;
constexpr std::size_t max_auto_samples = std::size_t{1} << 24;

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw NumericalError("FFT buffer allocation failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

double max_real_part(const std::vector<Complex>& poles) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : poles) m = std::max(m, s.real());
  return m;
}

double slowest_decay(const std::vector<Complex>& poles) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : poles) m = std::min(m, -s.real());
  return m;
}

// Σ c_k t^{k-1} e^{-bt} / (k-1)!, the inverse of Σ c_k (s+b)^{-k}.
double tail_value(const std::vector<double>& c, double b, double t) {
  double acc = 0.0, power = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    acc += c[k] * power;
    power *= t / static_cast<double>(k + 1);
  }
  return acc * std::exp(-b * t);
}

Complex tail_transform(const std::vector<double>& c, double b, Complex s) {
  const Complex w = 1.0 / (s + b);
  Complex acc = 0.0, power = w;
  for (double ck : c) {
    acc += ck * power;
    power *= w;
  }
  return acc;
}

}  // namespace

IfftResult invert_ifft(const Rational& h, const IfftOptions& options) {
  if (!(options.t_max > 0.0)) throw InputError("t_max must be positive");
  if (options.tail_terms < 0) throw InputError("tail_terms must be non-negative");
  if (!h.strictly_proper())
    throw NumericalError(
        "transfer function is not strictly proper: its inverse contains δ-distributions, "
        "numeric inversion refused");

  const std::vector<Complex> poles = polynomial_roots(h.den);
  const double max_re = max_real_part(poles);
  const double decay = std::max(slowest_decay(poles), 0.0);

  IfftResult out;
  out.sigma = options.sigma.value_or(0.1 * decay + 1.0 / options.t_max);
  if (!(out.sigma > max_re)) {
    std::ostringstream os;
    os << "contour crosses pole: sigma = " << out.sigma << " <= max Re(pole) = " << max_re;
    throw NumericalError(os.str());
  }
  const double default_period =
      decay > 0.0 ? std::max(2.0 * options.t_max, 20.0 / decay) : 2.0 * options.t_max;
  out.period = options.period.value_or(default_period);
  if (!(out.period > options.t_max)) throw InputError("FFT period must exceed t_max");

  std::size_t n = std::bit_ceil(std::max<std::size_t>(options.n_samples, 1024));
  if (n != options.n_samples)
    out.warnings.push_back("n_samples rounded up to " + std::to_string(n));
  // The frequency grid must reach well past the fastest pole, otherwise the truncated sum
  // misses the short-time structure it produces.
  double fastest = 0.0;
  for (const auto& s : poles) fastest = std::max(fastest, std::abs(s));
  const double wanted = resolution_factor * fastest * out.period / std::numbers::pi;
  if (wanted > static_cast<double>(max_auto_samples)) {
    out.warnings.push_back("fastest pole is under-resolved by the frequency grid");
  } else if (wanted > static_cast<double>(n)) {
    n = std::bit_ceil(static_cast<std::size_t>(std::ceil(wanted)));
    out.warnings.push_back("n_samples raised to " + std::to_string(n) + " to resolve the fastest pole");
  }
  out.n_samples = n;

  double b = 1.0;
  if (options.tail_shift) {
    b = *options.tail_shift;
  } else {
    double r = 0.0;
    for (const auto& s : poles) r = std::max(r, std::abs(s));
    if (r > 0.0) b = r;
  }
  if (!(b > 0.0)) throw InputError("tail shift must be positive");
  const std::vector<double> c =
      options.tail_terms > 0 ? h.laurent_at_infinity(b, options.tail_terms) : std::vector<double>{};

  const double T = out.period;
  const double dt = T / static_cast<double>(n);
  const auto count = static_cast<std::size_t>(std::ceil(options.t_max / dt - 1e-9)) + 1;
  if (count > n) throw InputError("FFT period too short for the output window");

  FftwBuffer buf(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    const std::ptrdiff_t freq = k <= n / 2 ? kk : kk - static_cast<std::ptrdiff_t>(n);
    const Complex s(out.sigma, 2.0 * std::numbers::pi * static_cast<double>(freq) / T);
    Complex v = h(s) - tail_transform(c, b, s);
    if (k == n / 2) v = Complex(v.real(), 0.0);  // Nyquist bin stands for ±N/2
    buf.data[k][0] = v.real();
    buf.data[k][1] = v.imag();
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf.data, buf.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(plan);
  }

  std::vector<double> samples(count);
  double peak = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double t = dt * static_cast<double>(j);
    const double scale = std::exp(out.sigma * t) / T;
    samples[j] = scale * buf.data[j][0] + tail_value(c, b, t);
    out.imag_residue = std::max(out.imag_residue, std::abs(scale * buf.data[j][1]));
    peak = std::max(peak, std::abs(samples[j]));
  }
  // Wrap-around from later periods: Σ_m e^{σ t} e^{-(σ+d) mT} |h|max at the window end.
  const double q = std::exp(-(out.sigma + decay) * T);
  out.alias_bound = peak * std::exp(out.sigma * options.t_max) * q / (1.0 - q);
  out.signal = Signal(TimeGrid{0.0, dt, count}, std::move(samples));
  return out;
}

IfftResult invert_ifft(const TransferMatrixSpec& spec, Entry entry, const IfftOptions& options) {
  IfftOptions o = options;
  if (!o.tail_shift) o.tail_shift = spec.omega_r;
  return invert_ifft(spec.entry(entry), o);
}

double PartialFractions::value(double t, int derivative) const {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < poles.size(); ++i)
    acc += residues[i] * std::pow(poles[i], derivative) * std::exp(poles[i] * t);
  return acc.real();
}

Signal PartialFractions::evaluate(const TimeGrid& grid, int derivative) const {
  std::vector<double> v(grid.count);
  for (std::size_t j = 0; j < grid.count; ++j) v[j] = value(grid.at(j), derivative);
  return Signal(grid, std::move(v));
}

double PartialFractions::imag_residue(const TimeGrid& grid) const {
  double m = 0.0;
  for (std::size_t j = 0; j < grid.count; ++j) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < poles.size(); ++i) acc += residues[i] * std::exp(poles[i] * grid.at(j));
    m = std::max(m, std::abs(acc.imag()));
  }
  return m;
}

PartialFractions partial_fractions(const Rational& h) {
  if (h.den.degree() < 1 || !h.strictly_proper())
    throw InputError(
        "partial fractions need a strictly proper function; split off the polynomial part first");
  PartialFractions pf;
  pf.poles = polynomial_roots(h.den);
  for (std::size_t i = 0; i < pf.poles.size(); ++i)
    for (std::size_t j = i + 1; j < pf.poles.size(); ++j)
      if (std::abs(pf.poles[i] - pf.poles[j]) < 1e-6 * std::max(1.0, std::abs(pf.poles[i])))
        throw NumericalError("repeated pole: partial fractions need simple poles");
  const Polynomial dd = h.den.derivative();
  for (const auto& s : pf.poles) {
    Complex r = h.num(s) / dd(s);
    if (s.imag() == 0.0) r = Complex(r.real(), 0.0);
    pf.residues.push_back(r);
  }
  // Conjugate poles get exactly conjugate residues.
  for (std::size_t i = 0; i + 1 < pf.poles.size(); ++i)
    if (pf.poles[i].imag() > 0.0 && pf.poles[i + 1] == std::conj(pf.poles[i]))
      pf.residues[i + 1] = std::conj(pf.residues[i]);
  return pf;
}

PartialFractions partial_fractions(const TransferMatrixSpec& spec, Entry entry) {
  return partial_fractions(spec.entry(entry));
}

Signal invert_partial_fractions(const Rational& h, const TimeGrid& grid) {
  return partial_fractions(h).evaluate(grid);
}

ImpulseResult invert_partial_fractions(const TransferMatrixSpec& spec, Entry entry,
                                       const TimeGrid& grid) {
  ImpulseResult out;
  try {
    out.signal = partial_fractions(spec, entry).evaluate(grid);
    out.method = "partial_fractions";
  } catch (const NumericalError&) {
    IfftOptions o;
    o.t_max = grid.back();
    IfftResult r = invert_ifft(spec, entry, o);
    out.signal = r.signal.resampled(grid);
    out.method = "ifft";
    out.warnings.push_back(std::string("repeated pole in ") + to_string(entry) +
                           "; used the FFT inversion instead");
    for (auto& w : r.warnings) out.warnings.push_back(std::move(w));
  }
  return out;
}

SourcePair lc_sources(const LcExampleParams& params, double phi1, double q1, double q0,
                      std::optional<Signal> v_backward) {
  const double c_r = params.c_r, c_p = params.c_p();
  if (c_p == 0.0 && q0 != 0.0) throw InputError("Q0 must vanish without a coupling capacitor");
  const double v0 = q1 / c_r + (c_p > 0.0 ? q0 / c_p : 0.0);
  SourcePair s;
  s.f1.delta_dot = phi1;
  s.f1.delta = (q1 + q0) / c_r - (c_p / c_r) * v0;
  s.f2.delta = params.tau() * v0;
  if (v_backward) {
    Signal twice = *v_backward;
    for (double& v : twice.samples()) v *= 2.0;
    s.f2.regular = std::move(twice);
  }
  return s;
}

SourceTerm backward_pulse(double amplitude) {
  SourceTerm s;
  s.delta = 2.0 * amplitude;
  return s;
}

namespace {

// ∫_0^t h(t - u) x(u) du for h = Σ R e^{st} and x linear between grid samples.
std::vector<double> convolve(const PartialFractions& pf, const std::vector<double>& x, double h) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < pf.poles.size(); ++i) {
    const Complex s = pf.poles[i];
    const Complex z = s * h;
    const Complex e = std::exp(z);
    Complex phi1, phi2;
    if (std::abs(z) < 1e-3) {
      phi1 = h * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 + z * z * z * z / 120.0);
      phi2 = h * h * (0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 + z * z * z * z / 720.0);
    } else {
      phi1 = (e - 1.0) / s;
      phi2 = (e - 1.0 - z) / (s * s);
    }
    Complex acc = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
      acc = e * acc + x[k] * phi1 + (x[k + 1] - x[k]) / h * phi2;
      y[k + 1] += (pf.residues[i] * acc).real();
    }
  }
  return y;
}

}  // namespace

Response respond(const TransferMatrixSpec& spec, const SourcePair& sources, const TimeGrid& grid) {
  if (grid.t0 != 0.0 || grid.count == 0) throw InputError("response grid must start at t = 0");
  const SourceTerm* f[2] = {&sources.f1, &sources.f2};
  std::vector<double> out[2] = {std::vector<double>(grid.count, 0.0),
                                std::vector<double>(grid.count, 0.0)};
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 2; ++col) {
      const SourceTerm& src = *f[col];
      if (src.delta == 0.0 && src.delta_dot == 0.0 && !src.regular) continue;
      const auto entry = static_cast<Entry>(2 * row + col);
      const Rational r = spec.entry(entry);
      if (src.delta_dot != 0.0 && r.relative_degree() < 2)
        throw InputError(std::string("a δ̇ source cannot drive ") + to_string(entry) +
                         ": relative degree below 2");
      const PartialFractions pf = partial_fractions(r);
      auto& y = out[row];
      for (std::size_t j = 0; j < grid.count; ++j) {
        const double t = grid.at(j);
        if (src.delta != 0.0) y[j] += src.delta * pf.value(t, 0);
        if (src.delta_dot != 0.0) y[j] += src.delta_dot * pf.value(t, 1);
      }
      if (src.regular) {
        const Signal x = src.regular->resampled(grid, DomainPolicy::zero_extend);
        const std::vector<double> c = convolve(pf, x.samples(), grid.dt);
        for (std::size_t j = 0; j < grid.count; ++j) y[j] += c[j];
      }
    }
  }
  return Response{Signal(grid, std::move(out[0])), Signal(grid, std::move(out[1]))};
}

}  // namespace tlq
