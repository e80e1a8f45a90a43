#include "tlq/tline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tlq/errors.hpp"

namespace tlq {

LineParams line_params(double ell, double c_per_len) {
  if (!(ell > 0.0) || !(c_per_len > 0.0) || !std::isfinite(ell) || !std::isfinite(c_per_len))
    throw InputError("line inductance and capacitance per length must be positive");
  return LineParams{ell, c_per_len, 1.0 / std::sqrt(ell * c_per_len), std::sqrt(ell / c_per_len)};
}

LineParams line_from_impedance(double z_c, double v_p) {
  if (!(z_c > 0.0) || !(v_p > 0.0)) throw InputError("Z_c and v_p must be positive");
  return line_params(z_c / v_p, 1.0 / (z_c * v_p));
}

SampledProfile::SampledProfile(double dx, std::vector<double> values)
    : dx_(dx), values_(std::move(values)) {
  if (!(dx_ > 0.0)) throw InputError("profile spacing must be positive");
  for (double v : values_)
    if (!std::isfinite(v)) throw InputError("profile contains non-finite samples");
}

SampledProfile SampledProfile::from_function(const std::function<double(double)>& f, double dx,
                                             double x_max) {
  const auto n = static_cast<std::size_t>(std::ceil(x_max / dx - 1e-9)) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(dx * static_cast<double>(i));
  return SampledProfile(dx, std::move(v));
}

SampledProfile SampledProfile::zeros(double dx, double x_max) {
  return from_function([](double) { return 0.0; }, dx, x_max);
}

double SampledProfile::x_max() const {
  return values_.empty() ? 0.0 : dx_ * static_cast<double>(values_.size() - 1);
}

namespace {

bool locate(const SampledProfile& p, double x, DomainPolicy policy, std::size_t& i, double& w) {
  const double tol = 1e-9 * p.dx();
  if (p.values().size() < 2 || x < -tol || x > p.x_max() + tol) {
    if (policy == DomainPolicy::zero_extend) return false;
    std::ostringstream os;
    os << "profile queried at x=" << x << " outside [0, " << p.x_max()
       << "]; supply a longer profile or use zero extension";
    throw NumericalError(os.str());
  }
  const double u = std::clamp(x / p.dx(), 0.0, static_cast<double>(p.values().size() - 1));
  i = std::min(static_cast<std::size_t>(u), p.values().size() - 2);
  w = u - static_cast<double>(i);
  return true;
}

}  // namespace

double SampledProfile::value(double x, DomainPolicy policy) const {
  std::size_t i = 0;
  double w = 0.0;
  if (!locate(*this, x, policy, i, w)) return 0.0;
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

double SampledProfile::sample_derivative(std::size_t i) const {
  const std::size_t n = values_.size();
  if (i == 0) return (values_[1] - values_[0]) / dx_;
  if (i == n - 1) return (values_[n - 1] - values_[n - 2]) / dx_;
  return (values_[i + 1] - values_[i - 1]) / (2.0 * dx_);
}

double SampledProfile::derivative(double x, DomainPolicy policy) const {
  std::size_t i = 0;
  double w = 0.0;
  if (!locate(*this, x, policy, i, w)) return 0.0;
  return (1.0 - w) * sample_derivative(i) + w * sample_derivative(i + 1);
}

LineInitialState LineInitialState::at_rest(double dx, double x_max) {
  return {SampledProfile::zeros(dx, x_max), SampledProfile::zeros(dx, x_max)};
}

double backward_wave(const LineInitialState& s, const LineParams& p, double t, DomainPolicy policy) {
  const double x = p.v_p * t;
  return s.q.value(x, policy) / (2.0 * p.c_per_len) + 0.5 * p.v_p * s.phi.derivative(x, policy);
}

double forward_wave(const LineInitialState& s, const LineParams& p, double eta, DomainPolicy policy) {
  const double x = -p.v_p * eta;
  return s.q.value(x, policy) / (2.0 * p.c_per_len) - 0.5 * p.v_p * s.phi.derivative(x, policy);
}

Signal thevenin_source(const LineInitialState& s, const LineParams& p, const TimeGrid& grid,
                       DomainPolicy policy) {
  std::vector<double> e(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) e[i] = 2.0 * backward_wave(s, p, grid.at(i), policy);
  return Signal(grid, std::move(e));
}

LineField dalembert_eval(const Signal& v_fwd, const Signal& v_bwd, const LineParams& p, double x,
                         double t) {
  if (x < 0.0) throw InputError("line position must be non-negative");
  const double fwd = v_fwd.at(t - x / p.v_p);
  const double bwd = v_bwd.at(t + x / p.v_p);
  return {fwd + bwd, (fwd - bwd) / p.z_c};
}

}  // namespace tlq
