#include "tlq/signal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tlq/errors.hpp"

namespace tlq {

TimeGrid TimeGrid::span(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw InputError("time grid needs dt > 0 and t_end >= 0");
  const auto n = static_cast<std::size_t>(std::floor(t_end / dt * (1.0 + 1e-12))) + 1;
  return TimeGrid{0.0, dt, n};
}

Signal::Signal(TimeGrid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.count) throw InputError("signal sample count does not match grid");
  if (!(grid_.dt > 0.0)) throw InputError("signal spacing must be positive");
  for (double v : samples_)
    if (!std::isfinite(v)) throw InputError("signal contains non-finite samples");
}

Signal Signal::zeros(const TimeGrid& grid) { return Signal(grid, std::vector<double>(grid.count)); }

bool Signal::covers(double t) const {
  if (samples_.empty()) return false;
  const double tol = 1e-9 * grid_.dt;
  return t >= grid_.t0 - tol && t <= grid_.back() + tol;
}

double Signal::at(double t, DomainPolicy policy) const {
  if (!covers(t)) {
    if (policy == DomainPolicy::zero_extend) return 0.0;
    std::ostringstream os;
    os << "signal queried at t=" << t << " outside [" << grid_.t0 << ", " << grid_.back() << "]";
    throw NumericalError(os.str());
  }
  if (samples_.size() == 1) return samples_[0];
  const double u = (t - grid_.t0) / grid_.dt;
  auto i = static_cast<std::size_t>(std::max(0.0, std::floor(u)));
  if (i >= samples_.size() - 1) i = samples_.size() - 2;
  const double w = std::clamp(u - static_cast<double>(i), 0.0, 1.0);
  return (1.0 - w) * samples_[i] + w * samples_[i + 1];
}

Signal Signal::resampled(const TimeGrid& grid, DomainPolicy policy) const {
  std::vector<double> out(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) out[i] = at(grid.at(i), policy);
  return Signal(grid, std::move(out));
}

Signal normalize_max_abs(const Signal& sig) {
  double peak = 0.0;
  std::size_t where = 0;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (std::abs(sig[i]) > peak) {
      peak = std::abs(sig[i]);
      where = i;
    }
  }
  if (peak == 0.0) throw InputError("cannot normalize an all-zero signal");
  std::vector<double> out(sig.samples());
  for (double& v : out) v /= peak;
  Signal result(sig.grid(), std::move(out));
  result.set_normalization({peak, sig.grid().at(where)});
  return result;
}

}  // namespace tlq
