#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace tlq {

/// Uniform sample times t0, t0 + dt, ..., t0 + (count - 1) dt.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  double back() const { return at(count == 0 ? 0 : count - 1); }

  /// Grid starting at zero covering [0, t_end] with spacing dt (last sample <= t_end).
  static TimeGrid span(double t_end, double dt);
};

/// What to do when a signal or profile is queried outside its samples.
enum class DomainPolicy { error, zero_extend };

struct Normalization {
  double divisor = 1.0;  // max |sample| before normalization
  double time = 0.0;     // where it was attained
};

/// Uniformly sampled real time series with linear interpolation between samples.
class Signal {
 public:
  Signal() = default;
  Signal(TimeGrid grid, std::vector<double> samples);

  static Signal zeros(const TimeGrid& grid);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_; }
  std::vector<double>& samples() { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  bool covers(double t) const;
  double at(double t, DomainPolicy policy = DomainPolicy::error) const;

  /// Resample onto another grid by linear interpolation.
  Signal resampled(const TimeGrid& grid, DomainPolicy policy = DomainPolicy::error) const;

  const std::optional<Normalization>& normalization() const { return normalization_; }
  void set_normalization(Normalization n) { normalization_ = n; }

 private:
  TimeGrid grid_;
  std::vector<double> samples_;
  std::optional<Normalization> normalization_;
};

/// Divides by max |sample|; the divisor and its time are kept in the normalization record.
/// Throws InputError for an all-zero signal.
Signal normalize_max_abs(const Signal& sig);

}  // namespace tlq
