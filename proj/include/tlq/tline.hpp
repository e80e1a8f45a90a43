#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "tlq/signal.hpp"

namespace tlq {

struct LineParams {
  double ell = 0.0;        // H/m
  double c_per_len = 0.0;  // F/m
  double v_p = 0.0;        // m/s
  double z_c = 0.0;        // ohm
};

LineParams line_params(double ell, double c_per_len);

/// Line with the given characteristic impedance and phase velocity.
LineParams line_from_impedance(double z_c, double v_p);

/// Uniformly sampled spatial profile on x = 0, dx, 2dx, ...
class SampledProfile {
 public:
  SampledProfile() = default;
  SampledProfile(double dx, std::vector<double> values);

  static SampledProfile from_function(const std::function<double(double)>& f, double dx,
                                      double x_max);
  static SampledProfile zeros(double dx, double x_max);

  double dx() const { return dx_; }
  double x_max() const;
  const std::vector<double>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  double value(double x, DomainPolicy policy = DomainPolicy::error) const;

  /// ∂/∂x by central differences at samples (one-sided at the ends), linearly interpolated.
  double derivative(double x, DomainPolicy policy = DomainPolicy::error) const;

 private:
  double sample_derivative(std::size_t i) const;

  double dx_ = 1.0;
  std::vector<double> values_;
};

/// Schrödinger-picture line data: flux φ(x) and charge density q(x).
struct LineInitialState {
  SampledProfile phi;
  SampledProfile q;

  static LineInitialState at_rest(double dx, double x_max);
};

/// v⁰_←(t) = q(v_p t)/(2c) + (v_p/2) φ_x(v_p t).
double backward_wave(const LineInitialState& initial, const LineParams& params, double t,
                     DomainPolicy policy = DomainPolicy::error);

/// v⁰_→(η) for η <= 0: q(−v_p η)/(2c) − (v_p/2) φ_x(−v_p η).
double forward_wave(const LineInitialState& initial, const LineParams& params, double eta,
                    DomainPolicy policy = DomainPolicy::error);

/// Thevenin source ê₀(t) = 2 v⁰_←(t) on the requested grid.
Signal thevenin_source(const LineInitialState& initial, const LineParams& params,
                       const TimeGrid& grid, DomainPolicy policy = DomainPolicy::error);

struct LineField {
  double voltage = 0.0;
  double current = 0.0;
};

/// Voltage and current at (x, t) from forward and backward voltage waves defined at x = 0.
LineField dalembert_eval(const Signal& v_fwd, const Signal& v_bwd, const LineParams& params,
                         double x, double t);

}  // namespace tlq
