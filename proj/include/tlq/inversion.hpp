#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tlq/polynomial.hpp"
#include "tlq/signal.hpp"
#include "tlq/spectral.hpp"

namespace tlq {

struct IfftOptions {
  double t_max = 0.0;               // output window [0, t_max]
  std::size_t n_samples = 8192;     // rounded up to a power of two, >= 1024, and raised
                                    // until the Nyquist frequency is 32x the largest |pole|
  std::optional<double> sigma;      // Bromwich abscissa; default 0.1·(slowest decay) + 1/t_max
  std::optional<double> period;     // FFT period T; default max(2 t_max, 20/slowest decay)
  int tail_terms = 4;               // Laurent terms split off and inverted analytically
  std::optional<double> tail_shift; // b in Σ c_k (s+b)^{-k}; default: a unit-rate scale
};

struct IfftResult {
  Signal signal;          // h(t) on [0, t_max]
  double sigma = 0.0;
  double period = 0.0;
  std::size_t n_samples = 0;
  double imag_residue = 0.0;  // max |Im| of the reconstructed samples
  double alias_bound = 0.0;   // estimated wrap-around contribution
  std::vector<std::string> warnings;
};

/// Numerical inverse Laplace transform along Re s = σ by FFT:
///   h(t_j) ≈ e^{σ t_j}/T · Σ_k H(σ + iω_k) e^{iω_k t_j},  ω_k = 2πk/T.
/// The leading terms of H at infinity are subtracted first and inverted in closed form.
/// Throws NumericalError if σ <= max Re(pole) or H is not strictly proper.
IfftResult invert_ifft(const Rational& h, const IfftOptions& options);
IfftResult invert_ifft(const TransferMatrixSpec& spec, Entry entry, const IfftOptions& options);

/// h(t) = Σ R_i e^{s_i t} for a strictly proper rational with simple poles.
struct PartialFractions {
  std::vector<Complex> poles;
  std::vector<Complex> residues;

  /// d^k h/dt^k at t (k = 0 or 1 or higher).
  double value(double t, int derivative = 0) const;
  Signal evaluate(const TimeGrid& grid, int derivative = 0) const;
  /// max |Im Σ R_i e^{s_i t}| over the grid, before taking the real part.
  double imag_residue(const TimeGrid& grid) const;
};

/// Throws InputError for an improper function and NumericalError for repeated poles.
PartialFractions partial_fractions(const Rational& h);
PartialFractions partial_fractions(const TransferMatrixSpec& spec, Entry entry);

Signal invert_partial_fractions(const Rational& h, const TimeGrid& grid);

struct ImpulseResult {
  Signal signal;
  std::string method;  // "partial_fractions" or "ifft"
  std::vector<std::string> warnings;
};

/// Partial fractions, falling back to the FFT route (with a warning) on a repeated pole.
ImpulseResult invert_partial_fractions(const TransferMatrixSpec& spec, Entry entry,
                                       const TimeGrid& grid);

/// One input channel: a δ(t) weight, a δ̇(t) weight and an optional regular signal.
struct SourceTerm {
  double delta = 0.0;
  double delta_dot = 0.0;
  std::optional<Signal> regular;
};

struct SourcePair {
  SourceTerm f1;
  SourceTerm f2;
};

/// Source terms of the LC example for initial circuit data and an incoming wave:
///   f1 = Φ1 δ̇ + [(Q1 + Q0)/C_r − (C_p/C_r) V0] δ,   f2 = τ V0 δ + 2 v⁰_←(t),
/// with V0 = Q1/C_r + Q0/C_p.
SourcePair lc_sources(const LcExampleParams& params, double phi1, double q1, double q0,
                      std::optional<Signal> v_backward = {});

/// f2 for a backward wave that is a Dirac pulse of the given amplitude.
SourceTerm backward_pulse(double amplitude);

struct Response {
  Signal phi1;
  Signal v0;
};

/// Φ1 = h11*f1 + h12*f2, V0 = h21*f1 + h22*f2 on `grid` (t0 = 0), using the residue form:
/// δ parts give h, δ̇ parts give dh/dt, regular parts are convolved exactly for
/// piecewise-linear inputs. Throws InputError when a δ̇ meets an entry of relative degree < 2.
Response respond(const TransferMatrixSpec& spec, const SourcePair& sources, const TimeGrid& grid);

}  // namespace tlq
