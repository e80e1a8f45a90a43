#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tlq/polynomial.hpp"

namespace tlq {

/// Parallel LC resonator (L_r, C_r) coupled through C_c to a line of impedance Z_c.
struct LcExampleParams {
  double l_r = 1.0;
  double c_r = 1.0;
  double c_c = 1.0;
  double z_c = 1.0;

  /// Resonator with ω_r and Z_r given, sized to produce coupling g and ratio α.
  static LcExampleParams from_normalized(double g, double alpha, double omega_r = 1.0,
                                         double z_r = 1.0);

  double omega_r() const;
  double z_r() const;
  double g() const;
  double alpha() const;
  double c_p() const;
  double tau() const;
  double period() const;  // T_r = 2π/ω_r
};

/// Coefficients of p(x) = a3 x³ + a2 x² + a1 x + a0 in x = s/ω_r.
struct CubicCoefficients {
  double a3 = 0.0;
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  bool degenerate = false;  // g at 0 or 1: vanishing leading or constant coefficient

  Polynomial polynomial() const { return Polynomial{a0, a1, a2, a3}; }
};

/// (αg, 1, αg, 1 − g). Accepts g in [0, 1] and α > 0; endpoints set `degenerate`.
CubicCoefficients char_poly(double g, double alpha);

enum class ModeKind { aperiodic, oscillatory };

struct PoleSet {
  /// s1 (real) first, then s2 (Im > 0) and s3 = conj(s2) when oscillatory; three real poles
  /// are ordered from most negative. Scaled by `omega_r`.
  std::vector<Complex> poles;
  double omega_r = 1.0;
  bool reduced_degree = false;   // leading coefficient zero (g = 0): only two poles
  bool near_double_root = false;

  std::size_t size() const { return poles.size(); }
  Complex operator[](std::size_t i) const { return poles[i]; }
  double slowest_decay() const;  // min over poles of −Re
  double max_real() const;
};

PoleSet find_poles(const CubicCoefficients& coeffs, double omega_r = 1.0);

struct ModeLabel {
  ModeKind kind = ModeKind::aperiodic;
  double decay = 0.0;      // −Re
  double frequency = 0.0;  // Im (>= 0)
};

std::vector<ModeLabel> classify_modes(const PoleSet& poles);
const char* to_string(ModeKind kind);

enum class Entry { h11 = 0, h12 = 1, h21 = 2, h22 = 3 };
inline constexpr std::array<Entry, 4> all_entries{Entry::h11, Entry::h12, Entry::h21,
                                                  Entry::h22};
const char* to_string(Entry e);

/// The 2x2 transfer matrix of the LC example, mapping (F1, F2) to (Φ1, V0). Entries are kept
/// in the normalized variable x = s/ω_r: H_ij(s) = ω_r^{-k_ij} N_ij(x) / p(x).
struct TransferMatrixSpec {
  double g = 0.0;
  double alpha = 0.0;
  double omega_r = 1.0;
  Polynomial denominator;                 // p(x)
  std::array<Polynomial, 4> numerators;   // N_ij(x), row-major
  std::array<int, 4> omega_power{};       // k_ij

  /// Entry as a rational function of s.
  Rational entry(Entry e) const;
};

TransferMatrixSpec transfer_matrix(double g, double alpha, double omega_r = 1.0);

/// H(s). Throws NumericalError at a pole.
Eigen::Matrix2cd transfer_eval(const TransferMatrixSpec& spec, Complex s);

/// Inverse of H assembled directly from the time-domain LC equations in Laplace form.
Eigen::Matrix2cd transfer_inverse_from_equations(const TransferMatrixSpec& spec, Complex s);

struct WeakCoupling {
  double omega_renormalized = 0.0;  // Ω_r = ω_r √(1 − g)
  double kappa = 0.0;               // ω_r α g²
  bool valid = true;                // αg <= 0.1
};

WeakCoupling weak_coupling(double g, double alpha, double omega_r = 1.0);

/// Branch-tracked pole loci over g (normalized units).
struct PoleLocus {
  double alpha = 0.0;
  std::vector<double> g;
  std::vector<std::array<Complex, 3>> branches;  // s1, s2, s3 per g
  std::vector<bool> near_double_root;
  std::vector<double> transitions;  // g where the s2/s3 pair turns aperiodic or back

  std::vector<std::string> csv_header() const;
  std::vector<std::vector<double>> csv_columns() const;
};

PoleLocus pole_locus(double alpha, const std::vector<double>& g_grid);

/// g = start, start + step, ... <= stop.
std::vector<double> uniform_grid(double start, double stop, double step);

}  // namespace tlq
