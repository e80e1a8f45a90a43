#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace tlq {

using Complex = std::complex<double>;

/// Real polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);
  Polynomial(std::initializer_list<double> ascending);

  /// Highest power with a nonzero coefficient; -1 for the zero polynomial.
  int degree() const;
  const std::vector<double>& coefficients() const { return c_; }
  double coefficient(int k) const;
  double leading() const;

  template <typename T>
  T operator()(T x) const {
    T acc{0.0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const;

  /// q(u) = p(u - shift).
  Polynomial shifted(double shift) const;

  /// p(λ x) coefficients, i.e. c_k λ^k.
  Polynomial scaled_argument(double lambda) const;

  Polynomial operator*(double s) const;
  double max_abs_coefficient() const;

 private:
  std::vector<double> c_;
};

/// Roots of a real polynomial: eigenvalues of the companion matrix followed by one Newton
/// step each. Roots with |Im| below `real_tolerance`·max(1, |z|) are snapped to the real axis
/// and non-real roots are returned as exact conjugate pairs.
std::vector<Complex> polynomial_roots(const Polynomial& p, double real_tolerance = 1e-10);

/// N(s)/D(s) with real coefficients.
struct Rational {
  Polynomial num;
  Polynomial den;

  Complex operator()(Complex s) const { return num(s) / den(s); }
  int relative_degree() const { return den.degree() - num.degree(); }
  bool strictly_proper() const { return relative_degree() >= 1; }

  /// First `terms` coefficients c_1..c_terms of the expansion Σ c_k (s + shift)^{-k} about
  /// s = ∞. Requires a proper function (relative degree >= 0; c_0 is dropped).
  std::vector<double> laurent_at_infinity(double shift, int terms) const;
};

}  // namespace tlq
