#include "tlq/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "tlq/errors.hpp"

namespace tlq {

Polynomial::Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) {}
Polynomial::Polynomial(std::initializer_list<double> ascending) : c_(ascending) {}

int Polynomial::degree() const {
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
    if (c_[static_cast<std::size_t>(k)] != 0.0) return k;
  return -1;
}

double Polynomial::coefficient(int k) const {
  return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : 0.0;
}

double Polynomial::leading() const { return coefficient(degree()); }

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial{0.0};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(double shift) const {
  const int n = degree();
  if (n < 0) return Polynomial{0.0};
  // Horner in the variable (u - shift).
  std::vector<double> q{c_[static_cast<std::size_t>(n)]};
  for (int k = n - 1; k >= 0; --k) {
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t j = 0; j < q.size(); ++j) {
      next[j + 1] += q[j];
      next[j] -= shift * q[j];
    }
    next[0] += c_[static_cast<std::size_t>(k)];
    q = std::move(next);
  }
  return Polynomial(std::move(q));
}

Polynomial Polynomial::scaled_argument(double lambda) const {
  std::vector<double> d(c_);
  double f = 1.0;
  for (double& v : d) {
    v *= f;
    f *= lambda;
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> d(c_);
  for (double& v : d) v *= s;
  return Polynomial(std::move(d));
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<Complex> polynomial_roots(const Polynomial& p, double real_tolerance) {
  const int n = p.degree();
  if (n < 1) return {};
  const double lead = p.leading();
  std::vector<Complex> raw;
  if (n == 1) {
    raw.emplace_back(-p.coefficient(0) / lead, 0.0);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -p.coefficient(i) / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    if (es.info() != Eigen::Success) throw NumericalError("companion eigenvalue solver failed");
    for (int i = 0; i < n; ++i) raw.push_back(es.eigenvalues()(i));
  }

  const Polynomial dp = p.derivative();
  for (Complex& z : raw) {
    const Complex dz = dp(z);
    if (std::abs(dz) == 0.0) continue;
    const Complex candidate = z - p(z) / dz;
    if (std::abs(p(candidate)) <= std::abs(p(z))) z = candidate;
  }

  std::vector<Complex> reals, upper;
  for (const Complex& z : raw) {
    if (std::abs(z.imag()) <= real_tolerance * std::max(1.0, std::abs(z)))
      reals.emplace_back(z.real(), 0.0);
    else if (z.imag() > 0.0)
      upper.push_back(z);
  }
  // Non-real roots of a real polynomial come in pairs; rebuild the lower halves exactly.
  if (reals.size() + 2 * upper.size() != raw.size()) return raw;
  std::vector<Complex> out(reals);
  for (const Complex& z : upper) {
    out.push_back(z);
    out.push_back(std::conj(z));
  }
  return out;
}

std::vector<double> Rational::laurent_at_infinity(double shift, int terms) const {
  const Polynomial n = num.shifted(shift);
  const Polynomial d = den.shifted(shift);
  const int dd = d.degree();
  if (dd < 0) throw InputError("rational function has a zero denominator");
  if (n.degree() > dd) throw InputError("improper rational function has no expansion at infinity");
  // With w = 1/u: D(u) = u^d A(w), N(u) = u^d B(w), so N/D = B(w)/A(w).
  std::vector<double> a(static_cast<std::size_t>(terms) + 1, 0.0), b(a.size(), 0.0);
  for (int j = 0; j <= std::min(dd, terms); ++j) {
    a[static_cast<std::size_t>(j)] = d.coefficient(dd - j);
    b[static_cast<std::size_t>(j)] = n.coefficient(dd - j);
  }
  std::vector<double> c(a.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    double acc = b[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= a[j] * c[k - j];
    c[k] = acc / a[0];
  }
  return std::vector<double>(c.begin() + 1, c.end());
}

}  // namespace tlq
