#include "tlq/kernels.hpp"

#include <omp.h>

namespace tlq {

int omp_threads() { return omp_get_max_threads(); }

Backend default_backend() { return omp_threads() > 1 ? Backend::omp : Backend::serial; }

namespace kernels {

namespace serial {

void chain_force(std::span<const double> phi, double inv_l, std::span<double> force) {
  const std::size_t n = phi.size();
  if (n == 0) return;
  if (n == 1) {
    force[0] = 0.0;
    return;
  }
  force[0] = inv_l * (phi[1] - phi[0]);
  for (std::size_t k = 1; k + 1 < n; ++k)
    force[k] = inv_l * (phi[k - 1] - 2.0 * phi[k] + phi[k + 1]);
  force[n - 1] = inv_l * (phi[n - 2] - phi[n - 1]);
}

void kick(std::span<double> p, std::span<const double> force, double h) {
  for (std::size_t k = 0; k < p.size(); ++k) p[k] += h * force[k];
}

void drift(std::span<double> x, std::span<const double> p, std::span<const double> inv_mass,
           double h) {
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += h * p[k] * inv_mass[k];
}

double chain_energy(std::span<const double> phi, std::span<const double> p,
                    std::span<const double> inv_mass, double inv_l) {
  double e = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) e += 0.5 * p[k] * p[k] * inv_mass[k];
  for (std::size_t k = 1; k < phi.size(); ++k) {
    const double d = phi[k] - phi[k - 1];
    e += 0.5 * inv_l * d * d;
  }
  return e;
}

}  // namespace serial

namespace omp {

void chain_force(std::span<const double> phi, double inv_l, std::span<double> force) {
  const auto n = static_cast<std::ptrdiff_t>(phi.size());
  if (n < 2) {
    serial::chain_force(phi, inv_l, force);
    return;
  }
  const double* x = phi.data();
  double* f = force.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 1; k < n - 1; ++k) f[k] = inv_l * (x[k - 1] - 2.0 * x[k] + x[k + 1]);
  f[0] = inv_l * (x[1] - x[0]);
  f[n - 1] = inv_l * (x[n - 2] - x[n - 1]);
}

void kick(std::span<double> p, std::span<const double> force, double h) {
  const auto n = static_cast<std::ptrdiff_t>(p.size());
  double* pp = p.data();
  const double* f = force.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) pp[k] += h * f[k];
}

void drift(std::span<double> x, std::span<const double> p, std::span<const double> inv_mass,
           double h) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  double* xx = x.data();
  const double* pp = p.data();
  const double* im = inv_mass.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) xx[k] += h * pp[k] * im[k];
}

double chain_energy(std::span<const double> phi, std::span<const double> p,
                    std::span<const double> inv_mass, double inv_l) {
  const auto np = static_cast<std::ptrdiff_t>(p.size());
  const auto nx = static_cast<std::ptrdiff_t>(phi.size());
  const double* pp = p.data();
  const double* im = inv_mass.data();
  const double* x = phi.data();
  double e = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : e)
  for (std::ptrdiff_t k = 0; k < np; ++k) e += 0.5 * pp[k] * pp[k] * im[k];
#pragma omp parallel for schedule(static) reduction(+ : e)
  for (std::ptrdiff_t k = 1; k < nx; ++k) {
    const double d = x[k] - x[k - 1];
    e += 0.5 * inv_l * d * d;
  }
  return e;
}

}  // namespace omp

void chain_force(Backend b, std::span<const double> phi, double inv_l, std::span<double> force) {
  b == Backend::omp ? omp::chain_force(phi, inv_l, force) : serial::chain_force(phi, inv_l, force);
}

void kick(Backend b, std::span<double> p, std::span<const double> force, double h) {
  b == Backend::omp ? omp::kick(p, force, h) : serial::kick(p, force, h);
}

void drift(Backend b, std::span<double> x, std::span<const double> p,
           std::span<const double> inv_mass, double h) {
  b == Backend::omp ? omp::drift(x, p, inv_mass, h) : serial::drift(x, p, inv_mass, h);
}

double chain_energy(Backend b, std::span<const double> phi, std::span<const double> p,
                    std::span<const double> inv_mass, double inv_l) {
  return b == Backend::omp ? omp::chain_energy(phi, p, inv_mass, inv_l)
                           : serial::chain_energy(phi, p, inv_mass, inv_l);
}

}  // namespace kernels
}  // namespace tlq
