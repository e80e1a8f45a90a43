#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in `serial` and an
// OpenMP version in `omp`; tests check they agree and bench/ times them.

#include <cstddef>
#include <span>

namespace tlq {

enum class Backend { serial, omp };

/// Backend used when the caller does not choose.
Backend default_backend();

/// Number of OpenMP threads available (1 without OpenMP).
int omp_threads();

namespace kernels {

namespace serial {

/// force[k] = -∂V/∂φ_k for the series-inductor chain on nodes 0..n with inverse
/// section inductance `inv_l`; the chain ends are open (no inductor beyond node n).
void chain_force(std::span<const double> phi, double inv_l, std::span<double> force);

/// p[k] += h * force[k]
void kick(std::span<double> p, std::span<const double> force, double h);

/// x[k] += h * p[k] * inv_mass[k]
void drift(std::span<double> x, std::span<const double> p, std::span<const double> inv_mass,
           double h);

/// Σ_k p_k² inv_mass_k / 2 + Σ_k (φ_k − φ_{k−1})² inv_l / 2
double chain_energy(std::span<const double> phi, std::span<const double> p,
                    std::span<const double> inv_mass, double inv_l);

}  // namespace serial

namespace omp {

void chain_force(std::span<const double> phi, double inv_l, std::span<double> force);
void kick(std::span<double> p, std::span<const double> force, double h);
void drift(std::span<double> x, std::span<const double> p, std::span<const double> inv_mass,
           double h);
double chain_energy(std::span<const double> phi, std::span<const double> p,
                    std::span<const double> inv_mass, double inv_l);

}  // namespace omp

void chain_force(Backend b, std::span<const double> phi, double inv_l, std::span<double> force);
void kick(Backend b, std::span<double> p, std::span<const double> force, double h);
void drift(Backend b, std::span<double> x, std::span<const double> p,
           std::span<const double> inv_mass, double h);
double chain_energy(Backend b, std::span<const double> phi, std::span<const double> p,
                    std::span<const double> inv_mass, double inv_l);

}  // namespace kernels
}  // namespace tlq
