#include <doctest.h>

#include <random>
#include <vector>

#include "tlq/kernels.hpp"

using namespace tlq;

TEST_SUITE("kernels") {

TEST_CASE("serial and OpenMP kernels agree") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (std::size_t n : {1, 2, 17, 1000, 100001}) {
    std::vector<double> phi(n), p(n), m(n);
    for (std::size_t k = 0; k < n; ++k) {
      phi[k] = n01(rng);
      p[k] = n01(rng);
      m[k] = 1.0 + std::abs(n01(rng));
    }
    std::vector<double> fs(n), fo(n);
    kernels::serial::chain_force(phi, 2.5, fs);
    kernels::omp::chain_force(phi, 2.5, fo);
    CHECK(fs == fo);

    const double es = kernels::serial::chain_energy(phi, p, m, 2.5);
    const double eo = kernels::omp::chain_energy(phi, p, m, 2.5);
    CHECK(eo == doctest::Approx(es).epsilon(1e-12));

    std::vector<double> ps = p, po = p, xs = phi, xo = phi;
    kernels::serial::kick(ps, fs, 0.1);
    kernels::omp::kick(po, fs, 0.1);
    CHECK(ps == po);
    kernels::serial::drift(xs, ps, m, 0.1);
    kernels::omp::drift(xo, po, m, 0.1);
    CHECK(xs == xo);
  }
}

TEST_CASE("chain force is the negative energy gradient") {
  const std::vector<double> phi{0.3, -0.1, 0.7, 0.2};
  const std::vector<double> zero(4, 0.0), ones(4, 1.0);
  std::vector<double> f(4);
  kernels::chain_force(Backend::serial, phi, 1.5, f);
  double sum = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    std::vector<double> up = phi, dn = phi;
    up[k] += 1e-6;
    dn[k] -= 1e-6;
    const double grad = (kernels::chain_energy(Backend::serial, up, zero, ones, 1.5) -
                         kernels::chain_energy(Backend::serial, dn, zero, ones, 1.5)) /
                        2e-6;
    CHECK(f[k] == doctest::Approx(-grad).epsilon(1e-8));
    sum += f[k];
  }
  CHECK(sum == doctest::Approx(0.0).scale(1.0));  // internal forces cancel
  CHECK(omp_threads() >= 1);
}

}
