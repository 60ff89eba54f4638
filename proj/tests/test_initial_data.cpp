#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gmshadow/error.hpp"
#include "gmshadow/grid.hpp"
#include "gmshadow/initial_data.hpp"
#include "gmshadow/spectral.hpp"

using namespace gmshadow;

TEST_CASE("constant_data") {
  Grid g = build_grid(Geometry::interval(1.0), 33);
  Field one = constant_data(g, 1.0);
  for (double v : one.values()) CHECK(v == 1.0);
  auto prm = validate_params(3, 1, 1, 0);
  Field rhs = nonlocal_rhs(g, validate_params(2, 1, 2, 0), one);
  for (double v : rhs.values()) CHECK(v == 0.0);
  CHECK(average_power(g, constant_data(g, 2.0), 1.0) == doctest::Approx(2.0));
  CHECK(kinetic_rhs(2.0, prm) > 0.0);
  CHECK_THROWS_AS(constant_data(g, -1.0), DomainError);
  CHECK_THROWS_AS(constant_data(g, 0.0), DomainError);
}

TEST_CASE("perturbed_constant") {
  Grid g = build_grid(Geometry::interval(2 * std::numbers::pi), 129);
  Field u0 = perturbed_constant(g, 1.0, 0.0, 2);
  for (double v : u0.values()) CHECK(v == 1.0);
  Field u1 = perturbed_constant(g, 1.0, 1e-4, 2);
  CHECK(std::abs(average_power(g, u1, 1.0) - 1.0) < 1e-12);
  auto phi = neumann_eigenpairs(g, 2).eigenfunctions[1];
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(u1[i] == doctest::Approx(1.0 + 1e-4 * phi[i]).epsilon(1e-15));
  CHECK_THROWS_AS(perturbed_constant(g, 1.0, 2.0, 2), DomainError);
}

TEST_CASE("spiky profile seam and origin value") {
  for (double a : {0.5, 1.0, 2.0 / 3.0, 2.0}) {
    for (double d : {0.02, 0.1, 0.5}) {
      const double below = std::nextafter(d, 0.0);
      CHECK(spiky_profile(below, a, d) == doctest::Approx(std::pow(d, -a)).epsilon(1e-12));
      CHECK(spiky_profile(d, a, d) == doctest::Approx(std::pow(d, -a)).epsilon(1e-15));
    }
  }
  CHECK(spiky_profile(0.0, 1.0, 0.1) == doctest::Approx(15.0).epsilon(1e-14));
  Grid g = build_grid(Geometry::ball(3), 257);
  auto prm = validate_params(3, 1, 1, 0);
  Field u = spiky_data(g, prm, SpikySpec::make(prm, 0.2, 0.1));
  CHECK(u[0] == doctest::Approx(15.0 * 0.2).epsilon(1e-14));
  CHECK(SpikySpec::make(validate_params(4, 3.5, 1, 0), 0.05, 0.02).a == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("spiky data is strictly decreasing and validated") {
  auto prm = validate_params(4, 3.5, 1, 0);
  Grid g = build_grid(Geometry::ball(3), 4096);
  Field u = spiky_data(g, prm, SpikySpec::make(prm, 0.05, 0.02));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(u[i] < u[i - 1]);
  Grid coarse = build_grid(Geometry::ball(3), 65);
  CHECK_THROWS_AS(spiky_data(coarse, prm, SpikySpec::make(prm, 0.05, 0.02)), ConfigError);
  Grid iv = build_grid(Geometry::interval(1.0), 4096);
  CHECK_THROWS_AS(spiky_data(iv, prm, SpikySpec::make(prm, 0.05, 0.02)), ConfigError);
}

TEST_CASE("lemma_exact closed forms") {
  // N = 3, p = 3, a = 1: outer value a rho^{-3}(a+2-N) + N a rho^{-3} = 3 rho^{-3}
  for (double rho : {0.2, 0.5, 0.9}) CHECK(lemma_exact(rho, 1.0, 0.1, 3, 3.0) == doctest::Approx(3.0 / std::pow(rho, 3)));
  // inner: -N a delta^{-a-2} + N a phi^p
  const double rho = 0.05, d = 0.1;
  const double phi = 15.0 - 0.5 * std::pow(d, -3) * rho * rho;
  CHECK(lemma_exact(rho, 1.0, d, 3, 3.0) == doctest::Approx(-3.0 * std::pow(d, -3) + 3.0 * std::pow(phi, 3)));
}

TEST_CASE("check_lemma_bounds matches the closed form away from the seam") {
  auto prm = validate_params(3, 1, 1, 0);
  Grid g = build_grid(Geometry::ball(3), 2049);
  auto rep = check_lemma_bounds(g, prm, SpikySpec::make(prm, 1.0, 0.1));
  CHECK(rep.inner_nodes > 50);
  CHECK(rep.outer_nodes > 1000);
  CHECK(rep.min_outer > 0.0);
  CHECK(rep.min_inner > 0.0);
  CHECK(rep.max_rel_error < 1e-3);

  Grid g2 = build_grid(Geometry::ball(3), 4097);
  auto rep2 = check_lemma_bounds(g2, prm, SpikySpec::make(prm, 1.0, 0.1));
  CHECK(rep2.max_rel_error < rep.max_rel_error);
}

TEST_CASE("lemma control: constant field") {
  Grid g = build_grid(Geometry::ball(3), 65);
  Field c = constant_data(g, 1.3);
  Field lc = laplacian_apply(g, c);
  const double na = 3.0 * 1.0;
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(lc[i] + na * std::pow(c[i], 3.0) > 0.0);
}
