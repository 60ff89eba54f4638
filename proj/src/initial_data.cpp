#include "gmshadow/initial_data.hpp"

#include <cmath>
#include <string>

#include "gmshadow/error.hpp"
#include "gmshadow/spectral.hpp"

namespace gmshadow {

SpikySpec SpikySpec::make(const ModelParams& params, double lambda, double delta) {
  if (!(lambda > 0.0)) throw DomainError("spiky data needs lambda > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("spiky data needs 0 < delta < 1");
  return SpikySpec{lambda, delta, 2.0 / (params.p - 1.0)};
}

Field constant_data(const Grid& grid, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constant initial data needs c > 0");
  return Field(grid, std::vector<double>(grid.size(), c));
}

Field perturbed_constant(const Grid& grid, double c, double eps, std::size_t mode) {
  if (!(c > 0.0)) throw DomainError("perturbed initial data needs c > 0");
  if (mode < 1) throw DomainError("mode index is 1-based");
  std::vector<double> u(grid.size(), c);
  if (eps != 0.0) {
    EigenSystem sys = neumann_eigenpairs(grid, mode);
    const auto& phi = sys.eigenfunctions[mode - 1];
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = c + eps * phi[i];
  }
  for (double v : u)
    if (!(v > 0.0)) throw DomainError("positivity violation: c + eps*phi_j is not positive everywhere");
  return Field(grid, std::move(u));
}

double spiky_profile(double rho, double a, double delta) {
  if (rho >= delta) return rho == delta ? std::pow(delta, -a) : std::pow(rho, -a);
  return std::pow(delta, -a) * (1.0 + 0.5 * a) - 0.5 * a * std::pow(delta, -(a + 2.0)) * rho * rho;
}

Field spiky_data(const Grid& grid, const ModelParams& params, const SpikySpec& spec) {
  if (grid.geometry().kind != GeometryKind::ball) throw ConfigError("spiky initial data requires ball geometry");
  const double a = 2.0 / (params.p - 1.0);
  if (std::abs(a - spec.a) > 1e-15 * a) throw DomainError("spiky spec exponent a must equal 2/(p-1)");
  if (spec.delta < 4.0 * grid.spacing())
    throw ConfigError("spiky core radius delta must be at least 4h (delta=" + std::to_string(spec.delta) +
                      ", h=" + std::to_string(grid.spacing()) + ")");
  auto x = grid.nodes();
  std::vector<double> u(grid.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = spec.lambda * spiky_profile(x[i], a, spec.delta);
  for (std::size_t i = 1; i < u.size(); ++i)
    if (!(u[i] < u[i - 1]))
      throw ConfigError("spiky initial data is not strictly decreasing at node " + std::to_string(i));
  return Field(grid, std::move(u));
}

double lemma_exact(double rho, double a, double delta, int n, double p) {
  const double phi = spiky_profile(rho, a, delta);
  double lap;
  if (rho > delta)
    lap = a * (a + 2.0 - n) * std::pow(rho, -a - 2.0);
  else
    lap = -n * a * std::pow(delta, -(a + 2.0));
  return lap + n * a * std::pow(phi, p);
}

LemmaReport check_lemma_bounds(const Grid& grid, const ModelParams& params, const SpikySpec& spec) {
  const SpikySpec unit{1.0, spec.delta, spec.a};
  Field phi = spiky_data(grid, params, unit);
  Field lap = laplacian_apply(grid, phi);
  const int n = grid.geometry().dimension;
  const double h = grid.spacing();
  const double na = n * spec.a;
  auto x = grid.nodes();

  LemmaReport rep;
  rep.min_inner = rep.min_outer = INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = x[i];
    const bool inner = rho < spec.delta - 2.0 * h;
    const bool outer = rho > spec.delta + 2.0 * h && rho <= 1.0 - 2.0 * h;
    if (!inner && !outer) continue;
    const double v = lap[i] + na * std::pow(phi[i], params.p);
    const double exact = lemma_exact(rho, spec.a, spec.delta, n, params.p);
    if (inner) {
      rep.min_inner = std::min(rep.min_inner, v);
      ++rep.inner_nodes;
    } else {
      rep.min_outer = std::min(rep.min_outer, v);
      ++rep.outer_nodes;
    }
    if (exact != 0.0) rep.max_rel_error = std::max(rep.max_rel_error, std::abs(v - exact) / std::abs(exact));
  }
  rep.min_value = std::min(rep.min_inner, rep.min_outer);
  return rep;
}

}  // namespace gmshadow
