#pragma once

#include <cstddef>

#include "gmshadow/grid.hpp"
#include "gmshadow/model.hpp"

namespace gmshadow {

struct SpikySpec {
  double lambda = 1.0;
  double delta = 0.1;
  double a = 2.0;  // 2/(p-1)

  static SpikySpec make(const ModelParams& params, double lambda, double delta);
};

Field constant_data(const Grid& grid, double c);

/// c + eps * phi_j with phi_j the j-th discrete Neumann eigenfunction (1-based).
Field perturbed_constant(const Grid& grid, double c, double eps, std::size_t mode);

/// Unscaled profile phi_delta(rho): rho^{-a} outside delta, quadratic cap inside.
double spiky_profile(double rho, double a, double delta);

/// lambda * phi_delta sampled at the nodes of a ball grid.
Field spiky_data(const Grid& grid, const ModelParams& params, const SpikySpec& spec);

struct LemmaReport {
  double min_inner = 0.0;  // min of L(phi) + N a phi^p over rho < delta - 2h
  double min_outer = 0.0;  // same over delta + 2h < rho <= 1 - 2h
  double min_value = 0.0;
  /// max |discrete - closed form| / closed form over checked nodes
  double max_rel_error = 0.0;
  std::size_t inner_nodes = 0;
  std::size_t outer_nodes = 0;
};

/// Evaluates Lap(phi_delta) + N a phi_delta^p away from the seam and the outer boundary.
LemmaReport check_lemma_bounds(const Grid& grid, const ModelParams& params, const SpikySpec& spec);

/// Closed form of Lap(phi_delta) + N a phi_delta^p off the seam.
double lemma_exact(double rho, double a, double delta, int n, double p);

}  // namespace gmshadow
