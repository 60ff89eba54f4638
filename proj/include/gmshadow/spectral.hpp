#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gmshadow/grid.hpp"
#include "gmshadow/model.hpp"

namespace gmshadow {

struct EigenSystem {
  std::vector<double> eigenvalues;                  // mu_j^2, nondecreasing, mu_1^2 = 0
  std::vector<std::vector<double>> eigenfunctions;  // weighted mean of phi_j^2 equals 1

  std::size_t count() const { return eigenvalues.size(); }
};

/// First k eigenpairs of the discrete Neumann -Laplacian (k <= M/4).
EigenSystem neumann_eigenpairs(const Grid& grid, std::size_t k);

/// a(phi,phi) = |grad phi|^2 + (1-p) avg(phi^2) + r*gamma (avg phi)^2.
double quadratic_form(const ModelParams& params, const Grid& grid, const Field& phi);

struct GrowthMode {
  std::size_t mode = 1;  // 1-based Neumann index
  bool constant_mode = false;
  double mu_sq = 0.0;
  double rate = 0.0;  // sigma
};

struct LinearSpectrum {
  std::vector<GrowthMode> modes;  // sorted by rate, descending
  double mu2_sq = 0.0;
  bool unstable_nonconstant = false;  // max over nonconstant modes of sigma > 0
  bool criterion = false;             // mu_2^2 < p - 1
};

/// Growth rates of phi -> Lap phi + (p-1) phi - r*gamma avg(phi), the linearization about u = 1.
LinearSpectrum linearized_spectrum(const ModelParams& params, const Grid& grid, std::size_t k);

/// Slope of log(amplitude) against time by least squares.
double measure_growth_rate(std::span<const double> t, std::span<const double> amplitude);

}  // namespace gmshadow
