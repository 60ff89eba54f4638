#include "gmshadow/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "gmshadow/error.hpp"

namespace gmshadow {

EigenSystem neumann_eigenpairs(const Grid& grid, std::size_t k) {
  const std::size_t m = grid.size();
  if (k == 0) throw DomainError("neumann_eigenpairs needs k >= 1");
  if (k > m / 4) throw DomainError("neumann_eigenpairs needs k <= M/4");

  // S = W^{1/2} (-L) W^{-1/2} is symmetric because w_i * upper_i = w_{i+1} * lower_{i+1}.
  auto w = grid.weights();
  auto up = grid.upper();
  auto lo = grid.lower();
  std::vector<double> d(m), e(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = up[i] + lo[i];
  for (std::size_t i = 0; i + 1 < m; ++i) e[i] = -up[i] * std::sqrt(w[i] / w[i + 1]);

  EigenSystem sys;
  sys.eigenvalues.push_back(0.0);
  sys.eigenfunctions.emplace_back(m, 1.0);
  if (k == 1) return sys;

  const lapack_int n = lapack_int(m);
  lapack_int found = 0;
  std::vector<double> vals(m), vecs(m * (k - 1));
  std::vector<lapack_int> support(2 * m);
  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 2,
                                   lapack_int(k), 0.0, &found, vals.data(), vecs.data(), n, support.data());
  if (info != 0 || found != lapack_int(k - 1))
    throw std::runtime_error("eigensolve failure (dstevr info " + std::to_string(info) + ")");

  for (std::size_t j = 0; j + 1 < k; ++j) {
    std::vector<double> phi(m);
    const double* y = vecs.data() + j * m;
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      phi[i] = y[i] / std::sqrt(w[i]);
      norm += w[i] * phi[i] * phi[i];
    }
    const double sign = phi[0] < 0.0 ? -1.0 : 1.0;
    const double scale = sign / std::sqrt(norm);
    for (double& v : phi) v *= scale;
    sys.eigenvalues.push_back(std::max(vals[j], 0.0));
    sys.eigenfunctions.push_back(std::move(phi));
  }
  return sys;
}

double quadratic_form(const ModelParams& params, const Grid& grid, const Field& phi) {
  phi.check_grid(grid);
  const double grad = gradient_norm_sq(grid, phi.values());
  const double sq = average_power(grid, phi.values(), 2.0);
  const double mean = average_power(grid, phi.values(), 1.0);
  return grad + (1.0 - params.p) * sq + params.r * params.gamma * mean * mean;
}

LinearSpectrum linearized_spectrum(const ModelParams& params, const Grid& grid, std::size_t k) {
  EigenSystem sys = neumann_eigenpairs(grid, k);
  LinearSpectrum out;
  for (std::size_t j = 0; j < sys.count(); ++j) {
    GrowthMode g;
    g.mode = j + 1;
    g.constant_mode = j == 0;
    g.mu_sq = sys.eigenvalues[j];
    g.rate = j == 0 ? params.p - 1.0 - params.r * params.gamma : params.p - 1.0 - g.mu_sq;
    out.modes.push_back(g);
  }
  if (sys.count() >= 2) {
    out.mu2_sq = sys.eigenvalues[1];
    out.criterion = out.mu2_sq < params.p - 1.0;
    double best = -INFINITY;
    for (const auto& g : out.modes)
      if (!g.constant_mode) best = std::max(best, g.rate);
    out.unstable_nonconstant = best > 0.0;
  }
  std::stable_sort(out.modes.begin(), out.modes.end(),
                   [](const GrowthMode& a, const GrowthMode& b) { return a.rate > b.rate; });
  return out;
}

double measure_growth_rate(std::span<const double> t, std::span<const double> amplitude) {
  if (t.size() != amplitude.size() || t.size() < 2) throw DomainError("growth rate needs >= 2 matched samples");
  double st = 0, sy = 0;
  const double n = double(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(amplitude[i] > 0.0)) throw DomainError("growth rate needs positive amplitudes");
    st += t[i];
    sy += std::log(amplitude[i]);
  }
  const double tm = st / n, ym = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dx = t[i] - tm;
    sxy += dx * (std::log(amplitude[i]) - ym);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw DomainError("growth rate needs distinct sample times");
  return sxy / sxx;
}

}  // namespace gmshadow
