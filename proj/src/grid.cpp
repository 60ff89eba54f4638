#include "gmshadow/grid.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gmshadow/error.hpp"
#include "powers.hpp"

namespace gmshadow {

namespace {

std::atomic<std::uint64_t> next_grid_id{1};

// (b^N - a^N)/N without cancellation: (b-a) * sum_k b^k a^{N-1-k} / N
double shell_volume(double a, double b, int n) {
  double s = 0.0, bk = 1.0;
  for (int k = 0; k < n; ++k) {
    s += bk * std::pow(a, n - 1 - k);
    bk *= b;
  }
  return (b - a) * s / n;
}

}  // namespace

Geometry Geometry::interval(double length) {
  Geometry g;
  g.kind = GeometryKind::interval;
  g.length = length;
  g.dimension = 1;
  return g;
}

Geometry Geometry::ball(int dimension) {
  Geometry g;
  g.kind = GeometryKind::ball;
  g.length = 1.0;
  g.dimension = dimension;
  return g;
}

Grid build_grid(Geometry geometry, std::size_t m) {
  if (m < 16) throw DomainError("grid needs at least 16 nodes (got " + std::to_string(m) + ")");
  if (geometry.kind == GeometryKind::ball) {
    if (geometry.dimension < 1) throw DomainError("ball dimension N must be >= 1");
    geometry.length = 1.0;
  } else {
    if (!(geometry.length > 0.0) || !std::isfinite(geometry.length))
      throw DomainError("interval length must be positive and finite");
    geometry.dimension = 1;
  }
  Grid g;
  g.geometry_ = geometry;
  const double len = geometry.length;
  const int n = geometry.stencil_dimension();
  const double h = len / double(m - 1);
  g.h_ = h;
  g.nodes_.resize(m);
  for (std::size_t i = 0; i < m; ++i) g.nodes_[i] = double(i) * h;
  g.nodes_[m - 1] = len;

  std::vector<double> vol(m), area(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    double a = i == 0 ? 0.0 : (double(i) - 0.5) * h;
    double b = i == m - 1 ? len : (double(i) + 0.5) * h;
    vol[i] = shell_volume(a, b, n);
  }
  for (std::size_t i = 0; i + 1 < m; ++i) area[i] = std::pow((double(i) + 0.5) * h, n - 1);
  // outer half cell: reflection row 2(u_{M-2} - u_{M-1})/h^2
  vol[m - 1] = 0.5 * h * area[m - 2];

  double total = 0.0;
  for (double v : vol) total += v;
  g.weights_.resize(m);
  for (std::size_t i = 0; i < m; ++i) g.weights_[i] = vol[i] / total;
  g.faces_.resize(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) g.faces_[i] = area[i] / (h * total);
  g.upper_.assign(m, 0.0);
  g.lower_.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (i + 1 < m) g.upper_[i] = area[i] / (h * vol[i]);
    if (i > 0) g.lower_[i] = area[i - 1] / (h * vol[i]);
  }
  g.id_ = next_grid_id.fetch_add(1);
  return g;
}

Field::Field(const Grid& grid, std::vector<double> values) : values_(std::move(values)), grid_id_(grid.id()) {
  if (values_.size() != grid.size())
    throw DomainError("field length " + std::to_string(values_.size()) + " does not match grid size " +
                      std::to_string(grid.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("field values must be finite");
}

void Field::check_grid(const Grid& grid) const {
  if (grid_id_ != grid.id() || values_.size() != grid.size()) throw DomainError("field is not bound to this grid");
}

double guarded_pow(double x, double m) {
  if (m >= 0.0 && m == std::floor(m)) return detail::fast_pow(x, m);
  if (!(x > kPositivityGuard))
    throw DomainError("nonpositive value with fractional or negative exponent");
  return detail::fast_pow(x, m);
}

double average_power(const Grid& grid, std::span<const double> u, double m) {
  auto w = grid.weights();
  double s = 0.0;
  if (m == 1.0) {
    for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * u[i];
    return s;
  }
  const bool integer = m >= 0.0 && m == std::floor(m);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!integer && !(u[i] > kPositivityGuard))
      throw DomainError("nonpositive value with fractional or negative exponent");
    s += w[i] * detail::fast_pow(u[i], m);
  }
  return s;
}

void laplacian_apply(const Grid& grid, std::span<const double> u, std::span<double> out) {
  const std::size_t m = u.size();
  auto up = grid.upper();
  auto lo = grid.lower();
  out[0] = up[0] * (u[1] - u[0]);
  for (std::size_t i = 1; i + 1 < m; ++i) out[i] = up[i] * (u[i + 1] - u[i]) - lo[i] * (u[i] - u[i - 1]);
  out[m - 1] = -lo[m - 1] * (u[m - 1] - u[m - 2]);
}

void nonlocal_rhs(const Grid& grid, const ModelParams& params, std::span<const double> u, std::span<double> out) {
  for (double v : u)
    if (!(v > kPositivityGuard)) throw DomainError("nonlocal_rhs requires a strictly positive field");
  const double zeta = average_power(grid, u, params.r);
  const double inv_denominator = 1.0 / detail::fast_pow(zeta, params.gamma);
  laplacian_apply(grid, u, out);
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] += -u[i] + detail::fast_pow(u[i], params.p) * inv_denominator;
}

double gradient_norm_sq(const Grid& grid, std::span<const double> u) {
  auto f = grid.face_coefficients();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double d = u[i + 1] - u[i];
    s += f[i] * d * d;
  }
  return s;
}

double average_power(const Grid& grid, const Field& field, double m) {
  field.check_grid(grid);
  return average_power(grid, field.values(), m);
}

Field laplacian_apply(const Grid& grid, const Field& field) {
  field.check_grid(grid);
  std::vector<double> out(field.size());
  laplacian_apply(grid, field.values(), out);
  return Field(grid, std::move(out));
}

Field nonlocal_rhs(const Grid& grid, const ModelParams& params, const Field& field) {
  field.check_grid(grid);
  std::vector<double> out(field.size());
  nonlocal_rhs(grid, params, field.values(), out);
  return Field(grid, std::move(out));
}

double gradient_norm_sq(const Grid& grid, const Field& field) {
  field.check_grid(grid);
  return gradient_norm_sq(grid, field.values());
}

void write_snapshot_csv(std::ostream& os, const Grid& grid, std::span<const double> u) {
  os << "rho,u\n";
  char buf[80];
  auto x = grid.nodes();
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[i], u[i]);
    os << buf;
  }
}

void write_snapshot_csv(const std::string& path, const Grid& grid, std::span<const double> u) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_snapshot_csv(os, grid, u);
}

Field read_snapshot_csv(const std::string& path, const Grid& grid) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read initial data file " + path);
  std::string line;
  std::getline(is, line);
  if (line.rfind("rho,u", 0) != 0) throw ConfigError(path + ": expected header 'rho,u'");
  std::vector<double> vals;
  auto x = grid.nodes();
  const double tol = 1e-12 * std::max(1.0, grid.geometry().length);
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double rho = 0.0, u = 0.0;
    char comma = 0;
    std::istringstream ls(line);
    if (!(ls >> rho >> comma >> u) || comma != ',')
      throw ConfigError(path + ": malformed row " + std::to_string(row + 2));
    if (row >= x.size() || std::abs(rho - x[row]) > tol)
      throw ConfigError(path + ": row " + std::to_string(row + 2) + " does not match the grid node");
    vals.push_back(u);
    ++row;
  }
  if (vals.size() != grid.size())
    throw ConfigError(path + ": expected " + std::to_string(grid.size()) + " rows, found " + std::to_string(vals.size()));
  return Field(grid, std::move(vals));
}

}  // namespace gmshadow
