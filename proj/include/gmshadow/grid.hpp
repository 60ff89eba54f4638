#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gmshadow/model.hpp"

namespace gmshadow {

enum class GeometryKind { interval, ball };

struct Geometry {
  GeometryKind kind = GeometryKind::interval;
  double length = 1.0;  // interval only
  int dimension = 1;    // ball only

  static Geometry interval(double length);
  static Geometry ball(int dimension);

  /// Spatial dimension entering the stencil (1 for an interval).
  int stencil_dimension() const { return kind == GeometryKind::ball ? dimension : 1; }
};

inline constexpr double kPositivityGuard = 1e-300;

/// Uniform node-centred finite-volume mesh on [0, L] or the radial ball.
///
/// Control volume i spans [rho_i - h/2, rho_i + h/2] clipped to the domain,
/// measured with the rho^{N-1} volume factor on balls.  weights() are the
/// normalized volumes, so sum_i w_i f_i is the normalized domain average.
class Grid {
 public:
  const Geometry& geometry() const { return geometry_; }
  std::size_t size() const { return nodes_.size(); }
  double spacing() const { return h_; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  /// Normalized face coefficient A_{i+1/2} / (h |Omega|), i = 0..M-2.
  std::span<const double> face_coefficients() const { return faces_; }
  /// Laplacian row coefficients: L_i = up_i (u_{i+1}-u_i) - down_i (u_i-u_{i-1}).
  std::span<const double> upper() const { return upper_; }
  std::span<const double> lower() const { return lower_; }
  std::uint64_t id() const { return id_; }
  int stencil_dimension() const { return geometry_.stencil_dimension(); }

 private:
  friend Grid build_grid(Geometry geometry, std::size_t m);

  Geometry geometry_;
  double h_ = 0.0;
  std::vector<double> nodes_, weights_, faces_, upper_, lower_;
  std::uint64_t id_ = 0;
};

Grid build_grid(Geometry geometry, std::size_t m);

/// Nodal values bound to a grid identity.
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::uint64_t grid_id() const { return grid_id_; }

  void check_grid(const Grid& grid) const;

 private:
  std::vector<double> values_;
  std::uint64_t grid_id_ = 0;
};

// Raw kernels over spans (no grid-binding checks); used by the time stepper.
double average_power(const Grid& grid, std::span<const double> u, double m);
void laplacian_apply(const Grid& grid, std::span<const double> u, std::span<double> out);
void nonlocal_rhs(const Grid& grid, const ModelParams& params, std::span<const double> u, std::span<double> out);
double gradient_norm_sq(const Grid& grid, std::span<const double> u);

double average_power(const Grid& grid, const Field& field, double m);
Field laplacian_apply(const Grid& grid, const Field& field);
Field nonlocal_rhs(const Grid& grid, const ModelParams& params, const Field& field);
/// Normalized squared gradient norm, summation-by-parts consistent with laplacian_apply.
double gradient_norm_sq(const Grid& grid, const Field& field);

/// Pointwise power with the positivity guard for fractional or negative exponents.
double guarded_pow(double x, double m);

void write_snapshot_csv(std::ostream& os, const Grid& grid, std::span<const double> u);
void write_snapshot_csv(const std::string& path, const Grid& grid, std::span<const double> u);
/// Reads a rho,u CSV; the rho column must match the grid nodes.
Field read_snapshot_csv(const std::string& path, const Grid& grid);

}  // namespace gmshadow
