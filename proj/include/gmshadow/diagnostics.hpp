#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmshadow/grid.hpp"
#include "gmshadow/model.hpp"

namespace gmshadow {

/// Scalar observables at one time.
///
/// z is the reaction moment avg u^{p-1+r}; w is avg u^{r-p+1}, the moment whose
/// level set w = zeta^{1-gamma} bounds the invariant region.
struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  std::size_t step_index = 0;
  double u_mean = 0.0;
  double u_max = 0.0;
  double u_min = 0.0;
  double argmax_rho = 0.0;
  double zeta = 0.0;
  double z = 0.0;
  double w = 0.0;
  std::optional<double> J;
  std::optional<double> I;
  double u_neg_delta_avg = 0.0;
  double K = 0.0;
  double ut_inf = 0.0;  // sup norm of u_t
  double ut_sq = 0.0;   // weighted mean of u_t^2
};

inline constexpr double kDefaultDeltaDiag = 0.01;

DiagnosticsRecord compute_record(const Grid& grid, const ModelParams& params, std::span<const double> u, double t,
                                 double delta_diag = kDefaultDeltaDiag);
DiagnosticsRecord compute_record(const Grid& grid, const ModelParams& params, const Field& field, double t,
                                 double delta_diag = kDefaultDeltaDiag);

struct RegionState {
  double gamma1_residual = 0.0;  // w - zeta^{1-gamma}
  double gamma2_residual = 0.0;  // w - zeta^{1-(p-1)/r}
  bool in_region = false;        // w < zeta^{1-gamma}
};

RegionState region_state(double zeta, double w, const ModelParams& params);

struct Snapshot {
  double t = 0.0;
  std::vector<double> values;
};

struct Violation {
  std::string check;
  std::size_t index = 0;  // record index (first record of the pair for difference checks)
  double value = 0.0;
  double bound = 0.0;
};

struct ViolationReport {
  std::vector<Violation> violations;
  std::vector<std::string> checks_run;

  std::size_t count(const std::string& check) const;
  bool clean() const { return violations.empty(); }
};

/// Local finite-difference tolerance between records k and k+1 for the series g.
double fd_tolerance(std::span<const DiagnosticsRecord> records, std::span<const double> g, std::size_t k);

/// Monotonicity of g between consecutive records within fd_tolerance.
std::vector<Violation> check_monotone_sequence(const std::string& name, std::span<const DiagnosticsRecord> records,
                                               std::span<const double> g, bool increasing);

/// Mass inequality, dissipation, negative-moment bound, scaled-mean monotonicity and Hoelder.
ViolationReport check_monotone_bounds(std::span<const DiagnosticsRecord> records, const ModelParams& params);

/// Forward invariance of the region, zeta nondecreasing, w nonincreasing.
ViolationReport check_region_invariance(std::span<const DiagnosticsRecord> records, const ModelParams& params);

struct FitConfig {
  double overflow_guard = 1e10;
  double lower_factor = 100.0;
  std::size_t min_records = 8;
  double r2_threshold = 0.99;
};

enum class BlowUpClass { finite_time, growth_no_fit, none };
std::string to_string(BlowUpClass c);

struct BlowUpReport {
  bool detected = false;
  double T_est = 0.0;
  double beta_fit = 0.0;
  double beta_theory = 0.0;
  double C_fit = 0.0;
  std::array<double, 2> fit_window{0.0, 0.0};
  std::size_t fit_records = 0;
  double fit_r2 = 0.0;
  std::optional<bool> single_point;
  std::optional<double> argmax_drift;
  std::optional<double> profile_slope;
  BlowUpClass classification = BlowUpClass::none;
  std::vector<std::string> notes;
};

/// Joint fit of u_max ~ C (T - t)^{-beta}: golden-section on T, linear fit inside.
BlowUpReport fit_blowup(std::span<const DiagnosticsRecord> records, const ModelParams& params,
                        const FitConfig& config = {});

struct SinglePointEvidence {
  bool argmax_fixed = false;  // (a)
  double argmax_drift = 0.0;
  std::optional<bool> moment_bound;  // (b), ball only
  double moment_ratio = 0.0;         // max rho^N u / mean
  bool far_bounded = false;          // (c)
  double far_ratio = 0.0;            // max/min of u(rho0, t) over snapshots
  double center_growth = 0.0;        // u(x*, t_last) / u(x*, t_first)
  double rho0 = 0.25;
  bool single_point = false;
  std::string verdict;
};

SinglePointEvidence blowup_set_check(const Grid& grid, std::span<const Snapshot> snapshots,
                                     std::span<const DiagnosticsRecord> records);

struct ProfileRow {
  double rho = 0.0;
  double u = 0.0;
  double power_fit = 0.0;
  double log_fit = 0.0;
};

struct ProfileReport {
  double slope = 0.0;  // d log u / d log(1/rho)
  double intercept = 0.0;
  double power_residual = 0.0;  // rms
  double log_exponent = 0.0;    // fitted b in u ~ C (|log rho|/rho^2)^b
  double log_intercept = 0.0;
  double log_residual = 0.0;
  double predicted_slope = 0.0;     // 2/(p-1)
  double predicted_exponent = 0.0;  // 1/(p-1)
  double rho_lo = 0.0, rho_hi = 0.0;
  std::vector<ProfileRow> rows;
};

ProfileReport profile_extract(const Grid& grid, std::span<const double> final_snapshot, const ModelParams& params,
                              double rho_hi = 0.1);

}  // namespace gmshadow
