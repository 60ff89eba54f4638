#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gmshadow {

struct ModelParams {
  double p = 2.0;
  double q = 1.0;
  double r = 1.0;
  double s = 0.0;
  double gamma = 1.0;      // q / (s + 1)
  double rho_index = 1.0;  // (p - 1) / r

  /// p - r*gamma, the exponent of the kinetic ODE.
  double net_exponent() const { return p - r * gamma; }
  /// r == p + 1 (Lyapunov functional available).
  bool variational() const;
};

ModelParams validate_params(double p, double q, double r, double s);

enum class Relation { less, less_equal, greater, greater_equal };

/// One checked hypothesis: lhs (rel) rhs.
struct Inequality {
  std::string label;
  double lhs = 0.0;
  Relation rel = Relation::less;
  double rhs = 0.0;

  bool holds() const;
};

struct TheoremTag {
  std::string name;
  std::vector<Inequality> checks;
};

struct HypothesisContext {
  std::optional<int> dimension;
};

struct RegimeReport {
  bool turing = false;
  bool anti_turing = false;
  bool boundary = false;
  double net_exponent = 0.0;
  std::vector<TheoremTag> theorem_tags;

  bool has_tag(const std::string& name) const;
};

inline constexpr double kBoundaryTolerance = 1e-12;

/// Names of every tag classify_regime can emit.
const std::vector<std::string>& theorem_tag_names();

/// Hypothesis list for a tag; empty optional when N is required but absent.
std::optional<std::vector<Inequality>> tag_hypotheses(const std::string& tag, const ModelParams& params,
                                                      std::optional<int> dimension);

/// Hypotheses of the blow-up rate result (N>=3, max{r,N/(N-2)} < p < (N+2)/(N-2), 2/N < (p-1)/r < gamma).
std::vector<Inequality> rate_hypotheses(const ModelParams& params, int dimension);

RegimeReport classify_regime(const ModelParams& params, HypothesisContext context = {});

double kinetic_rhs(double u, const ModelParams& params);

struct KineticResult {
  std::vector<double> t;
  std::vector<double> u;
  std::optional<double> blowup_time;
  /// Values at the requested sample times (NaN past blow-up).
  std::vector<double> samples;
};

inline constexpr double kKineticOverflow = 1e12;

/// Adaptive Dormand-Prince integration of u' = -u + u^{p - r*gamma}.
KineticResult integrate_kinetic(double u0, const ModelParams& params, double t_end, double abs_tol,
                                std::span<const double> sample_times = {});

}  // namespace gmshadow
