#include "gmshadow/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dopri.hpp"
#include "gmshadow/error.hpp"

namespace gmshadow {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Inequality ineq(std::string label, double lhs, Relation rel, double rhs) {
  return Inequality{std::move(label), lhs, rel, rhs};
}

double dimension_ratio_upper(int n) {
  // (N+2)/(N-2), infinite for N <= 2
  return n > 2 ? double(n + 2) / double(n - 2) : std::numeric_limits<double>::infinity();
}

}  // namespace

bool ModelParams::variational() const { return std::abs(r - (p + 1.0)) <= kBoundaryTolerance; }

ModelParams validate_params(double p, double q, double r, double s) {
  for (double v : {p, q, r, s})
    if (!std::isfinite(v)) throw DomainError("exponents must be finite");
  if (!(p > 1.0)) throw DomainError("p must exceed 1 (got " + num(p) + ")");
  if (!(q > 0.0)) throw DomainError("q must be positive (got " + num(q) + ")");
  if (!(r > 0.0)) throw DomainError("r must be positive (got " + num(r) + ")");
  if (!(s > -1.0)) throw DomainError("s must exceed -1 (got " + num(s) + ")");
  ModelParams m;
  m.p = p;
  m.q = q;
  m.r = r;
  m.s = s;
  m.gamma = q / (s + 1.0);
  m.rho_index = (p - 1.0) / r;
  return m;
}

bool Inequality::holds() const {
  switch (rel) {
    case Relation::less: return lhs < rhs;
    case Relation::less_equal: return lhs <= rhs;
    case Relation::greater: return lhs > rhs;
    case Relation::greater_equal: return lhs >= rhs;
  }
  return false;
}

bool RegimeReport::has_tag(const std::string& name) const {
  return std::any_of(theorem_tags.begin(), theorem_tags.end(),
                     [&](const TheoremTag& t) { return t.name == name; });
}

const std::vector<std::string>& theorem_tag_names() {
  static const std::vector<std::string> names = {"ode-blowup",      "variational-blowup", "variational-global",
                                                 "small-rho-global", "region-blowup",      "region-global",
                                                 "ddi-spiky"};
  return names;
}

std::optional<std::vector<Inequality>> tag_hypotheses(const std::string& tag, const ModelParams& m,
                                                      std::optional<int> dimension) {
  using R = Relation;
  const double p = m.p, r = m.r, g = m.gamma, rho = m.rho_index;
  std::vector<Inequality> out;
  if (tag == "ode-blowup") {
    out.push_back(ineq("p >= r", p, R::greater_equal, r));
    out.push_back(ineq("p - r*gamma > 1", p - r * g, R::greater, 1.0));
  } else if (tag == "variational-blowup") {
    out.push_back(ineq("|r - (p+1)| <= 1e-12", std::abs(r - (p + 1.0)), R::less_equal, kBoundaryTolerance));
    out.push_back(ineq("gamma > 0", g, R::greater, 0.0));
    out.push_back(ineq("gamma < min{1,(p-1)/(p+1)}", g, R::less, std::min(1.0, (p - 1.0) / (p + 1.0))));
  } else if (tag == "variational-global") {
    if (!dimension) return std::nullopt;
    const int n = *dimension;
    out.push_back(ineq("N >= 3", n, R::greater_equal, 3.0));
    out.push_back(ineq("|r - (p+1)| <= 1e-12", std::abs(r - (p + 1.0)), R::less_equal, kBoundaryTolerance));
    out.push_back(ineq("gamma > (p-1)/(p+1)", g, R::greater, (p - 1.0) / (p + 1.0)));
    out.push_back(ineq("gamma < 1", g, R::less, 1.0));
    out.push_back(ineq("p > 1", p, R::greater, 1.0));
    out.push_back(ineq("p < (N+2)/(N-2)", p, R::less, dimension_ratio_upper(n)));
  } else if (tag == "small-rho-global") {
    if (!dimension) return std::nullopt;
    const int n = *dimension;
    out.push_back(ineq("(p-1)/r < min{1, 2/N, (1-1/r)/2}", rho, R::less,
                       std::min({1.0, 2.0 / n, 0.5 * (1.0 - 1.0 / r)})));
    out.push_back(ineq("gamma > 0", g, R::greater, 0.0));
    out.push_back(ineq("gamma < 1", g, R::less, 1.0));
  } else if (tag == "region-blowup") {
    out.push_back(ineq("gamma > 0", g, R::greater, 0.0));
    out.push_back(ineq("gamma < 1", g, R::less, 1.0));
    out.push_back(ineq("r <= 1", r, R::less_equal, 1.0));
    out.push_back(ineq("(p-1)/r > 1", rho, R::greater, 1.0));
  } else if (tag == "region-global") {
    out.push_back(ineq("gamma > 1", g, R::greater, 1.0));
    out.push_back(ineq("r >= 1", r, R::greater_equal, 1.0));
    out.push_back(ineq("(p-1)/r < 1", rho, R::less, 1.0));
  } else if (tag == "ddi-spiky") {
    if (!dimension) return std::nullopt;
    const int n = *dimension;
    out.push_back(ineq("N >= 3", n, R::greater_equal, 3.0));
    out.push_back(ineq("r >= 1", r, R::greater_equal, 1.0));
    out.push_back(ineq("r <= p", r, R::less_equal, p));
    out.push_back(ineq("p > N/(N-2)", p, R::greater,
                       n > 2 ? double(n) / (n - 2) : std::numeric_limits<double>::infinity()));
    out.push_back(ineq("(p-1)/r > 2/N", rho, R::greater, 2.0 / n));
    out.push_back(ineq("(p-1)/r < gamma", rho, R::less, g));
  } else {
    throw DomainError("unknown theorem tag: " + tag);
  }
  return out;
}

std::vector<Inequality> rate_hypotheses(const ModelParams& m, int n) {
  using R = Relation;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Inequality> out;
  out.push_back(ineq("N >= 3", n, R::greater_equal, 3.0));
  out.push_back(ineq("p > max{r, N/(N-2)}", m.p, R::greater, std::max(m.r, n > 2 ? double(n) / (n - 2) : inf)));
  out.push_back(ineq("p < (N+2)/(N-2)", m.p, R::less, dimension_ratio_upper(n)));
  out.push_back(ineq("(p-1)/r > 2/N", m.rho_index, R::greater, 2.0 / n));
  out.push_back(ineq("(p-1)/r < gamma", m.rho_index, R::less, m.gamma));
  return out;
}

RegimeReport classify_regime(const ModelParams& m, HypothesisContext context) {
  RegimeReport rep;
  rep.net_exponent = m.net_exponent();
  const double d = rep.net_exponent - 1.0;
  if (std::abs(d) <= kBoundaryTolerance)
    rep.boundary = true;
  else if (d < 0.0)
    rep.turing = true;
  else
    rep.anti_turing = true;

  for (const auto& name : theorem_tag_names()) {
    auto checks = tag_hypotheses(name, m, context.dimension);
    if (!checks) continue;
    if (std::all_of(checks->begin(), checks->end(), [](const Inequality& c) { return c.holds(); }))
      rep.theorem_tags.push_back(TheoremTag{name, std::move(*checks)});
  }
  return rep;
}

double kinetic_rhs(double u, const ModelParams& m) {
  if (!(u > 0.0)) throw DomainError("kinetic_rhs requires u > 0");
  return -u + std::pow(u, m.net_exponent());
}

KineticResult integrate_kinetic(double u0, const ModelParams& m, double t_end, double abs_tol,
                                std::span<const double> sample_times) {
  using namespace detail;
  if (!(u0 > 0.0)) throw DomainError("integrate_kinetic requires u0 > 0");
  if (!(t_end > 0.0)) throw DomainError("integrate_kinetic requires t_end > 0");
  if (!(abs_tol > 0.0)) throw DomainError("integrate_kinetic requires abs_tol > 0");

  const double k = m.net_exponent();
  const bool can_blow = k > 1.0 + kBoundaryTolerance && u0 > 1.0;
  auto f = [&](double u) { return -u + std::pow(u, k); };

  std::vector<double> targets(sample_times.begin(), sample_times.end());
  std::sort(targets.begin(), targets.end());
  KineticResult res;
  res.samples.assign(targets.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::size_t> order(sample_times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sample_times[a] < sample_times[b]; });
  std::size_t next = 0;

  double t = 0.0, u = u0;
  res.t.push_back(t);
  res.u.push_back(u);
  auto emit_samples = [&]() {
    while (next < targets.size() && targets[next] <= t) {
      if (targets[next] == t) res.samples[order[next]] = u;
      ++next;
    }
  };
  emit_samples();

  double h = std::min(1e-3, t_end);
  double k1 = f(u);
  while (t < t_end) {
    if (can_blow && u >= kKineticOverflow) {
      // remaining time to infinity for u' = u^k - u, exact in closed form
      double tail = -std::log1p(-std::pow(u, 1.0 - k)) / (k - 1.0);
      res.blowup_time = t + tail;
      break;
    }
    double stop = t_end;
    if (next < targets.size() && targets[next] < stop) stop = targets[next];
    bool clipped = false;
    if (t + h >= stop) {
      h = stop - t;
      clipped = true;
    }
    double k2 = f(u + h * kA21 * k1);
    double k3 = f(u + h * (kA31 * k1 + kA32 * k2));
    double k4 = f(u + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    double k5 = f(u + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    double k6 = f(u + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
    double un = u + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    double k7 = std::isfinite(un) && un > 0.0 ? f(un) : std::numeric_limits<double>::quiet_NaN();
    double e = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
    double err = std::abs(e) / (abs_tol * std::max({1.0, std::abs(u), std::abs(un)}));
    if (!std::isfinite(err) || !(un > 0.0)) err = 1e10;
    if (err <= 1.0) {
      t = clipped ? stop : t + h;
      u = un;
      k1 = k7;
      res.t.push_back(t);
      res.u.push_back(u);
      emit_samples();
    }
    double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    if (h < 1e-15 * std::max(1.0, t)) throw NumericalFailure("kinetic integration: tolerance failure (step underflow)");
  }
  return res;
}

}  // namespace gmshadow
