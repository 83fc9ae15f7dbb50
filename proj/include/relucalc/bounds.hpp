#pragma once

// Bound bookkeeping shared by all constructions: the closed-form claims a
// construction makes about itself, the measured structural metrics, and the
// resulting pass/fail flags.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "relucalc/core.hpp"

namespace relucalc {

// Absolute slack applied when comparing measured reals against claimed
// real-valued bounds.
inline constexpr double kBoundSlack = 1e-12;

struct BoundClaim {
  std::string name;     // which quantity (param, length, size, error)
  std::string formula;  // the closed form the claim evaluates
  double claimed = 0.0;
  std::optional<double> measured;  // filled when the quantity is measurable here
  bool checked = false;
  bool pass = false;
};

struct BoundReport {
  std::string construction;
  double claimed_param_bound = 0.0;
  double claimed_length_bound = 0.0;
  double claimed_size_bound = 0.0;
  double claimed_error_bound = 0.0;
  int64_t measured_param = 0;
  int64_t measured_length = 0;
  double measured_size = 0.0;
  std::vector<BoundClaim> claims;

  bool all_pass() const {
    for (const BoundClaim& c : claims)
      if (c.checked && !c.pass) return false;
    return true;
  }

  const BoundClaim* failing() const {
    for (const BoundClaim& c : claims)
      if (c.checked && !c.pass) return &c;
    return nullptr;
  }
};

// A constructed network together with the report of its claimed bounds.
struct Construction {
  Network net;
  BoundReport report;
};

enum class TargetFamily { product, sin_product, sin_sum, periodic_generic, identity };

inline std::string to_string(TargetFamily f) {
  switch (f) {
    case TargetFamily::product: return "product";
    case TargetFamily::sin_product: return "sin-product";
    case TargetFamily::sin_sum: return "sin-sum";
    case TargetFamily::periodic_generic: return "periodic";
    case TargetFamily::identity: return "identity";
  }
  return "?";
}

// Parameters of a target function family on a box [a,b]^d.
struct TargetSpec {
  TargetFamily family = TargetFamily::product;
  int64_t d = 1;
  double a = 0.0;
  double b = 1.0;
  double gamma = 1.0;  // in (0,1] for products; any positive value for sums
  double beta = 1.0;   // >= 1
  double kappa = 1.0;  // > 0
  double phi = 0.0;

  void validate() const {
    if (d < 1) throw domain_error("target: d must be >= 1");
    if (b < a) throw domain_error("target: b must be >= a");
    if (kappa <= 0.0) throw domain_error("target: kappa must be > 0");
    if (family == TargetFamily::sin_sum) {
      if (gamma <= 0.0) throw domain_error("target: gamma must be > 0");
    } else if (family != TargetFamily::identity) {
      if (gamma <= 0.0 || gamma > 1.0) throw domain_error("target: gamma must be in (0,1]");
      if (beta < 1.0) throw domain_error("target: beta must be >= 1");
    }
  }
};

namespace detail {

inline int64_t ceil_log2(double x) {
  if (x <= 0.0) throw domain_error("ceil_log2: argument must be positive");
  int64_t k = static_cast<int64_t>(std::ceil(std::log2(x)));
  // Nudge against rounding on exact powers of two.
  while (std::pow(2.0, static_cast<double>(k)) < x) ++k;
  while (k > 0 && std::pow(2.0, static_cast<double>(k - 1)) >= x) --k;
  return k;
}

// Clamped variant for bound formulas: the closed forms stay total by
// treating arguments in (0,1] (or zero) as contributing nothing.
inline double ceil_log2_clamped(double x) {
  if (x <= 1.0) return 0.0;
  return static_cast<double>(ceil_log2(x));
}

inline void add_claim(BoundReport& report, const std::string& name, const std::string& formula,
                      double claimed, std::optional<double> measured) {
  BoundClaim c;
  c.name = name;
  c.formula = formula;
  c.claimed = claimed;
  c.measured = measured;
  if (measured.has_value()) {
    c.checked = true;
    c.pass = *measured <= claimed + kBoundSlack;
  }
  report.claims.push_back(std::move(c));
}

// Standard report skeleton: measures the built network and checks the three
// structural claims. The error claim is recorded unchecked; grid measurement
// fills it in later.
inline BoundReport make_report(const std::string& construction, const Network& net,
                               double param_bound, const std::string& param_formula,
                               double length_bound, const std::string& length_formula,
                               double size_bound, const std::string& size_formula,
                               double error_bound, const std::string& error_formula) {
  const Metrics m = metrics(net);
  BoundReport report;
  report.construction = construction;
  report.claimed_param_bound = param_bound;
  report.claimed_length_bound = length_bound;
  report.claimed_size_bound = size_bound;
  report.claimed_error_bound = error_bound;
  report.measured_param = m.param_count;
  report.measured_length = m.length;
  report.measured_size = m.size_norm;
  add_claim(report, "param", param_formula, param_bound, static_cast<double>(m.param_count));
  add_claim(report, "length", length_formula, length_bound, static_cast<double>(m.length));
  add_claim(report, "size", size_formula, size_bound, m.size_norm);
  add_claim(report, "error", error_formula, error_bound, std::nullopt);
  return report;
}

}  // namespace detail

}  // namespace relucalc
