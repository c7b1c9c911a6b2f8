#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "inls/rational.hpp"

namespace inls {

// Problem data for i u_t + Lap u + |x|^-b |u|^(2 sigma) u = 0 on R^N.
// sigma and b are exact rationals so every criticality comparison is exact.
// b = 0 is accepted: the unweighted equation serves as a cross-check limit.
struct ProblemParams {
  int N = 3;
  Rational sigma{1};
  Rational b{1, 2};

  void validate() const {
    if (N < 1) throw std::invalid_argument("dimension N must be >= 1");
    if (!(sigma > Rational(0)))
      throw std::invalid_argument("sigma must be positive");
    if (!(b >= Rational(0) && b < Rational(2)))
      throw std::invalid_argument("b must lie in [0,2)");
  }

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

struct CriticalIndices {
  Rational s_c;     // N/2 - (2-b)/(2 sigma)
  Rational sigma_c; // 2 N sigma / (2-b)
};

enum class Regime {
  mass_subcritical,
  mass_critical,
  intercritical,
  energy_critical,
  energy_supercritical,
};

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::mass_subcritical: return "mass-subcritical";
    case Regime::mass_critical: return "mass-critical";
    case Regime::intercritical: return "intercritical";
    case Regime::energy_critical: return "energy-critical";
    case Regime::energy_supercritical: return "energy-supercritical";
  }
  return "?";
}

inline CriticalIndices derive_indices(const ProblemParams& p) {
  p.validate();
  CriticalIndices ci;
  ci.s_c = Rational(p.N, 2) - (Rational(2) - p.b) / (Rational(2) * p.sigma);
  ci.sigma_c = Rational(2 * p.N) * p.sigma / (Rational(2) - p.b);
  return ci;
}

// Criticality is decided by comparing sigma against (2-b)/N and, for N >= 3,
// (2-b)/(N-2); equalities are meaningful because inputs are exact.
inline Regime classify_regime(const ProblemParams& p) {
  p.validate();
  const Rational mass_threshold = (Rational(2) - p.b) / Rational(p.N);
  if (p.sigma < mass_threshold) return Regime::mass_subcritical;
  if (p.sigma == mass_threshold) return Regime::mass_critical;
  if (p.N <= 2) return Regime::intercritical;
  const Rational energy_threshold = (Rational(2) - p.b) / Rational(p.N - 2);
  if (p.sigma < energy_threshold) return Regime::intercritical;
  if (p.sigma == energy_threshold) return Regime::energy_critical;
  return Regime::energy_supercritical;
}

enum class TheoremId { gwp_2d, lwp_hsc, gn_sharp, concentration };

inline const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::gwp_2d: return "GWP-2D";
    case TheoremId::lwp_hsc: return "LWP-Hsc";
    case TheoremId::gn_sharp: return "GN-sharp";
    case TheoremId::concentration: return "concentration";
  }
  return "?";
}

inline TheoremId theorem_from_string(const std::string& s) {
  if (s == "GWP-2D") return TheoremId::gwp_2d;
  if (s == "LWP-Hsc") return TheoremId::lwp_hsc;
  if (s == "GN-sharp") return TheoremId::gn_sharp;
  if (s == "concentration") return TheoremId::concentration;
  throw std::invalid_argument("unknown theorem id: " + s);
}

struct HypothesisCheck {
  std::string description;
  bool pass = false;
};

struct HypothesisReport {
  TheoremId theorem;
  std::vector<HypothesisCheck> checks;
  bool all_pass = false;
  // The critical-space local theory is only settled for N >= 3; lower
  // dimensions run with a banner instead of a refusal.
  bool outside_proven_theory = false;
};

namespace detail {
inline void add_check(HypothesisReport& r, std::string what, bool ok) {
  r.checks.push_back({std::move(what), ok});
}
} // namespace detail

inline HypothesisReport check_hypotheses(const ProblemParams& p, TheoremId id) {
  p.validate();
  HypothesisReport rep;
  rep.theorem = id;
  const Rational two(2);
  const Rational mass_threshold = (two - p.b) / Rational(p.N);

  switch (id) {
    case TheoremId::gwp_2d: {
      detail::add_check(rep, "N = 2", p.N == 2);
      detail::add_check(rep, "0 < b < 1", p.b > Rational(0) && p.b < Rational(1));
      detail::add_check(rep, "sigma > (2-b)/2",
                        p.sigma > (two - p.b) / two);
      break;
    }
    case TheoremId::lwp_hsc:
    case TheoremId::concentration: {
      const bool dim_ok = p.N >= 3;
      detail::add_check(rep, "N >= 3", dim_ok);
      Rational bmax = Rational(p.N, 2) < two ? Rational(p.N, 2) : two;
      detail::add_check(rep, "0 < b < min{N/2, 2}",
                        p.b > Rational(0) && p.b < bmax);
      detail::add_check(rep, "sigma > (2-b)/N", p.sigma > mass_threshold);
      if (p.N >= 3) {
        detail::add_check(rep, "sigma < (2-b)/(N-2)",
                          p.sigma < (two - p.b) / Rational(p.N - 2));
      } else {
        // Intercritical with no finite upper bound; the theorem itself does
        // not cover these dimensions.
        detail::add_check(rep, "sigma < infinity (N <= 2)", true);
        rep.outside_proven_theory = true;
      }
      break;
    }
    case TheoremId::gn_sharp: {
      detail::add_check(rep, "N >= 1", p.N >= 1);
      detail::add_check(rep, "0 < b < 2",
                        p.b > Rational(0) && p.b < two);
      detail::add_check(rep, "sigma > (2-b)/N", p.sigma > mass_threshold);
      if (p.N >= 3) {
        detail::add_check(rep, "sigma < (2-b)/(N-2)",
                          p.sigma < (two - p.b) / Rational(p.N - 2));
      } else {
        detail::add_check(rep, "sigma < infinity (N <= 2)", true);
      }
      break;
    }
  }

  rep.all_pass = true;
  for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

} // namespace inls
