#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "inls/checkpoint.hpp"
#include "inls/groundstate.hpp"
#include "inls/params.hpp"
#include "inls/radial.hpp"
#include "inls/spectral.hpp"

namespace inls {

struct EvolutionState {
  double t = 0.0;
  double dt = 1e-3;
  long step_index = 0;
  RadialField field;
};

struct InvariantRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double hsc_norm = 0.0;
  double potential = 0.0;
  double variance = 0.0;
  double sup_norm = 0.0;
  double dt = 0.0;
};

struct Snapshot {
  double t = 0.0;
  RadialField field;
};

struct Trajectory {
  std::vector<InvariantRecord> records;
  std::vector<Snapshot> snapshots;
  double snapshot_growth_factor = std::pow(2.0, 0.25);
  bool tail_warning_seen = false;

  void check_monotone() const {
    for (std::size_t i = 1; i < records.size(); ++i)
      if (!(records[i].t > records[i - 1].t))
        throw std::logic_error("trajectory time stamps must increase");
  }
};

struct StepConfig {
  double dt_max = 1e-3;
  double dt_min = 1e-12;
  double phase_cap = std::numbers::pi / 16.0; // max nonlinear phase per step
  bool adaptive = true;
};

enum class RunStatus { completed, resolution_exhausted, overflow };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::resolution_exhausted: return "resolution-exhausted";
    case RunStatus::overflow: return "overflow";
  }
  return "?";
}

// One splitting context per (grid, params): caches the weight r^-b and the
// operator reference used by every step.
class Stepper {
public:
  Stepper(const SpectralLaplacian& op, const ProblemParams& params)
      : op_(op), two_sigma_(2.0 * params.sigma.to_double()) {
    const RadialGrid& g = op.grid();
    const double b = params.b.to_double();
    rpow_.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
      rpow_[j] = std::pow(g.node(j), -b);
  }

  const SpectralLaplacian& op() const { return op_; }

  // Strang composition: half linear flow, full nonlinear phase rotation
  // (exact pointwise since the sub-flow conserves |u|), half linear flow.
  void step(EvolutionState& s, double dt) const {
    op_.linear_phase(s.field, 0.5 * dt);
    nonlinear_phase(s.field, dt);
    op_.linear_phase(s.field, 0.5 * dt);
    s.t += dt;
    s.dt = dt;
    ++s.step_index;
    if (!all_finite(s.field))
      throw std::overflow_error("field left the representable range "
                                "(unresolved blow-up)");
  }

  void nonlinear_phase(RadialField& u, double dt) const {
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double phase =
          dt * rpow_[j] * std::pow(std::abs(u[j]), two_sigma_);
      u[j] *= Complex(std::cos(phase), std::sin(phase));
    }
  }

  double max_nonlinear_rate(const RadialField& u) const {
    double m = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
      m = std::max(m, rpow_[j] * std::pow(std::abs(u[j]), two_sigma_));
    return m;
  }

private:
  const SpectralLaplacian& op_;
  double two_sigma_;
  std::vector<double> rpow_;
};

// dt = min(dt_max, cap / (1 + max_j r_j^-b |u_j|^{2 sigma})), clamped below
// by dt_min; keeps the per-step nonlinear phase under cfg.phase_cap. Returns
// nullopt when even dt_min cannot respect the cap (resolution exhausted).
inline std::optional<double> adapt_dt(const Stepper& stepper,
                                      const EvolutionState& s,
                                      const StepConfig& cfg) {
  const double rate = stepper.max_nonlinear_rate(s.field);
  double dt = std::min(cfg.dt_max, cfg.phase_cap / (1.0 + rate));
  if (dt < cfg.dt_min) {
    dt = cfg.dt_min;
    if (dt * rate > cfg.phase_cap) return std::nullopt;
  }
  return dt;
}

inline InvariantRecord invariants(const EvolutionState& s,
                                  const ProblemParams& params,
                                  const SpectralLaplacian& op) {
  auto ci = derive_indices(params);
  const double sg = params.sigma.to_double();
  InvariantRecord r;
  r.t = s.t;
  r.dt = s.dt;
  r.mass = mass(s.field);
  r.grad_norm = op.grad_norm(s.field);
  // nodal rule: the quadrature whose Hamiltonian the splitting conserves
  r.potential =
      nodal_weighted_integral(s.field, params.b.to_double(), 2.0 * sg + 2.0);
  r.energy = 0.5 * r.grad_norm * r.grad_norm - r.potential / (2.0 * sg + 2.0);
  r.hsc_norm = op.hs_norm(s.field, ci.s_c.to_double());
  r.variance = variance(s.field);
  r.sup_norm = sup_norm(s.field);
  return r;
}

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

struct InitialProfile {
  enum class Kind { gaussian, ground_state_scaled, file } kind = Kind::gaussian;
  double amplitude = 1.0; // gaussian A
  double width = 1.0;     // gaussian w
  double scale = 1.0;     // ground-state multiplier c
  std::string path;       // checkpoint path for kind::file
};

inline EvolutionState init_state(const InitialProfile& profile,
                                 const GridPtr& grid,
                                 const ProblemParams& params,
                                 const RadialField* ground_state = nullptr) {
  params.validate();
  EvolutionState s;
  s.t = 0.0;
  switch (profile.kind) {
    case InitialProfile::Kind::gaussian: {
      const double A = profile.amplitude, w = profile.width;
      if (!(w > 0.0)) throw std::invalid_argument("gaussian width must be positive");
      if (w / grid->spacing() < 16.0 && A != 0.0)
        throw std::invalid_argument("profile below resolution: fewer than 16 "
                                    "nodes across its width");
      s.field = make_field(grid, [&](double r) {
        return Complex(A * std::exp(-(r / w) * (r / w)));
      });
      break;
    }
    case InitialProfile::Kind::ground_state_scaled: {
      if (!ground_state)
        throw std::invalid_argument("ground-state profile requested but none provided");
      RadialField f = *ground_state;
      if (!f.grid->compatible(*grid)) {
        RadialField resampled{grid};
        for (std::size_t j = 0; j < grid->size(); ++j)
          resampled[j] = sample(f, grid->node(j));
        f = std::move(resampled);
      }
      for (auto& v : f.values) v *= profile.scale;
      s.field = std::move(f);
      break;
    }
    case InitialProfile::Kind::file: {
      Checkpoint cp = load_checkpoint(profile.path);
      if (!cp.field.grid->compatible(*grid))
        throw std::invalid_argument("checkpoint grid does not match the run grid");
      s.field = std::move(cp.field);
      s.t = cp.time;
      break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Evolution driver
// ---------------------------------------------------------------------------

struct EvolveOptions {
  StepConfig step;
  double record_interval = 0.0; // 0: record every step
  bool snapshots = true;
  double stop_grad_growth = 0.0; // end the run after this growth factor (0: off)
};

struct RunResult {
  RunStatus status = RunStatus::completed;
  EvolutionState final_state;
};

// Integrates to T_end (or to resolution exhaustion), recording invariants at
// the requested cadence and storing snapshots on geometric gradient growth.
inline RunResult evolve(EvolutionState state, double T_end,
                        const ProblemParams& params,
                        const SpectralLaplacian& op, const EvolveOptions& opts,
                        Trajectory& traj) {
  Stepper stepper(op, params);
  RunResult out;

  InvariantRecord rec = invariants(state, params, op);
  const double grad0 = rec.grad_norm;
  double next_record_t = state.t + opts.record_interval;
  double next_snapshot_grad = rec.grad_norm * traj.snapshot_growth_factor;
  traj.records.push_back(rec);
  if (opts.snapshots) traj.snapshots.push_back({state.t, state.field});
  traj.tail_warning_seen = traj.tail_warning_seen || tail_warning(state.field);

  while (state.t < T_end - 1e-15) {
    double dt = state.dt;
    if (opts.step.adaptive) {
      auto adapted = adapt_dt(stepper, state, opts.step);
      if (!adapted) {
        out.status = RunStatus::resolution_exhausted;
        break;
      }
      dt = *adapted;
    }
    dt = std::min(dt, T_end - state.t);
    try {
      stepper.step(state, dt);
    } catch (const std::overflow_error&) {
      out.status = RunStatus::overflow;
      break;
    }

    const bool due_record =
        opts.record_interval <= 0.0 || state.t >= next_record_t - 1e-15 ||
        state.t >= T_end - 1e-15;
    if (due_record) {
      rec = invariants(state, params, op);
      traj.records.push_back(rec);
      traj.tail_warning_seen =
          traj.tail_warning_seen || tail_warning(state.field);
      while (next_record_t <= state.t + 1e-15)
        next_record_t += std::max(opts.record_interval, 1e-300);
      if (opts.snapshots && rec.grad_norm >= next_snapshot_grad) {
        traj.snapshots.push_back({state.t, state.field});
        next_snapshot_grad = rec.grad_norm * traj.snapshot_growth_factor;
      }
      if (opts.stop_grad_growth > 0.0 &&
          rec.grad_norm >= opts.stop_grad_growth * grad0) {
        out.status = RunStatus::resolution_exhausted;
        break;
      }
    }
  }
  if (opts.snapshots &&
      (traj.snapshots.empty() || traj.snapshots.back().t < state.t))
    traj.snapshots.push_back({state.t, state.field});
  out.final_state = std::move(state);
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

// |d^2/dt^2 variance - (8 (2 sigma s_c + 2) E - 8 sigma s_c ||grad u||^2)|
// at interior stored times; requires uniformly spaced records.
inline std::vector<std::pair<double, double>> virial_residual(
    const Trajectory& traj, const ProblemParams& params) {
  const auto& rs = traj.records;
  if (rs.size() < 3)
    throw std::invalid_argument("virial check needs at least 3 records");
  const double dt0 = rs[1].t - rs[0].t;
  for (std::size_t i = 1; i < rs.size(); ++i) {
    if (std::abs((rs[i].t - rs[i - 1].t) - dt0) > 1e-9 * std::max(1.0, dt0))
      throw std::invalid_argument(
          "virial check requires uniform time stamps; resample the run");
  }
  auto ci = derive_indices(params);
  const double sg = params.sigma.to_double();
  const double sc = ci.s_c.to_double();
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 1; i + 1 < rs.size(); ++i) {
    const double second =
        (rs[i + 1].variance - 2.0 * rs[i].variance + rs[i - 1].variance) /
        (dt0 * dt0);
    const double rhs = 8.0 * (2.0 * sg * sc + 2.0) * rs[i].energy -
                       8.0 * sg * sc * rs[i].grad_norm * rs[i].grad_norm;
    out.emplace_back(rs[i].t, std::abs(second - rhs));
  }
  return out;
}

// Evolves u0 and its rescaling rho^{(2-b)/(2 sigma)} u0(rho x) on the
// commensurately scaled grid for matching step sequences, then compares.
// The discrete flows are exactly conjugate, so the mismatch is round-off.
inline double scaling_symmetry_check(const RadialField& u0, double rho,
                                     double T_end, double dt,
                                     const ProblemParams& params) {
  params.validate();
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const double kappa =
      (2.0 - params.b.to_double()) / (2.0 * params.sigma.to_double());

  SpectralLaplacian op_base(u0.grid);
  EvolutionState base;
  base.field = u0;
  Stepper st_base(op_base, params);
  const long steps = std::lround(T_end / dt);
  for (long k = 0; k < steps; ++k) st_base.step(base, dt);

  // u_rho(y_j, 0) with y_j = r_j / rho is a pure relabeling of u0
  RadialField scaled0 = relabel_scaled(u0, 1.0 / rho, std::pow(rho, kappa));
  SpectralLaplacian op_s(scaled0.grid);
  EvolutionState srun;
  srun.field = scaled0;
  Stepper st_s(op_s, params);
  const double dts = dt / (rho * rho);
  for (long k = 0; k < steps; ++k) st_s.step(srun, dts);

  // compare rho^{-kappa} u_rho(r_j/rho, T/rho^2) against u(r_j, T)
  double mismatch = 0.0;
  const double amp = std::pow(rho, -kappa);
  for (std::size_t j = 0; j < u0.size(); ++j)
    mismatch = std::max(mismatch,
                        std::abs(amp * srun.field[j] - base.field[j]));
  return mismatch;
}

struct BlowupDiagnostics {
  bool blowup_detected = false;
  double T_star = 0.0;
  double gamma_fit = 0.0;
  double fit_constant = 0.0;
  double fit_residual = 0.0; // rms of log-space residuals
  double window_t_lo = 0.0, window_t_hi = 0.0;
  std::vector<std::pair<double, double>> concentration; // (t, windowed mass)
  double concentration_alpha = 0.0;
  double threshold = 0.0; // ground-state amount the window is compared with
};

// Joint least-squares fit of log ||grad u|| = -gamma log(T*-t) + c over the
// last decade of growth, scanning T* with closed-form inner fits.
inline BlowupDiagnostics estimate_blowup(const Trajectory& traj) {
  BlowupDiagnostics d;
  const auto& rs = traj.records;
  if (rs.size() < 8) return d;
  double gmax = 0.0, gfirst = rs.front().grad_norm;
  for (const auto& r : rs) gmax = std::max(gmax, r.grad_norm);
  if (gmax < 10.0 * gfirst) return d; // bounded run: no-blow-up verdict

  std::vector<std::pair<double, double>> pts; // (t, log grad)
  for (const auto& r : rs)
    if (r.grad_norm >= 0.1 * gmax)
      pts.emplace_back(r.t, std::log(r.grad_norm));
  if (pts.size() < 4) return d;
  d.window_t_lo = pts.front().first;
  d.window_t_hi = pts.back().first;

  const double t_end = pts.back().first;
  const double span = t_end - pts.front().first;
  auto sse_of = [&](double Tstar, double* gamma_out, double* c_out) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(pts.size());
    for (auto& [t, lg] : pts) {
      double x = -std::log(Tstar - t);
      sx += x;
      sy += lg;
      sxx += x * x;
      sxy += x * lg;
    }
    double denom = n * sxx - sx * sx;
    double gamma = (n * sxy - sx * sy) / denom;
    double c = (sy - gamma * sx) / n;
    double sse = 0;
    for (auto& [t, lg] : pts) {
      double fit = -gamma * std::log(Tstar - t) + c;
      sse += (lg - fit) * (lg - fit);
    }
    if (gamma_out) *gamma_out = gamma;
    if (c_out) *c_out = c;
    return sse;
  };

  // golden-section scan for T* in (t_end, t_end + 2 span]
  double lo = t_end + 1e-12 * std::max(span, 1e-30);
  double hi = t_end + 2.0 * span;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b2 = hi;
  double x1 = b2 - gr * (b2 - a), x2 = a + gr * (b2 - a);
  double f1 = sse_of(x1, nullptr, nullptr), f2 = sse_of(x2, nullptr, nullptr);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      b2 = x2;
      x2 = x1;
      f2 = f1;
      x1 = b2 - gr * (b2 - a);
      f1 = sse_of(x1, nullptr, nullptr);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b2 - a);
      f2 = sse_of(x2, nullptr, nullptr);
    }
  }
  d.T_star = 0.5 * (a + b2);
  double gamma = 0, c = 0;
  double sse = sse_of(d.T_star, &gamma, &c);
  d.gamma_fit = gamma;
  d.fit_constant = c;
  d.fit_residual = std::sqrt(sse / static_cast<double>(pts.size()));
  d.blowup_detected = true;
  return d;
}

enum class ConcentrationKind { Lsigma_c, HsDot };

// C^2 bump: 1 inside, 0 outside, quintic-smooth transition of width lam/4
// centered on the window radius.
inline double smooth_cutoff(double r, double lam) {
  const double lo = lam * (1.0 - 0.125), hi = lam * (1.0 + 0.125);
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  const double s = (r - lo) / (hi - lo);
  return 1.0 - (10.0 * s * s * s - 15.0 * s * s * s * s +
                6.0 * s * s * s * s * s);
}

// Windowed critical mass along stored frames with lambda(t) = (T*-t)^alpha.
inline void concentration_series(const Trajectory& traj,
                                 const ProblemParams& params, double alpha,
                                 ConcentrationKind kind,
                                 BlowupDiagnostics& diag) {
  if (!diag.blowup_detected)
    throw std::invalid_argument("concentration window needs a fitted T*");
  if (!(alpha > 0.0 && alpha < 0.5))
    throw std::invalid_argument("window exponent must lie in (0, 1/2)");
  auto ci = derive_indices(params);
  const double sigma_c = ci.sigma_c.to_double();
  const double sc = ci.s_c.to_double();
  diag.concentration.clear();
  diag.concentration_alpha = alpha;
  for (const auto& snap : traj.snapshots) {
    if (snap.t >= diag.T_star) continue;
    const double lam = std::pow(diag.T_star - snap.t, alpha);
    if (kind == ConcentrationKind::Lsigma_c) {
      diag.concentration.emplace_back(
          snap.t, windowed_integral(snap.field, sigma_c, lam));
    } else {
      RadialField cut = snap.field;
      for (std::size_t j = 0; j < cut.size(); ++j)
        cut[j] *= smooth_cutoff(cut.grid->node(j), lam);
      SpectralLaplacian op(cut.grid);
      const double h = op.hs_norm(cut, sc);
      diag.concentration.emplace_back(snap.t, h * h);
    }
  }
}

// v(x) = rho^{(2-b)/(2 sigma)} u(rho x) with rho = ||grad u||^{-1/(1-s_c)},
// realized as an exact relabeling; ||grad v|| = 1 by construction.
inline RadialField rescaled_profile(const EvolutionState& s,
                                    const ProblemParams& params,
                                    const SpectralLaplacian& op) {
  auto ci = derive_indices(params);
  const double sc = ci.s_c.to_double();
  const double grad = op.grad_norm(s.field);
  if (!(grad > 0.0)) throw std::domain_error("zero gradient state");
  const double rho = std::pow(grad, -1.0 / (1.0 - sc));
  const double kappa =
      (2.0 - params.b.to_double()) / (2.0 * params.sigma.to_double());
  return relabel_scaled(s.field, 1.0 / rho, std::pow(rho, kappa));
}

struct ThresholdVerdict {
  bool respected = true;
  double crossed_at = 0.0;
  std::vector<std::pair<double, bool>> series; // (t, below threshold)
};

// Per-frame comparison of the critical norm against the ground-state
// threshold ||V||_{L^{sigma_c}}.
inline ThresholdVerdict global_criterion_monitor(const Trajectory& traj,
                                                 double threshold_norm) {
  ThresholdVerdict v;
  for (const auto& r : traj.records) {
    const bool below = r.hsc_norm < threshold_norm;
    v.series.emplace_back(r.t, below);
    if (!below && v.respected) {
      v.respected = false;
      v.crossed_at = r.t;
    }
  }
  return v;
}

// Trapezoid-in-time composition of spatial Lp norms over stored frames;
// q = infinity takes the max.
inline double mixed_space_time_norm(const Trajectory& traj,
                                    const ExtRational& q,
                                    const ExtRational& p) {
  const auto& fr = traj.snapshots;
  if (fr.empty()) throw std::invalid_argument("empty trajectory");
  const double pd = p.is_infinite() ? std::numeric_limits<double>::infinity()
                                    : p.finite_value().to_double();
  auto space_norm = [&](const RadialField& u) { return lp_norm(u, pd); };
  if (q.is_infinite()) {
    double m = 0.0;
    for (const auto& s : fr) m = std::max(m, space_norm(s.field));
    return m;
  }
  const double qd = q.finite_value().to_double();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < fr.size(); ++i) {
    const double f0 = std::pow(space_norm(fr[i].field), qd);
    const double f1 = std::pow(space_norm(fr[i + 1].field), qd);
    acc += 0.5 * (f0 + f1) * (fr[i + 1].t - fr[i].t);
  }
  return std::pow(acc, 1.0 / qd);
}

} // namespace inls
