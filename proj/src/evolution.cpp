#include "dpw/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dpw/errors.hpp"
#include "dpw/simd.hpp"

namespace dpw {

void StepConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("dt must be positive");
  if (!(t_end >= 0.0)) throw PreconditionError("t_end must be non-negative");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) throw PreconditionError("dealias fraction must lie in (0, 1]");
  if (record_every < 1) throw PreconditionError("record_every must be at least 1");
  if (filter_alpha < 0.0 || filter_order < 1) throw PreconditionError("invalid filter parameters");
}

double cfl_limit(const SampledField& u) {
  const double s = simd::active().max_abs(u.values.data(), u.values.size());
  return s > 0.0 ? u.grid.h() / (2.0 * s) : INFINITY;
}

Evolver::Evolver(const Grid& g, const StepConfig& cfg) : grid_(g), cfg_(cfg), sp_(g) {
  const int m = sp_.modes();
  const double kmax = sp_.k(m - 1);
  mask_.resize(m);
  dsym_.resize(m);
  filter_.resize(m);
  for (int j = 0; j < m; ++j) {
    const double k = sp_.k(j);
    mask_[j] = k <= cfg.dealias_fraction * kmax * (1.0 + 1e-12) ? 1.0 : 0.0;
    dsym_[j] = k * symbol_eval(k);
    filter_[j] = cfg.filter_alpha > 0.0 ? std::exp(-cfg.filter_alpha * std::pow(k / kmax, cfg.filter_order)) : 1.0;
  }
  uh_.resize(m);
  wh_.resize(m);
  ud_.resize(g.n);
  ux_.resize(g.n);
  w_.resize(g.n);
}

std::vector<double> Evolver::rhs(const std::vector<double>& u) {
  const int n = grid_.n;
  const int m = sp_.modes();
  const auto& kern = simd::active();
  const std::complex<double> I(0.0, 1.0);

  sp_.forward(u.data(), uh_.data());
  kern.scale_complex(reinterpret_cast<double*>(uh_.data()), mask_.data(), m);
  sp_.inverse(uh_.data(), ud_.data());
  for (int j = 0; j < m; ++j) wh_[j] = I * sp_.k(j) * uh_[j];
  wh_[m - 1] = 0.0;
  sp_.inverse(wh_.data(), ux_.data());

  std::vector<double> out(n);
  kern.mul(ud_.data(), ux_.data(), w_.data(), n);
  cvec advect(m);
  sp_.forward(w_.data(), advect.data());

  kern.mul(ud_.data(), ud_.data(), w_.data(), n);
  for (int i = 0; i < n; ++i) w_[i] *= 1.5;
  if (cfg_.op == Operator::quadrature) {
    const auto lq = apply_L_periodic_quadrature(SampledField(grid_, w_)).values;
    sp_.forward(lq.data(), wh_.data());
    for (int j = 0; j < m; ++j) wh_[j] = -advect[j] - I * sp_.k(j) * wh_[j];
  } else {
    sp_.forward(w_.data(), wh_.data());
    for (int j = 0; j < m; ++j) wh_[j] = -advect[j] - I * dsym_[j] * wh_[j];
  }
  wh_[m - 1] = 0.0;
  kern.scale_complex(reinterpret_cast<double*>(wh_.data()), mask_.data(), m);
  sp_.inverse(wh_.data(), out.data());
  return out;
}

std::vector<double> Evolver::step(const std::vector<double>& u, double dt) {
  const std::size_t n = u.size();
  const auto& kern = simd::active();
  std::vector<double> tmp(n);
  const auto k1 = rhs(u);
  tmp = u;
  kern.axpy(0.5 * dt, k1.data(), tmp.data(), n);
  const auto k2 = rhs(tmp);
  tmp = u;
  kern.axpy(0.5 * dt, k2.data(), tmp.data(), n);
  const auto k3 = rhs(tmp);
  tmp = u;
  kern.axpy(dt, k3.data(), tmp.data(), n);
  const auto k4 = rhs(tmp);
  std::vector<double> out(n);
  kern.rk4_combine(u.data(), k1.data(), k2.data(), k3.data(), k4.data(), dt, out.data(), n);
  if (cfg_.filter_alpha > 0.0) {
    sp_.forward(out.data(), uh_.data());
    kern.scale_complex(reinterpret_cast<double*>(uh_.data()), filter_.data(), sp_.modes());
    sp_.inverse(uh_.data(), out.data());
  }
  return out;
}

SampledField rhs(const SampledField& u, double dealias_fraction) {
  StepConfig cfg;
  cfg.dealias_fraction = dealias_fraction;
  Evolver ev(u.grid, cfg);
  return SampledField(u.grid, ev.rhs(u.values));
}

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// throws when the new state is non-finite, outruns the CFL bound or has an
// unresolved slope
void check_state(const std::vector<double>& next, const EvolutionState& last, double t_next, const StepConfig& cfg,
                 Spectral& sp) {
  const Grid& g = last.u.grid;
  if (!all_finite(next)) throw BlowUpError("non-finite values after step", last, t_next, INFINITY);
  const auto ux = sp.derivative(next, 1);
  const double slope = simd::active().max_abs(ux.data(), ux.size());
  const auto [lo, hi] = std::minmax_element(next.begin(), next.end());
  if (slope * g.h() > cfg.breaking_factor * (*hi - *lo))
    throw BlowUpError("slope exceeds grid resolution (wave breaking)", last, t_next, slope);
  const double sup = std::max(std::fabs(*lo), std::fabs(*hi));
  if (cfg.dt > g.h() / (2.0 * sup)) throw BlowUpError("CFL bound violated during the run", last, t_next, slope);
}

}  // namespace

EvolutionState step_rk4(const EvolutionState& s, const StepConfig& cfg) {
  cfg.validate();
  if (s.u.grid.kind != GridKind::periodic) throw UnsupportedGrid("time stepping needs a periodic grid");
  const double lim = cfl_limit(s.u);
  if (cfg.dt > lim) throw CflError("time step violates dt <= h/(2 sup|u|)", 0.9 * lim);
  Evolver ev(s.u.grid, cfg);
  auto next = ev.step(s.u.values, cfg.dt);
  check_state(next, s, s.t + cfg.dt, cfg, ev.spectral());
  return EvolutionState{s.t + cfg.dt, SampledField(s.u.grid, std::move(next))};
}

double crest_quadratic(const SampledField& u) {
  const Grid& g = u.grid;
  const int n = g.n;
  const auto& v = u.values;
  const int i = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  const bool periodic = g.kind == GridKind::periodic;
  if (!periodic && (i == 0 || i == n - 1)) return g.x(i);
  const double a = v[(i - 1 + n) % n], b = v[i], c = v[(i + 1) % n];
  const double den = a - 2.0 * b + c;
  const double off = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
  return g.x(i) + std::clamp(off, -0.5, 0.5) * g.h();
}

namespace {

double wrap_position(double x, double P) {
  const double L = 2.0 * P;
  double r = std::fmod(x + P, L);
  if (r < 0.0) r += L;
  return r - P;
}

}  // namespace

double crest_position(const SampledField& u, Spectral& sp) {
  const double q = crest_quadratic(u);
  const double h = u.grid.h();
  const cvec uh = sp.forward(u.values);
  double x = q;
  for (int it = 0; it < 30; ++it) {
    const double d1 = sp.eval(uh, x, 1);
    const double d2 = sp.eval(uh, x, 2);
    if (!(d2 < 0.0)) break;
    const double dx = d1 / d2;
    x -= dx;
    if (std::fabs(dx) < 1e-15 * std::max(1.0, std::fabs(x))) break;
  }
  if (!std::isfinite(x) || std::fabs(x - q) > h) x = q;
  return wrap_position(x, u.grid.half_length);
}

double l2_norm(const SampledField& u) {
  double s = 0.0;
  for (double v : u.values) s += v * v;
  return std::sqrt(s * u.grid.h());
}

double shape_error(const SampledField& u, const SampledField& u0, double shift, Spectral& sp) {
  const auto moved = sp.shift(u0.values, shift);
  return simd::active().max_abs_diff(u.values.data(), moved.data(), moved.size());
}

double symmetry_error(const SampledField& u, double lambda, Spectral& sp) {
  const auto r = sp.reflect(u.values, lambda);
  return simd::active().max_abs_diff(u.values.data(), r.data(), r.size());
}

double symmetry_persistence(const EvolutionState& s, double lambda) {
  Spectral sp(s.u.grid);
  return symmetry_error(s.u, lambda, sp);
}

EvolutionTrace simulate(const SampledField& initial, const StepConfig& cfg, const Observer& observer) {
  cfg.validate();
  const Grid& g = initial.grid;
  if (g.kind != GridKind::periodic) throw UnsupportedGrid("time stepping needs a periodic grid");
  const double lim = cfl_limit(initial);
  if (cfg.dt > lim) throw CflError("time step violates dt <= h/(2 sup|u|)", 0.9 * lim);

  Evolver ev(g, cfg);
  Spectral& sp = ev.spectral();
  const double P = g.half_length;
  const long steps = std::lround(cfg.t_end / cfg.dt);

  EvolutionTrace tr;
  EvolutionState state{0.0, initial};
  const double lambda0 = crest_position(initial, sp);
  double prev_raw = lambda0, unwrapped = lambda0;

  auto record = [&] {
    const double raw = crest_position(state.u, sp);
    double d = raw - prev_raw;
    d -= 2.0 * P * std::round(d / (2.0 * P));
    unwrapped += d;
    prev_raw = raw;
    TraceRow row;
    row.t = state.t;
    row.lambda = unwrapped;
    row.shape_error = shape_error(state.u, initial, unwrapped - lambda0, sp);
    row.symmetry_error = symmetry_error(state.u, raw, sp);
    row.l2_norm = l2_norm(state.u);
    tr.rows.push_back(row);
    if (observer) observer(state);
  };

  record();
  for (long s = 1; s <= steps; ++s) {
    auto next = ev.step(state.u.values, cfg.dt);
    const double t = s * cfg.dt;
    check_state(next, state, t, cfg, sp);
    state = EvolutionState{t, SampledField(g, std::move(next))};
    if (s % cfg.record_every == 0 || s == steps) record();
  }

  auto& rows = tr.rows;
  const std::size_t R = rows.size();
  for (std::size_t i = 0; i < R; ++i) {
    if (R < 2) break;
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == R ? R - 1 : i + 1;
    rows[i].lambda_dot = (rows[b].lambda - rows[a].lambda) / (rows[b].t - rows[a].t);
  }
  std::vector<double> v;
  for (std::size_t i = (R >= 3 ? 1 : 0); i < (R >= 3 ? R - 1 : R); ++i) v.push_back(rows[i].lambda_dot);
  if (!v.empty()) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    tr.speed_mean = mean;
    tr.speed_std = std::sqrt(var / v.size());
  }
  for (const auto& r : rows) {
    tr.max_shape_error = std::max(tr.max_shape_error, r.shape_error);
    tr.max_symmetry_error = std::max(tr.max_symmetry_error, r.symmetry_error);
  }
  tr.final_state = state;
  return tr;
}

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace) {
  os << "t,lambda,lambda_dot,shape_error,symmetry_error,l2_norm\n";
  char buf[512];
  for (const auto& r : trace.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.lambda, r.lambda_dot,
                  r.shape_error, r.symmetry_error, r.l2_norm);
    os << buf;
  }
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

ConstraintResiduals constraint_residuals(const EvolutionState& before, const EvolutionState& mid,
                                         const EvolutionState& after, double lambda_dot) {
  const double gap = after.t - before.t;
  if (!(gap != 0.0)) throw PreconditionError("constraint residuals need distinct times");
  const Grid& g = mid.u.grid;
  const int n = g.n;
  Spectral sp(g);
  const auto& u = mid.u.values;
  const auto ux = sp.derivative(u, 1);
  std::vector<double> a(n), b(n), uux(n);
  for (int i = 0; i < n; ++i) uux[i] = u[i] * ux[i];
  const auto luux = sp.apply_L(uux);
  for (int i = 0; i < n; ++i) {
    const double ut = (after.u.values[i] - before.u.values[i]) / gap;
    a[i] = ut + lambda_dot * ux[i];
    b[i] = -lambda_dot * ux[i] + uux[i] + 3.0 * luux[i];
  }
  const double un = norm2(u);
  return {norm2(a) / un, norm2(b) / un};
}

ConstraintResiduals constraint_residuals(const EvolutionState& before, const EvolutionState& after,
                                         double lambda_dot) {
  std::vector<double> m(before.u.values.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (before.u.values[i] + after.u.values[i]);
  const EvolutionState mid{0.5 * (before.t + after.t), SampledField(before.u.grid, std::move(m))};
  return constraint_residuals(before, mid, after, lambda_dot);
}

SampledField local_form_residual(const EvolutionState& prev, const EvolutionState& mid, const EvolutionState& next) {
  const double gap = next.t - prev.t;
  if (!(gap != 0.0)) throw PreconditionError("local form residual needs distinct times");
  const Grid& g = mid.u.grid;
  const int n = g.n;
  Spectral sp(g);
  const auto& u = mid.u.values;
  std::vector<double> ut(n);
  for (int i = 0; i < n; ++i) ut[i] = (next.u.values[i] - prev.u.values[i]) / gap;
  const auto uxxt = sp.derivative(ut, 2);
  const auto ux = sp.derivative(u, 1);
  const auto uxx = sp.derivative(u, 2);
  const auto uxxx = sp.derivative(u, 3);
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i)
    r[i] = ut[i] - uxxt[i] + 4.0 * u[i] * ux[i] - 3.0 * ux[i] * uxx[i] - u[i] * uxxx[i];
  return SampledField(g, std::move(r));
}

}  // namespace dpw
