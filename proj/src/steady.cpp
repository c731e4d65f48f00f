#include "dpw/steady.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "dpw/errors.hpp"
#include "dpw/simd.hpp"

namespace dpw {

double WaveProfile::sup() const { return *std::max_element(phi.begin(), phi.end()); }

int WaveProfile::argmax() const {
  return static_cast<int>(std::max_element(phi.begin(), phi.end()) - phi.begin());
}

namespace {

std::vector<int> crest_breaks(const WaveProfile& p, bool on) {
  if (!on) return {};
  return {p.argmax()};
}

std::vector<double> residual_values(const Grid& g, const std::vector<double>& phi, double c, double a,
                                    Operator op, const std::vector<int>& breaks) {
  const std::size_t n = phi.size();
  const auto& k = simd::active();
  std::vector<double> sq(n), out(n);
  k.mul(phi.data(), phi.data(), sq.data(), n);
  const auto lsq = apply_L(SampledField(g, std::move(sq)), op, breaks);
  k.steady_residual(phi.data(), lsq.values.data(), c, a, out.data(), n);
  return out;
}

double max_abs(const std::vector<double>& v) { return simd::active().max_abs(v.data(), v.size()); }

// Even-symmetric reduction: unknown j < n/2 is the pair {n/2 + j, n/2 - j},
// unknown n/2 is node 0 (self-mirror on periodic grids, unpaired on lines).
struct Reduction {
  int m = 0;
  std::vector<int> rep;
  std::vector<int> orbit_of;

  static Reduction even(const Grid& g) {
    Reduction r;
    const int n = g.n, h = n / 2;
    r.m = h + 1;
    r.rep.resize(r.m);
    r.orbit_of.resize(n);
    for (int j = 0; j < h; ++j) r.rep[j] = h + j;
    r.rep[h] = 0;
    for (int i = 0; i < n; ++i) r.orbit_of[i] = i >= h ? i - h : (i == 0 ? h : h - i);
    return r;
  }

  static Reduction identity(const Grid& g) {
    Reduction r;
    r.m = g.n;
    r.rep.resize(g.n);
    r.orbit_of.resize(g.n);
    for (int i = 0; i < g.n; ++i) r.rep[i] = r.orbit_of[i] = i;
    return r;
  }

  std::vector<double> expand(const Eigen::VectorXd& u) const {
    std::vector<double> phi(orbit_of.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = u[orbit_of[i]];
    return phi;
  }

  Eigen::VectorXd reduce(const std::vector<double>& phi) const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
    std::vector<int> count(m, 0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      u[orbit_of[i]] += phi[i];
      ++count[orbit_of[i]];
    }
    for (int j = 0; j < m; ++j) u[j] /= count[j];
    return u;
  }
};

enum class Mode { fixed_speed, free_speed, pinned };

}  // namespace

SampledField residual(const WaveProfile& p, const ResidualOptions& opt) {
  return SampledField(p.grid, residual_values(p.grid, p.phi, p.c, p.a, opt.op, crest_breaks(p, opt.crest_break)));
}

double residual_norm(const WaveProfile& p, const ResidualOptions& opt) { return max_abs(residual(p, opt).values); }

void SolveConfig::validate(double c) const {
  if (!(residual_tol > 0.0)) throw PreconditionError("residual_tol must be positive");
  if (max_iter < 0) throw PreconditionError("max_iter must be non-negative");
  if (!(damping > 0.0 && damping <= 1.0)) throw PreconditionError("damping must lie in (0, 1]");
  if (!(c > 0.0)) throw PreconditionError("wave speed must be positive");
  if (amplitude_mu && !(*amplitude_mu > 0.0 && *amplitude_mu < 2.0 * c))
    throw PreconditionError("amplitude must lie in (0, 2c)");
}

SolveResult solve_newton(const WaveProfile& initial, const SolveConfig& cfg) {
  cfg.validate(initial.c);
  const Grid& g = initial.grid;
  const int n = g.n;
  const int i0 = g.center();
  const Mode mode = !cfg.amplitude_mu ? Mode::fixed_speed : (cfg.free_speed ? Mode::free_speed : Mode::pinned);
  const double mu = cfg.amplitude_mu.value_or(0.0);
  const Reduction red = cfg.pin_even ? Reduction::even(g) : Reduction::identity(g);
  const int m = red.m;
  const int crest = red.orbit_of[i0];
  const std::vector<int> breaks = cfg.crest_break ? std::vector<int>{i0} : std::vector<int>{};
  const bool peaked_target = mode == Mode::pinned && mu >= initial.c * (1.0 - 1e-12);
  const bool guard = cfg.branch_guard && !peaked_target;

  // reduced operator: Mr(a, b) = sum over the orbit of b of M(rep a, i)
  const std::vector<double> M = operator_matrix(g, cfg.op, breaks);
  Eigen::MatrixXd Mr = Eigen::MatrixXd::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    const double* row = M.data() + static_cast<std::size_t>(red.rep[a]) * n;
    for (int i = 0; i < n; ++i) Mr(a, red.orbit_of[i]) += row[i];
  }

  Eigen::VectorXd u = red.reduce(initial.phi);
  double c = initial.c;
  const double a = initial.a;

  struct Eval {
    std::vector<double> full;
    Eigen::VectorXd sys;
    double norm;
  };
  auto evaluate = [&](const Eigen::VectorXd& uu, double cc) {
    Eval e;
    e.full = residual_values(g, red.expand(uu), cc, a, cfg.op, breaks);
    const int rows = mode == Mode::free_speed ? m + 1 : m;
    e.sys.resize(rows);
    for (int r = 0; r < m; ++r) e.sys[r] = e.full[red.rep[r]];
    if (mode == Mode::free_speed) e.sys[m] = uu[crest] - mu;
    if (mode == Mode::pinned) e.sys[crest] = uu[crest] - mu;
    e.norm = e.sys.cwiseAbs().maxCoeff();
    return e;
  };

  SolveResult res;
  Eval cur = evaluate(u, c);
  for (int it = 0;; ++it) {
    res.history.push_back(cur.norm);
    if (cur.norm <= cfg.residual_tol) {
      res.iterations = it;
      break;
    }
    if (it >= cfg.max_iter)
      throw NonconvergenceError("Newton iteration limit reached", cur.norm, it);

    const int cols = mode == Mode::free_speed ? m + 1 : m;
    Eigen::MatrixXd J(cur.sys.size(), cols);
    J.leftCols(m) = -2.0 * Mr * u.asDiagonal();
    for (int r = 0; r < m; ++r) J(r, r) += (2.0 * c - 2.0 * u[r]) / 3.0;
    if (mode == Mode::free_speed) {
      J.col(m).head(m) = 2.0 * u / 3.0;
      J.row(m).setZero();
      J(m, crest) = 1.0;
    }
    if (mode == Mode::pinned) {
      J.row(crest).setZero();
      J(crest, crest) = 1.0;
    }

    Eigen::VectorXd d;
    if (cfg.pin_even) {
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
      const double rc = lu.rcond();
      if (!(rc > 1e-15)) throw SingularJacobianError("Newton Jacobian is numerically singular", rc, it);
      d = lu.solve(-cur.sys);
    } else {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
      cod.setThreshold(1e-13);
      if (cod.rank() < std::min<Eigen::Index>(J.rows(), J.cols()) - 1)
        throw SingularJacobianError("Newton Jacobian is numerically singular", 0.0, it);
      d = cod.solve(-cur.sys);
    }
    if (!d.allFinite()) throw SingularJacobianError("Newton step is not finite", 0.0, it);

    double t = cfg.damping;
    bool accepted = false;
    for (; t >= 1e-8; t *= 0.5) {
      const Eigen::VectorXd un = u + t * d.head(m);
      const double cn = mode == Mode::free_speed ? c + t * d[m] : c;
      if (!(cn > 0.0)) continue;
      if (guard && un.maxCoeff() >= cn) continue;
      Eval trial = evaluate(un, cn);
      if (trial.norm < (1.0 - 1e-4 * t) * cur.norm) {
        u = un;
        c = cn;
        cur = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw NonconvergenceError("Newton line search stalled", cur.norm, it);
  }

  res.profile = WaveProfile{g, red.expand(u), c, a};
  res.residual_norm = max_abs(cur.full);
  return res;
}

SolveResult solve_petviashvili(const WaveProfile& initial, const SolveConfig& cfg) {
  cfg.validate(initial.c);
  if (initial.a != 0.0) throw PreconditionError("Petviashvili iteration assumes a = 0");
  const Grid& g = initial.grid;
  const int n = g.n;
  const double c = initial.c;
  const Reduction red = Reduction::even(g);
  const auto& k = simd::active();

  std::vector<double> phi = cfg.pin_even ? red.expand(red.reduce(initial.phi)) : initial.phi;
  std::vector<double> sq(n), nl(n), r(n);
  SolveResult res;
  for (int it = 0;; ++it) {
    k.mul(phi.data(), phi.data(), sq.data(), n);
    const auto lsq = apply_L(SampledField(g, sq), cfg.op).values;
    k.steady_residual(phi.data(), lsq.data(), c, 0.0, r.data(), n);
    const double norm = k.max_abs(r.data(), n);
    res.history.push_back(norm);
    if (norm <= cfg.residual_tol) {
      res.iterations = it;
      res.residual_norm = norm;
      break;
    }
    if (it >= cfg.max_iter) throw NonconvergenceError("Petviashvili iteration limit reached", norm, it);

    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      nl[i] = lsq[i] + sq[i] / 3.0;
      num += phi[i] * (2.0 * c / 3.0) * phi[i];
      den += phi[i] * nl[i];
    }
    const double factor = num / den;
    if (!(factor > 0.1 && factor < 10.0))
      throw DivergenceError("Petviashvili stabilizing factor left (0.1, 10)", factor, it);
    const double s = std::pow(factor, cfg.gamma) * 3.0 / (2.0 * c);
    for (int i = 0; i < n; ++i) phi[i] = s * nl[i];
    if (cfg.pin_even) phi = red.expand(red.reduce(phi));
  }
  res.profile = WaveProfile{g, std::move(phi), c, 0.0};
  return res;
}

WaveProfile initial_guess(const Grid& g, double c, std::optional<double> mu, const SolveConfig& cfg) {
  const double P = g.half_length;
  if (g.kind == GridKind::line) {
    const double amp = mu.value_or(0.9 * c);
    return WaveProfile{g, SampledField::sample(g, [&](double x) { return amp * std::exp(-std::fabs(x)); }).values, c, 0.0};
  }
  auto shape = [&](double x) {
    const double ax = std::fabs(x);
    return (std::exp(-ax) + std::exp(ax - 2.0 * P)) / (1.0 + std::exp(-2.0 * P));
  };
  WaveProfile guess{g, SampledField::sample(g, [&](double x) { return 0.9 * c * shape(x); }).values, c, 0.0};
  SolveConfig fixed = cfg;
  fixed.amplitude_mu.reset();
  fixed.pin_even = true;
  fixed.crest_break = false;
  WaveProfile w = solve_newton(guess, fixed).profile;
  const double hi = w.sup();
  const double lo = *std::min_element(w.phi.begin(), w.phi.end());
  if (hi - lo <= 1e-6 * hi)
    throw NonconvergenceError("only the constant state exists at this period", 0.0, 0);
  if (mu) {
    const double s = *mu / hi;
    for (double& v : w.phi) v *= s;
    w.c *= s;
  }
  return w;
}

SolveResult solve_wave(const Grid& g, double c, std::optional<double> mu, const SolveConfig& cfg) {
  WaveProfile guess = initial_guess(g, c, mu, cfg);
  SolveConfig run = cfg;
  run.amplitude_mu = mu;
  run.free_speed = true;
  return solve_newton(guess, run);
}

ContinuationPath continue_in_height(const Grid& g, double c, double mu_from, double mu_to, int steps,
                                    const SolveConfig& cfg, const ContinuationOptions& opt) {
  if (!(mu_from > 0.0 && mu_from <= mu_to)) throw PreconditionError("need 0 < mu_from <= mu_to");
  if (mu_to > c * (1.0 - opt.eps_peak)) throw PreconditionError("mu_to exceeds c(1 - eps_peak)");
  if (steps < 1) throw PreconditionError("steps must be positive");
  if (mu_from == mu_to) steps = 1;

  ContinuationPath path;
  for (int k = 0; k < steps; ++k) {
    const double mu = steps == 1 ? mu_from : mu_from + (mu_to - mu_from) * k / (steps - 1);
    try {
      SolveResult r;
      if (path.entries.empty()) {
        r = solve_wave(g, c, mu, cfg);
      } else {
        SolveConfig run = cfg;
        run.amplitude_mu = mu;
        run.free_speed = true;
        WaveProfile pred = path.entries.back().profile;
        const double s = mu / pred.sup();
        for (double& v : pred.phi) v *= s;
        pred.c *= s;
        r = solve_newton(pred, run);
      }
      const BoundsReport b = bounds_check(r.profile, 10.0 * cfg.residual_tol);
      if (!b.pass()) throw NonconvergenceError("converged profile is not admissible", r.residual_norm, r.iterations);
      if (!path.entries.empty() && !(b.sup > path.entries.back().profile.sup()))
        throw NonconvergenceError("crest height did not increase", r.residual_norm, r.iterations);
      PathEntry e;
      e.mu = mu;
      e.iterations = r.iterations;
      e.residual_norm = r.residual_norm;
      e.crest_slope = crest_slope(r.profile);
      e.crest_curvature = crest_curvature(r.profile);
      e.profile = std::move(r.profile);
      path.entries.push_back(std::move(e));
    } catch (const std::exception& ex) {
      path.truncated = true;
      path.failed_index = k;
      path.failure = ex.what();
      break;
    }
  }
  return path;
}

WaveProfile peakon(double c, double lambda0, const Grid& g) {
  if (!(c > 0.0)) throw PreconditionError("peakon speed must be positive");
  return WaveProfile{g, SampledField::sample(g, [&](double x) { return c * std::exp(-std::fabs(x - lambda0)); }).values, c, 0.0};
}

namespace {

double at(const WaveProfile& p, int i) {
  const int n = p.grid.n;
  if (p.grid.kind == GridKind::periodic) return p.phi[((i % n) + n) % n];
  return p.phi[std::clamp(i, 0, n - 1)];
}

}  // namespace

double crest_curvature(const WaveProfile& p) {
  const int i = p.argmax();
  const double h = p.grid.h();
  return std::fabs(at(p, i - 1) - 2.0 * at(p, i) + at(p, i + 1)) / (h * h);
}

double crest_slope(const WaveProfile& p) {
  const int i = p.argmax();
  const double h = p.grid.h();
  return std::max(std::fabs(at(p, i) - at(p, i - 1)), std::fabs(at(p, i + 1) - at(p, i))) / h;
}

double asymptotic_constant(const WaveProfile& p, Operator op) {
  const int n = p.grid.n;
  WaveProfile q = p;
  q.a = 0.0;
  const auto r = residual(q, {op, false}).values;
  const int cnt = std::max(1, n / 10);
  double s = 0.0;
  for (int i = 0; i < cnt; ++i) s += r[i] + r[n - 1 - i];
  return s / (2.0 * cnt);
}

BoundsReport bounds_check(const WaveProfile& p, double tol) {
  BoundsReport b;
  const int n = p.grid.n;
  const int lo = p.grid.kind == GridKind::line ? 1 : 0;
  const int hi = p.grid.kind == GridKind::line ? n - 1 : n;
  b.min = *std::min_element(p.phi.begin() + lo, p.phi.begin() + hi);
  const int i = p.argmax();
  b.sup = p.phi[i];
  b.argmax_x = p.grid.x(i);
  b.positive = b.min > 0.0;
  b.below_two_c = b.sup < 2.0 * p.c;
  b.below_c = b.sup <= p.c + tol;
  return b;
}

}  // namespace dpw
