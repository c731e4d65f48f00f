#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dpw/errors.hpp"
#include "dpw/evolution.hpp"
#include "dpw/steady.hpp"

using namespace dpw;

namespace {

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

const WaveProfile& smooth_wave() {
  static const WaveProfile p = [] {
    SolveConfig cfg;
    cfg.op = Operator::spectral;
    cfg.residual_tol = 1e-12;
    return solve_wave(Grid(GridKind::periodic, 256, 2.5), 1.0, std::nullopt, cfg).profile;
  }();
  return p;
}

EvolutionState traveling(const WaveProfile& p, double t) {
  Spectral sp(p.grid);
  return {t, SampledField(p.grid, sp.shift(p.phi, p.c * t))};
}

}  // namespace

TEST_CASE("right-hand side") {
  SUBCASE("constants are stationary") {
    const Grid g(GridKind::periodic, 64, 5.0);
    CHECK(sup_abs(rhs(SampledField::constant(g, 0.7)).values) <= 1e-14);
  }
  SUBCASE("steady profile is transported at speed c") {
    const WaveProfile& p = smooth_wave();
    Spectral sp(p.grid);
    const auto r = rhs(p.field()).values;
    const auto dx = sp.derivative(p.phi, 1);
    double m = 0.0;
    for (int i = 0; i < p.grid.n; ++i) m = std::max(m, std::fabs(r[i] + p.c * dx[i]));
    CHECK(m <= 1e-9);
  }
  SUBCASE("odd data gives an odd right-hand side") {
    const Grid g(GridKind::periodic, 128, M_PI);
    const auto u = SampledField::sample(g, [](double x) { return std::sin(x) * std::exp(std::cos(x)); });
    const auto r = rhs(u).values;
    std::vector<double> even(g.n);
    for (int i = 0; i < g.n; ++i) even[i] = 0.5 * (r[i] + r[(g.n - i) % g.n]);
    CHECK(norm2(even) <= 1e-10 * norm2(r));
  }
}

TEST_CASE("single steps and guards") {
  const Grid g(GridKind::periodic, 64, 5.0);
  StepConfig cfg;
  cfg.dt = 0.01;
  SUBCASE("constant state is unchanged") {
    const EvolutionState s{0.0, SampledField::constant(g, 1.25)};
    const EvolutionState n = step_rk4(s, cfg);
    CHECK(n.t == doctest::Approx(0.01));
    for (double v : n.u.values) CHECK(std::fabs(v - 1.25) <= 1e-14);
  }
  SUBCASE("invalid configuration") {
    StepConfig bad = cfg;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.dealias_fraction = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
  SUBCASE("CFL guard before stepping") {
    StepConfig big = cfg;
    big.dt = 1.0;
    big.t_end = 2.0;
    try {
      simulate(smooth_wave().field(), big);
      FAIL("expected a CFL error");
    } catch (const CflError& e) {
      CHECK(e.suggested_dt <= cfl_limit(smooth_wave().field()));
      CHECK(e.suggested_dt > 0.0);
    }
  }
  SUBCASE("line grids are rejected") {
    const Grid gl(GridKind::line, 64, 5.0);
    CHECK_THROWS_AS(simulate(SampledField::constant(gl, 1.0), cfg), UnsupportedGrid);
  }
}

TEST_CASE("wave breaking is reported as a structured outcome") {
  const Grid g(GridKind::periodic, 256, M_PI);
  StepConfig cfg;
  cfg.dt = 0.002;
  cfg.t_end = 3.0;
  try {
    simulate(SampledField::sample(g, [](double x) { return 3.0 * std::sin(x); }), cfg);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.t_fail > 0.0);
    CHECK(e.t_fail < 1.0);
    CHECK(e.last_valid.t < e.t_fail);
    CHECK(e.max_slope > 3.0);
    for (double v : e.last_valid.u.values) CHECK(std::isfinite(v));
  }
}

TEST_CASE("crest tracking and symmetry measures") {
  const WaveProfile& p = smooth_wave();
  Spectral sp(p.grid);
  CHECK(std::fabs(crest_position(p.field(), sp)) <= 1e-12);
  const SampledField moved(p.grid, sp.shift(p.phi, 0.3183));
  CHECK(crest_position(moved, sp) == doctest::Approx(0.3183).epsilon(1e-10));
  CHECK(std::fabs(crest_quadratic(moved) - 0.3183) <= p.grid.h());
  CHECK(symmetry_error(moved, 0.3183, sp) <= 1e-10);
  CHECK(symmetry_persistence(EvolutionState{0.0, p.field()}, 0.0) <= 1e-12);
  CHECK(shape_error(moved, p.field(), 0.3183, sp) <= 1e-12);
  const auto skew = SampledField::sample(p.grid, [](double x) { return std::exp(-x * x) * (1.0 + 0.2 * std::tanh(x)); });
  CHECK(symmetry_persistence(EvolutionState{0.0, skew}, crest_position(skew, sp)) > 1e-3);
}

TEST_CASE("steady profile travels with fixed shape") {
  const WaveProfile& p = smooth_wave();
  StepConfig cfg;
  cfg.dt = 0.0025;
  cfg.t_end = 2.0;
  cfg.record_every = 4;
  const EvolutionTrace tr = simulate(p.field(), cfg);
  CHECK(std::fabs(tr.speed_mean - p.c) <= 1e-3 * p.c);
  CHECK(tr.speed_std <= 1e-3 * p.c);
  CHECK(tr.max_shape_error <= 1e-4);
  CHECK(tr.max_symmetry_error <= 1e-5);
  for (std::size_t i = 1; i < tr.rows.size(); ++i) CHECK(tr.rows[i].t > tr.rows[i - 1].t);
  std::ostringstream os;
  write_trace_csv(os, tr);
  CHECK(os.str().rfind("t,lambda,lambda_dot,shape_error,symmetry_error,l2_norm\n", 0) == 0);
}

TEST_CASE("peakon evolution with the documented filter") {
  const Grid g(GridKind::periodic, 1024, 20.0);
  StepConfig cfg;
  cfg.dt = 0.005;
  cfg.t_end = 3.0;
  cfg.record_every = 10;
  cfg.filter_alpha = 36.0;
  cfg.filter_order = 8;
  cfg.op = Operator::quadrature;
  const EvolutionTrace tr = simulate(peakon(1.0, 0.0, g).field(), cfg);
  CHECK(std::fabs(tr.speed_mean - 1.0) <= 1e-2);
}

TEST_CASE("symmetric data that does not travel loses its symmetry") {
  const Grid g(GridKind::periodic, 512, 20.0);
  StepConfig cfg;
  cfg.dt = 0.005;
  cfg.t_end = 5.0;
  cfg.record_every = 10;
  const EvolutionTrace tr = simulate(SampledField::sample(g, [](double x) { return std::exp(-x * x); }), cfg);
  const bool constant_speed = tr.speed_std <= 1e-3 * std::fabs(tr.speed_mean);
  CHECK_FALSE(constant_speed);
  CHECK(tr.max_symmetry_error > 1e-6);
  if (constant_speed) CHECK(tr.max_shape_error <= 1e-4);
}

TEST_CASE("constraint residuals") {
  const WaveProfile& p = smooth_wave();
  const double d = 1e-3;
  SUBCASE("exact traveling data") {
    const auto r = constraint_residuals(traveling(p, -d), traveling(p, 0.0), traveling(p, d), p.c);
    CHECK(r.r1 <= 1e-4);
    CHECK(r.r2 <= 1e-4);
    const auto avg = constraint_residuals(traveling(p, -d), traveling(p, d), p.c);
    CHECK(avg.r1 <= 1e-4);
    CHECK(avg.r2 <= 1e-4);
  }
  SUBCASE("standing field") {
    const EvolutionState s{0.0, p.field()}, t{d, p.field()};
    const auto r = constraint_residuals(s, t, 0.0);
    CHECK(r.r1 == 0.0);
    Spectral sp(p.grid);
    const auto ux = sp.derivative(p.phi, 1);
    std::vector<double> uux(p.grid.n);
    for (int i = 0; i < p.grid.n; ++i) uux[i] = p.phi[i] * ux[i];
    const auto L = sp.apply_L(uux);
    std::vector<double> form(p.grid.n);
    for (int i = 0; i < p.grid.n; ++i) form[i] = uux[i] + 3.0 * L[i];
    CHECK(r.r2 == doctest::Approx(norm2(form) / norm2(p.phi)).epsilon(1e-10));
  }
  SUBCASE("two separating humps") {
    const Grid g(GridKind::periodic, 512, 20.0);
    auto at = [&](double t) {
      return EvolutionState{t, SampledField::sample(g, [t](double x) {
                              return std::exp(-(x - t) * (x - t)) + std::exp(-(x + t) * (x + t));
                            })};
    };
    const auto r = constraint_residuals(at(2.0 - d), at(2.0), at(2.0 + d), 0.0);
    CHECK(std::max(r.r1, r.r2) > 1e-2);
  }
  SUBCASE("zero time gap") {
    CHECK_THROWS_AS(constraint_residuals(traveling(p, 0.0), traveling(p, 0.0), p.c), std::invalid_argument);
  }
}

TEST_CASE("local form residual") {
  SUBCASE("constants") {
    const Grid g(GridKind::periodic, 64, 5.0);
    const EvolutionState a{0.0, SampledField::constant(g, 0.4)}, b{0.1, a.u}, c{0.2, a.u};
    CHECK(sup_abs(local_form_residual(a, b, c).values) == 0.0);
  }
  SUBCASE("converges on exact traveling data") {
    const WaveProfile& p = smooth_wave();
    double prev = INFINITY;
    for (double d : {2e-2, 1e-2, 5e-3, 2.5e-3}) {
      const auto r = local_form_residual(traveling(p, -d), traveling(p, 0.0), traveling(p, d));
      const double rel = norm2(r.values) / norm2(p.phi);
      CHECK(rel < prev / 3.0);
      prev = rel;
    }
    CHECK(prev <= 1e-3);
  }
}

TEST_CASE("fourth order in time") {
  const WaveProfile& p = smooth_wave();
  auto run = [&](double dt) {
    StepConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    cfg.record_every = 1000000;
    return simulate(p.field(), cfg).final_state.u.values;
  };
  const auto a = run(0.0125), b = run(0.00625), c = run(0.003125);
  std::vector<double> e1(a.size()), e2(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    e1[i] = a[i] - b[i];
    e2[i] = b[i] - c[i];
  }
  const double order = std::log2(norm2(e1) / norm2(e2));
  CHECK(order >= 3.8);
}
