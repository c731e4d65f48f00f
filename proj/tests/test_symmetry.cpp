#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dpw/errors.hpp"
#include "dpw/symmetry.hpp"

using namespace dpw;

namespace {

WaveProfile make(const Grid& g, const std::function<double(double)>& f, double c = 1.0) {
  return WaveProfile{g, SampledField::sample(g, f).values, c, 0.0};
}

}  // namespace

TEST_CASE("reflection") {
  const Grid g(GridKind::line, 1000, 20.0);
  const WaveProfile p = peakon(1.0, 0.0, g);
  SUBCASE("even profile about zero is unchanged") {
    const Reflection r = reflect(p, 0.0);
    for (int i = 1; i < g.n; ++i) CHECK(std::fabs(r.profile.phi[i] - p.phi[i]) <= 1e-14);
    CHECK(r.outside[0] == 1);
  }
  SUBCASE("involution") {
    const WaveProfile s = make(g, [](double x) { return std::exp(-(x - 0.7) * (x - 0.7)); });
    const double lam = 0.3;
    const Reflection once = reflect(s, lam);
    const Reflection twice = reflect(once.profile, lam);
    for (int i = 0; i < g.n; ++i) {
      if (once.outside[i] || twice.outside[i]) continue;
      CHECK(std::fabs(twice.profile.phi[i] - s.phi[i]) <= 1e-12);
    }
  }
  SUBCASE("the crest moves to 2 lambda") {
    const Reflection r = reflect(p, 1.0);
    int best = 0;
    for (int i = 0; i < g.n; ++i)
      if (r.profile.phi[i] > r.profile.phi[best]) best = i;
    CHECK(g.x(best) == doctest::Approx(2.0));
    CHECK(r.profile.c == p.c);
  }
}

TEST_CASE("reflection sets") {
  const Grid g(GridKind::line, 1000, 20.0);
  const WaveProfile p = peakon(1.0, 0.0, g);
  CHECK(sigma_minus(p, 0.0).empty());
  CHECK(sigma_minus(p, -5.0).empty());
  const ReflectionSet s = sigma_minus(p, 0.1);
  REQUIRE(s.intervals.size() == 1);
  CHECK(s.intervals[0].first > 0.1);
  CHECK(s.intervals[0].first <= 0.1 + g.h());
  CHECK(s.measure > 0.0);
  std::ostringstream os;
  write_reflection_csv(os, {s});
  CHECK(os.str().rfind("lambda,interval_start,interval_end\n", 0) == 0);
}

TEST_CASE("moving plane scan") {
  const Grid g(GridKind::line, 2048, 25.0);
  SUBCASE("peakon") {
    const SymmetryReport r = moving_plane_scan(peakon(1.0, 0.0, g));
    CHECK(std::fabs(r.axis) <= g.h());
    CHECK(r.max_asymmetry <= 1e-10);
    CHECK(r.crest_count == 1);
    CHECK(r.monotone_left);
    CHECK(r.monotone_right);
    CHECK(r.empty_left_of_axis);
    CHECK(r.symmetric(1e-10));
  }
  SUBCASE("shifted peakon") {
    const SymmetryReport r = moving_plane_scan(peakon(1.0, 3.3, g));
    CHECK(std::fabs(r.axis - 3.3) <= g.h());
    CHECK(r.single_crest());
  }
  SUBCASE("tanh perturbation is asymmetric") {
    const WaveProfile p = make(g, [](double x) { return std::exp(-std::fabs(x)) * (1.0 + 0.1 * std::tanh(x)); });
    const SymmetryReport r = moving_plane_scan(p);
    CHECK(r.max_asymmetry > 1e-3);
    CHECK_FALSE(r.symmetric(1e-8));
  }
  SUBCASE("two humps") {
    const WaveProfile p = make(g, [](double x) { return std::exp(-std::fabs(x - 3.0)) + std::exp(-std::fabs(x + 3.0)); });
    const SymmetryReport r = moving_plane_scan(p);
    CHECK(r.crest_count == 2);
    CHECK_FALSE((r.monotone_left && r.monotone_right));
    CHECK_FALSE(r.single_crest());
  }
  SUBCASE("steady profile") {
    const Grid gp(GridKind::periodic, 512, 20.0);
    const SolveResult s = solve_wave(gp, 1.0, 0.6, SolveConfig{});
    const SymmetryReport r = moving_plane_scan(s.profile);
    CHECK(r.symmetric(100.0 * 1e-10));
    CHECK(r.empty_left_of_axis);
  }
  SUBCASE("constant data has no transition") {
    CHECK_THROWS_AS(moving_plane_scan(make(g, [](double) { return 1.0; })), AsymmetricProfileError);
  }
}

TEST_CASE("crest counting") {
  CHECK(crest_count({0, 1, 2, 1, 0}, 1e-6) == 1);
  CHECK(crest_count({0, 2, 1, 2, 0}, 1e-6) == 2);
  CHECK(crest_count({0, 2, 2 - 1e-9, 2, 0}, 1e-6) == 1);
}

TEST_CASE("kernel reflection inequalities") {
  SUBCASE("worked pair") {
    const auto r = kernel_reflection_inequalities(0.0, {{1.0, 1.0}});
    CHECK(r.pass());
    CHECK(r.min_difference == doctest::Approx(0.5 * (1.0 - std::exp(-2.0))).epsilon(1e-12));
    CHECK(r.min_bound_margin == doctest::Approx(2.0 - 0.5 * (1.0 - std::exp(-2.0))).epsilon(1e-12));
  }
  SUBCASE("difference vanishes as x approaches lambda") {
    const auto a = kernel_reflection_inequalities(1.0, {{1.0 + 1e-3, 2.0}});
    const auto b = kernel_reflection_inequalities(1.0, {{1.0 + 1e-6, 2.0}});
    CHECK(b.min_difference < a.min_difference);
    CHECK(b.min_difference < 1e-5);
    CHECK(b.pass());
  }
  SUBCASE("random pairs") {
    const auto pairs = random_pairs(-1.5, 10000, 0);
    CHECK(pairs.size() == 10000);
    const auto r = kernel_reflection_inequalities(-1.5, pairs);
    CHECK(r.identity_failures == 0);
    CHECK(r.positivity_failures == 0);
    CHECK(r.bound_failures == 0);
    CHECK(r.sharp_bound_failures == 0);
    CHECK(r.worst_identity_error <= 1e-12);
    CHECK(random_pairs(-1.5, 10, 0) == random_pairs(-1.5, 10, 0));
  }
  SUBCASE("pairs left of the axis are rejected") {
    CHECK_THROWS_AS(kernel_reflection_inequalities(0.0, {{-1.0, 1.0}}), PreconditionError);
  }
}

TEST_CASE("crest exponent") {
  SUBCASE("peakon") {
    const Grid g(GridKind::line, 4096, 30.0);
    const CrestFit f = fit_crest_exponent(peakon(1.0, 0.0, g), 0.1);
    CHECK(f.alpha >= 0.98);
    CHECK(f.alpha <= 1.02);
    CHECK(f.C1 >= 0.9);
    CHECK(f.C2 <= 1.0);
    CHECK(f.C1 <= f.C2);
  }
  SUBCASE("square root cusp") {
    const Grid g(GridKind::line, 4096, 30.0);
    const CrestFit f = fit_crest_exponent(make(g, [](double x) { return 1.0 - std::sqrt(std::fabs(x)); }), 0.1);
    CHECK(f.alpha == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("smooth low profile is outside the regime") {
    const Grid g(GridKind::line, 256, 10.0);
    CHECK_THROWS_AS(fit_crest_exponent(make(g, [](double x) { return 0.5 * std::exp(-x * x); }), 0.1),
                    PreconditionError);
  }
}

TEST_CASE("touching check") {
  const Grid g(GridKind::line, 1000, 20.0);
  const WaveProfile p = peakon(1.0, 0.0, g);
  SUBCASE("equal profiles") {
    CHECK(touching_check(p, p, 0.0).verdict == TouchingVerdict::identical);
  }
  SUBCASE("peakon above its reflection about -2") {
    const WaveProfile sub = reflect(p, -2.0).profile;
    const TouchingReport r = touching_check(p, sub, -2.0);
    CHECK(r.verdict == TouchingVerdict::strictly_above);
    CHECK(r.min_gap > 0.0);
    CHECK(r.max_sum_over_2c < 1.0);
  }
  SUBCASE("ordering violations are precondition errors") {
    const WaveProfile sub = reflect(p, -2.0).profile;
    CHECK_THROWS_AS(touching_check(sub, p, -2.0), PreconditionError);
  }
}
