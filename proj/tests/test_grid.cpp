#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dpw/errors.hpp"
#include "dpw/grid.hpp"

using namespace dpw;
using doctest::Approx;

namespace {

// (K * f)(x) by adaptive Gauss-Kronrod on pieces split at the kinks 0 and x
double kernel_conv_oracle(const std::function<double(double)>& f, double x) {
  using boost::math::quadrature::gauss_kronrod;
  auto g = [&](double y) { return 0.5 * std::exp(-std::fabs(x - y)) * f(y); };
  const double a = std::min(0.0, x), b = std::max(0.0, x);
  const double inf = std::numeric_limits<double>::infinity();
  double s = gauss_kronrod<double, 31>::integrate(g, -inf, a, 15, 1e-14);
  if (b > a) s += gauss_kronrod<double, 31>::integrate(g, a, b, 15, 1e-14);
  s += gauss_kronrod<double, 31>::integrate(g, b, inf, 15, 1e-14);
  return s;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double e2(double x) { return std::exp(-2.0 * std::fabs(x)); }

}  // namespace

TEST_CASE("grid invariants") {
  const Grid g(GridKind::line, 16, 4.0);
  CHECK(g.h() == 0.5);
  CHECK(g.x(0) == -4.0);
  CHECK(g.x(15) == 3.5);
  CHECK(g.center() == 8);
  CHECK(g.mirror(3) == 13);
  CHECK(g.mirror(0) == -1);
  CHECK_THROWS_AS(Grid(GridKind::line, 7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(GridKind::line, 6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(GridKind::periodic, 16, 0.0), std::invalid_argument);
  CHECK_THROWS(SampledField(g, std::vector<double>(15)));
  std::vector<double> bad(16, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS(SampledField(g, bad));
}

TEST_CASE("kernel and symbol closed forms") {
  CHECK(kernel_eval(0.0) == 0.5);
  CHECK(kernel_eval(2.0) == Approx(0.067668).epsilon(1e-5));
  CHECK(kernel_eval(-2.0) == kernel_eval(2.0));
  CHECK(symbol_eval(0.0) == 1.0);
  CHECK(symbol_eval(1.0) == 0.5);
  CHECK(symbol_eval(-3.0) == symbol_eval(3.0));
}

TEST_CASE("partial fraction oracle agrees with adaptive quadrature") {
  for (double x : {0.0, 0.3, 1.0, -2.5, 7.0}) {
    const double closed = 2.0 / 3.0 * std::exp(-std::fabs(x)) - 1.0 / 3.0 * e2(x);
    CHECK(kernel_conv_oracle(e2, x) == Approx(closed).epsilon(1e-12));
  }
  CHECK(kernel_conv_oracle(e2, 0.0) == Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("spectral L") {
  SUBCASE("constants are preserved") {
    const Grid g(GridKind::periodic, 64, 5.0);
    const auto r = apply_L_spectral(SampledField::constant(g, 2.75));
    for (double v : r.values) CHECK(std::fabs(v - 2.75) <= 1e-10);
  }
  SUBCASE("cos is an eigenfunction with eigenvalue 1/2") {
    const Grid g(GridKind::periodic, 64, M_PI);
    const auto f = SampledField::sample(g, [](double x) { return std::cos(x); });
    const auto r = apply_L_spectral(f);
    for (int i = 0; i < g.n; ++i) CHECK(std::fabs(r[i] - 0.5 * f[i]) <= 1e-14);
  }
  SUBCASE("e^{-2|x|} matches the quadrature oracle") {
    const Grid g(GridKind::periodic, 4096, 40.0);
    const auto r = apply_L_spectral(SampledField::sample(g, e2));
    // algebraic convergence at the kink: O(h^2)
    CHECK(std::fabs(r[g.center()] - 1.0 / 3.0) <= g.h() * g.h() / 4.0);
    for (int i : {g.center() + 100, g.center() - 307})
      CHECK(std::fabs(r[i] - kernel_conv_oracle(e2, g.x(i))) <= g.h() * g.h() / 4.0);
  }
  SUBCASE("line grid rejected") {
    const Grid g(GridKind::line, 16, 4.0);
    CHECK_THROWS_AS(apply_L_spectral(SampledField::constant(g, 1.0)), UnsupportedGrid);
  }
}

TEST_CASE("line L") {
  SUBCASE("constant on a wide domain is reproduced at the center") {
    const Grid g(GridKind::line, 2048, 60.0);
    const auto r = apply_L_line(SampledField::constant(g, 1.7));
    CHECK(r.truncation_warning);
    CHECK(r.value[g.center()] == Approx(1.7).epsilon(1e-12));
  }
  SUBCASE("e^{-2|x|} at the origin") {
    const Grid g(GridKind::line, 4096, 30.0);
    const auto f = SampledField::sample(g, e2);
    const auto plain = apply_L_line(f);
    CHECK_FALSE(plain.truncation_warning);
    CHECK(std::fabs(plain.value[g.center()] - 1.0 / 3.0) <= g.h() * g.h() / 4.0);
    const auto kinked = apply_L_line(f, {1e-10, {g.center()}});
    for (int i : {g.center(), g.center() + 10, g.center() - 500, 100})
      CHECK(std::fabs(kinked.value[i] - kernel_conv_oracle(e2, g.x(i))) <= 1e-8);
  }
  SUBCASE("agrees with the spectral path on a smooth decaying field") {
    const int n = 4096;
    const double P = 30.0;
    auto f = [](double x) { return 1.0 / std::pow(std::cosh(x), 2) + 0.5 / std::cosh(1.5 * (x - 2.0)); };
    const auto l = apply_L_line(SampledField::sample(Grid(GridKind::line, n, P), f));
    const auto s = apply_L_spectral(SampledField::sample(Grid(GridKind::periodic, n, P), f));
    double scale = 0.0;
    for (double v : s.values) scale = std::max(scale, std::fabs(v));
    CHECK(sup_diff(l.value.values, s.values) <= 1e-8 * scale);
  }
  SUBCASE("periodic quadrature agrees with spectral") {
    const Grid g(GridKind::periodic, 512, 4.0);
    const auto f = SampledField::sample(g, [](double x) { return std::exp(std::cos(M_PI * x / 4.0)); });
    CHECK(sup_diff(apply_L_periodic_quadrature(f).values, apply_L_spectral(f).values) <= 1e-8);
  }
  SUBCASE("dispatcher") {
    const Grid g(GridKind::line, 64, 10.0);
    CHECK_THROWS_AS(apply_L(SampledField::constant(g, 0.0), Operator::spectral), UnsupportedGrid);
    CHECK(operator_from_string(to_string(Operator::quadrature)) == Operator::quadrature);
    CHECK_THROWS(operator_from_string("fft"));
  }
}

TEST_CASE("O(n^2) reference convolution") {
  const Grid g(GridKind::line, 512, 20.0);
  SUBCASE("matches the fast line path on e^{-2|x|}") {
    const auto f = SampledField::sample(g, e2);
    const auto ref = convolve_quadrature(f, kernel_eval);
    CHECK(sup_diff(ref.values, apply_L_line(f).value.values) <= 1e-6);
  }
  SUBCASE("unit spike reproduces the kernel") {
    std::vector<double> v(g.n, 0.0);
    v[g.center()] = 1.0 / g.h();
    const auto r = convolve_quadrature(SampledField(g, v), kernel_eval);
    for (int i = 0; i < g.n; ++i) {
      const double d = std::fabs(g.x(i));
      if (d < 4.0 * g.h()) continue;
      CHECK(std::fabs(r[i] - kernel_eval(d)) <= 2.0 * g.h() * kernel_eval(d));
    }
  }
  SUBCASE("point evaluation agrees with the grid evaluation") {
    const auto f = SampledField::sample(g, [](double x) { return std::exp(-x * x); });
    const auto r = convolve_quadrature(f, kernel_eval);
    CHECK(convolve_quadrature_at(f, kernel_eval, g.x(300)) == Approx(r[300]).epsilon(1e-14));
  }
}

TEST_CASE("positivity of L on nonnegative fields") {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid gp(GridKind::periodic, 128, 8.0);
  const Grid gl(GridKind::line, 128, 8.0);
  double worst_p = 1.0, worst_l = 1.0, worst_q = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(128, 0.0);
    const int kind = trial % 3;
    for (int i = 0; i < 128; ++i) {
      const double r = u(rng);
      v[i] = kind == 0 ? r : (kind == 1 ? (r > 0.9 ? r : 0.0) : 0.0);
    }
    if (kind == 2) v[std::uniform_int_distribution<int>(0, 127)(rng)] = 1.0 + u(rng);
    const auto p = apply_L_spectral(SampledField(gp, v)).values;
    worst_p = std::min(worst_p, *std::min_element(p.begin(), p.end()));
    const auto l = apply_L_line(SampledField(gl, v)).value.values;
    worst_l = std::min(worst_l, *std::min_element(l.begin(), l.end()));
    const auto q = convolve_quadrature(SampledField(gl, v), kernel_eval).values;
    worst_q = std::min(worst_q, *std::min_element(q.begin(), q.end()));
  }
  CHECK(worst_p > 0.0);
  CHECK(worst_l > 0.0);
  CHECK(worst_q > 0.0);
}

TEST_CASE("reflection equivariance") {
  auto f = [](double x) { return std::exp(-(x - 1.0) * (x - 1.0)) + 0.3 * std::exp(-std::fabs(x + 2.0)); };
  SUBCASE("spectral, exact on the symmetric grid") {
    const Grid g(GridKind::periodic, 256, 10.0);
    const auto s = SampledField::sample(g, f);
    std::vector<double> rv(g.n);
    for (int i = 0; i < g.n; ++i) rv[i] = s[(g.n - i) % g.n];
    const auto a = apply_L_spectral(SampledField(g, rv));
    const auto b = apply_L_spectral(s);
    for (int i = 0; i < g.n; ++i) CHECK(std::fabs(a[i] - b[(g.n - i) % g.n]) <= 1e-10);
  }
  SUBCASE("line, within interpolation error") {
    const Grid g(GridKind::line, 2048, 20.0);
    const auto s = SampledField::sample(g, f);
    const auto r = SampledField::sample(g, [&](double x) { return f(-x); });
    const auto a = apply_L_line(r).value;
    const auto b = apply_L_line(s).value;
    for (int i = 1; i < g.n; ++i) CHECK(std::fabs(a[i] - b[g.mirror(i)]) <= 1e-8);
  }
}

TEST_CASE("quadrature of K against cos(xi x) reproduces the symbol") {
  const Grid g(GridKind::line, 32768, 40.0);
  for (double xi : {0.0, 0.5, 1.0, 3.0, 7.0, 10.0}) {
    CAPTURE(xi);
    const auto f = SampledField::sample(g, [xi](double x) { return std::cos(xi * x); });
    const auto r = apply_L_line(f, {1.0, {}}).value;
    CHECK(std::fabs(r[g.center()] - symbol_eval(xi)) <= 1e-6);
  }
}

TEST_CASE("operator matrix columns are L of unit vectors") {
  for (GridKind kind : {GridKind::periodic, GridKind::line}) {
    const Grid g(kind, 32, 6.0);
    for (Operator op : {Operator::quadrature, Operator::spectral}) {
      if (kind == GridKind::line && op == Operator::spectral) continue;
      const auto M = operator_matrix(g, op);
      for (int j : {0, 5, 16, 31}) {
        std::vector<double> e(g.n, 0.0);
        e[j] = 1.0;
        const auto col = apply_L(SampledField(g, e), op).values;
        for (int i = 0; i < g.n; ++i) CHECK(M[static_cast<std::size_t>(i) * g.n + j] == Approx(col[i]).epsilon(1e-12));
      }
    }
  }
}
