#include "dpw/decay.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dpw/errors.hpp"

namespace dpw {

std::pair<double, double> default_tail_window(const Grid& g) {
  const double P = g.half_length;
  return {0.75 * P, P - 5.0 * g.h()};
}

DecayReport fit_tail_rate(const WaveProfile& p, std::optional<std::pair<double, double>> window) {
  const Grid& g = p.grid;
  const auto [lo, hi] = window.value_or(default_tail_window(g));
  if (!(lo >= 0.0 && lo < hi && hi <= g.half_length + 1e-12))
    throw PreconditionError("tail window must satisfy 0 <= lo < hi <= P");
  const double x0 = g.x(p.argmax());

  std::vector<double> d, lg, w;
  for (int i = 0; i < g.n; ++i) {
    const double s = std::fabs(g.x(i) - x0);
    if (s < lo || s > hi) continue;
    if (!(p.phi[i] > 0.0)) throw DomainError("profile is not positive on the tail window");
    d.push_back(s);
    lg.push_back(std::log(p.phi[i]));
    w.push_back(std::exp(s) * p.phi[i]);
  }
  if (d.size() < 3) throw PreconditionError("tail window holds fewer than three nodes");

  const double N = static_cast<double>(d.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    sx += d[i];
    sy += lg[i];
  }
  const double mx = sx / N, my = sy / N;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    sxx += (d[i] - mx) * (d[i] - mx);
    sxy += (d[i] - mx) * (lg[i] - my);
    syy += (lg[i] - my) * (lg[i] - my);
  }
  const double slope = sxy / sxx;

  DecayReport r;
  r.fitted_rate = -slope;
  r.fit_window = {lo, hi};
  r.fit_r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  r.points = static_cast<int>(d.size());
  r.weighted_sup = *std::max_element(w.begin(), w.end());
  const double mid = 0.5 * (lo + hi);
  double wmax = 0.0, wmin = INFINITY;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < mid) continue;
    wmax = std::max(wmax, w[i]);
    wmin = std::min(wmin, w[i]);
  }
  r.weighted_variation = wmax > 0.0 ? (wmax - wmin) / wmax : 0.0;
  return r;
}

namespace {

// log(1 + sigma e^a)
double log1p_exp(double sigma, double a) {
  const double t = std::log(sigma) + a;
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace

double conv_estimate_lhs(double l, double m, double sigma, double y) {
  if (!(l > 0.0 && l < m)) throw PreconditionError("convolution estimate needs 0 < l < m");
  if (!(sigma > 0.0)) throw PreconditionError("sigma must be positive");

  auto logg = [&](double x) {
    const double ax = std::fabs(x);
    return l * ax - m * log1p_exp(sigma, ax) - m * std::fabs(x - y);
  };
  const double a = std::min(0.0, y), b = std::max(0.0, y);
  double peak = std::max(logg(a), logg(b));
  for (int i = 1; i < 400; ++i) peak = std::max(peak, logg(a + (b - a) * i / 400.0));

  // outside [a, b] the integrand is monotone; stop below 1e-16 of the peak
  const double cut = peak - std::log(1e16);
  double dr = 1.0, dl = 1.0;
  while (logg(b + dr) >= cut) dr *= 2.0;
  while (logg(a - dl) >= cut) dl *= 2.0;

  auto f = [&](double x) { return std::exp(logg(x) - peak); };
  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  double s = gk::integrate(f, a - dl, a, 20, 1e-12) + gk::integrate(f, b, b + dr, 20, 1e-12);
  if (b > a) s += gk::integrate(f, a, b, 20, 1e-12);
  return s * std::exp(peak);
}

ConvEstimateCase ConvEstimateCase::make(double l, double m, double sigma, double y) {
  if (!(l > 0.0 && l < m)) throw PreconditionError("convolution estimate needs 0 < l < m");
  ConvEstimateCase c;
  c.l = l;
  c.m = m;
  c.sigma = sigma;
  c.y = y;
  c.B_paper = 1.0 / std::min(l, m - l);
  c.B_safe = 1.0 / l + 2.0 / (m - l) + 1.0 / (2.0 * m - l);
  c.lhs = conv_estimate_lhs(l, m, sigma, y);
  return c;
}

ConvVerdict conv_estimate_check(const ConvEstimateCase& c) {
  const double ay = std::fabs(c.y);
  const double base = std::exp(c.l * ay - c.m * log1p_exp(c.sigma, ay));
  ConvVerdict v;
  v.rhs_paper = c.B_paper * base;
  v.rhs_safe = c.B_safe * base;
  v.ok_paper = c.lhs <= v.rhs_paper;
  v.ok_safe = c.lhs <= v.rhs_safe;
  return v;
}

std::vector<ConvSweepRow> conv_sweep(const ConvSweepSpec& spec) {
  std::vector<ConvSweepRow> rows;
  for (double m : spec.m_values)
    for (double fr : spec.l_fractions)
      for (double s : spec.sigmas)
        for (double y : spec.ys) {
          ConvSweepRow r;
          r.c = ConvEstimateCase::make(fr * m, m, s, y);
          r.v = conv_estimate_check(r.c);
          rows.push_back(r);
        }
  return rows;
}

void write_conv_csv(std::ostream& os, const std::vector<ConvSweepRow>& rows) {
  os << "l,m,sigma,y,lhs,rhs_paper,rhs_safe,ok_paper,ok_safe\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s\n", r.c.l, r.c.m, r.c.sigma,
                  r.c.y, r.c.lhs, r.v.rhs_paper, r.v.rhs_safe, r.v.ok_paper ? "true" : "false",
                  r.v.ok_safe ? "true" : "false");
    os << buf;
  }
}

}  // namespace dpw
