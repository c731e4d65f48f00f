#include "dpw/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "dpw/errors.hpp"
#include "dpw/simd.hpp"

namespace dpw {

Reflection reflect(const WaveProfile& p, double lambda) {
  const Grid& g = p.grid;
  const int n = g.n;
  const double h = g.h();
  const bool periodic = g.kind == GridKind::periodic;
  // highest admissible fractional index: x = P on periodic grids, the last node otherwise
  const double smax = periodic ? n : n - 1;
  Reflection r{p, std::vector<std::uint8_t>(n, 0)};
  for (int i = 0; i < n; ++i) {
    const double y = 2.0 * lambda - g.x(i);
    double s = (y + g.half_length) / h;
    const double sr = std::round(s);
    if (std::fabs(s - sr) < 1e-9) s = sr;
    if (s < 0.0 || s > smax) {
      r.outside[i] = 1;
      if (!periodic) {
        r.profile.phi[i] = 0.0;
        continue;
      }
      s = std::fmod(s, double(n));
      if (s < 0.0) s += n;
    }
    const int j = std::min(static_cast<int>(std::floor(s)), n - 1);
    const double f = s - j;
    const double a = p.phi[j];
    const double b = f == 0.0 ? a : p.phi[periodic ? (j + 1) % n : std::min(j + 1, n - 1)];
    r.profile.phi[i] = f == 0.0 ? a : (1.0 - f) * a + f * b;
  }
  return r;
}

ReflectionSet sigma_minus(const WaveProfile& p, double lambda, double tol_set) {
  const Grid& g = p.grid;
  const Reflection r = reflect(p, lambda);
  ReflectionSet set;
  set.lambda = lambda;
  const double h = g.h();
  int start = -1, last = -1;
  auto close = [&] {
    if (start < 0) return;
    set.intervals.emplace_back(g.x(start), g.x(last));
    set.measure += (last - start + 1) * h;
    start = -1;
  };
  for (int i = 0; i < g.n; ++i) {
    const bool in = g.x(i) > lambda && !r.outside[i] && p.phi[i] < r.profile.phi[i] - tol_set;
    if (in) {
      if (start < 0) start = i;
      last = i;
    } else {
      close();
    }
  }
  close();
  return set;
}

void write_reflection_csv(std::ostream& os, const std::vector<ReflectionSet>& sets) {
  os << "lambda,interval_start,interval_end\n";
  char buf[256];
  for (const auto& s : sets)
    for (const auto& [a, b] : s.intervals) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.lambda, a, b);
      os << buf;
    }
}

double max_asymmetry(const WaveProfile& p, double lambda) {
  const Reflection r = reflect(p, lambda);
  double m = 0.0;
  for (int i = 0; i < p.grid.n; ++i)
    if (!r.outside[i]) m = std::max(m, std::fabs(p.phi[i] - r.profile.phi[i]));
  return m;
}

int crest_count(const std::vector<double>& v, double hysteresis) {
  if (v.empty()) return 0;
  int count = 0;
  bool rising = true;
  double ref = v[0];
  for (double x : v) {
    if (rising) {
      ref = std::max(ref, x);
      if (x < ref - hysteresis) {
        ++count;
        rising = false;
        ref = x;
      }
    } else {
      ref = std::min(ref, x);
      if (x > ref + hysteresis) {
        rising = true;
        ref = x;
      }
    }
  }
  return rising ? count + 1 : count;
}

SymmetryReport moving_plane_scan(const WaveProfile& p, const ScanOptions& opt) {
  const Grid& g = p.grid;
  const int n = g.n;
  const std::vector<double>& v = p.phi;
  const double scale = simd::active().max_abs(v.data(), n);
  const double hyst = opt.crest_hysteresis * scale;

  // first local maximum, read with hysteresis so tail noise is not a crest
  int stop = n - 1;
  {
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (v[i] > v[best]) best = i;
      if (v[i] < v[best] - hyst) {
        stop = best;
        break;
      }
    }
  }

  std::vector<std::uint8_t> mask(n);
  int first_nonempty = -1;
  SymmetryReport rep;
  for (int c = 1; c <= std::min(stop + 1, n - 2); ++c) {
    const int count = std::min(n - 1 - c, c);
    simd::active().below_reflected(v.data(), c, count, opt.tol_set, mask.data());
    ++rep.scanned_axes;
    if (std::any_of(mask.begin(), mask.begin() + count, [](std::uint8_t b) { return b != 0; })) {
      first_nonempty = c;
      break;
    }
  }
  if (first_nonempty < 0)
    throw AsymmetricProfileError("moving-plane scan found no transition before the first crest");

  const int axis_node = first_nonempty - 1;
  rep.empty_left_of_axis = true;
  rep.axis_node = g.x(axis_node);

  // golden-section refinement of the axis on [x - h, x + h]
  const double h = g.h();
  double a = rep.axis_node - h, b = rep.axis_node + h;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = max_asymmetry(p, x1), f2 = max_asymmetry(p, x2);
  for (int it = 0; it < 60 && b - a > 1e-12 * std::max(1.0, g.half_length); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = max_asymmetry(p, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = max_asymmetry(p, x2);
    }
  }
  const double refined = f1 < f2 ? x1 : x2;
  const double node_asym = max_asymmetry(p, rep.axis_node);
  const double refined_asym = std::min(f1, f2);
  if (refined_asym < node_asym) {
    rep.axis = refined;
    rep.max_asymmetry = refined_asym;
  } else {
    rep.axis = rep.axis_node;
    rep.max_asymmetry = node_asym;
  }

  rep.crest_count = crest_count(v, hyst);
  const double slack = opt.monotone_slack * scale;
  const int ax = static_cast<int>(std::lround((rep.axis + g.half_length) / h));
  rep.monotone_left = true;
  rep.monotone_right = true;
  for (int i = 0; i + 1 <= ax && i + 1 < n; ++i)
    if (v[i + 1] - v[i] < -slack) rep.monotone_left = false;
  for (int i = std::max(ax, 0); i + 1 < n; ++i)
    if (v[i + 1] - v[i] > slack) rep.monotone_right = false;
  return rep;
}

KernelReflectionReport kernel_reflection_inequalities(double lambda,
                                                      const std::vector<std::pair<double, double>>& pairs) {
  KernelReflectionReport r;
  r.min_difference = INFINITY;
  r.min_bound_margin = INFINITY;
  r.min_sharp_margin = INFINITY;
  for (const auto& [x, y] : pairs)
    if (!(x > lambda && y > lambda)) throw PreconditionError("kernel reflection pairs must lie right of lambda");
  for (const auto& [x, y] : pairs) {
    ++r.pairs;
    const double lhs = (x + y - 2.0 * lambda) - std::fabs(x - y);
    const double rhs = 2.0 * std::min(x - lambda, y - lambda);
    const double err = std::fabs(lhs - rhs);
    r.worst_identity_error = std::max(r.worst_identity_error, err);
    if (err > 1e-12) ++r.identity_failures;

    const double diff = kernel_eval(x - y) - kernel_eval(2.0 * lambda - x - y);
    r.min_difference = std::min(r.min_difference, diff);
    if (!(diff > 0.0)) ++r.positivity_failures;
    const double margin = 2.0 * (x - lambda) - diff;
    r.min_bound_margin = std::min(r.min_bound_margin, margin);
    if (margin < 0.0) ++r.bound_failures;
    const double sharp = std::min(x - lambda, y - lambda) - diff;
    r.min_sharp_margin = std::min(r.min_sharp_margin, sharp);
    if (sharp < 0.0) ++r.sharp_bound_failures;
  }
  return r;
}

std::vector<std::pair<double, double>> random_pairs(double lambda, long count, std::uint64_t seed, double span) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lambda, lambda + span);
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  auto draw = [&] {
    double v;
    do v = u(rng);
    while (!(v > lambda));
    return v;
  };
  for (long i = 0; i < count; ++i) {
    const double x = draw();
    const double y = draw();
    out.emplace_back(x, y);
  }
  return out;
}

CrestFit fit_crest_exponent(const WaveProfile& p, double window_radius) {
  const Grid& g = p.grid;
  const double c = p.c;
  const double top = p.sup();
  if (!(std::fabs(top - c) <= 1e-2 * c))
    throw PreconditionError("crest fit needs sup phi within 1e-2 of c");
  const int i0 = p.argmax();
  const double x0 = g.x(i0);
  const double h = g.h();
  const double radius = std::min(window_radius, 0.1 * g.half_length);

  std::vector<double> ls, lv, s, d;
  for (int i = 0; i < g.n; ++i) {
    const double dist = std::fabs(g.x(i) - x0);
    if (i == i0 || dist < h * (1.0 - 1e-9) || dist > radius * (1.0 + 1e-12)) continue;
    const double gap = c - p.phi[i];
    if (!(gap > 0.0)) throw DomainError("c - phi is not positive in the crest window");
    s.push_back(dist);
    d.push_back(gap);
    ls.push_back(std::log(dist));
    lv.push_back(std::log(gap));
  }
  if (s.size() < 2) throw PreconditionError("crest window holds fewer than two nodes");
  const double N = static_cast<double>(s.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    mx += ls[i] / N;
    my += lv[i] / N;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sxx += (ls[i] - mx) * (ls[i] - mx);
    sxy += (ls[i] - mx) * (lv[i] - my);
  }
  CrestFit f;
  f.alpha = sxx > 0.0 ? sxy / sxx : 0.0;
  f.window = radius;
  f.crest_x = x0;
  f.points = static_cast<int>(s.size());
  f.C1 = INFINITY;
  f.C2 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double C = d[i] / std::pow(s[i], f.alpha);
    f.C1 = std::min(f.C1, C);
    f.C2 = std::max(f.C2, C);
  }
  return f;
}

std::string to_string(TouchingVerdict v) {
  switch (v) {
    case TouchingVerdict::identical: return "identical-on-half-line";
    case TouchingVerdict::strictly_above: return "strictly-above";
    default: return "falsified";
  }
}

TouchingReport touching_check(const WaveProfile& sup_p, const WaveProfile& sub_p, double lambda, double tol) {
  const Grid& g = sup_p.grid;
  if (!(g == sub_p.grid)) throw PreconditionError("touching check needs profiles on the same grid");
  const int n = g.n;
  const double h = g.h();
  const double eps = 1e-9 * h;

  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = sup_p.phi[i] * sup_p.phi[i] - sub_p.phi[i] * sub_p.phi[i];
  const WaveProfile wp{g, w, 1.0, 0.0};
  const Reflection wr = reflect(wp, lambda);

  TouchingReport r;
  r.min_gap = INFINITY;
  for (int i = 0; i < n; ++i) {
    const double x = g.x(i);
    if (x < lambda - eps) continue;
    const double gap = sup_p.phi[i] - sub_p.phi[i];
    if (gap < -tol) throw PreconditionError("sup profile lies below sub profile right of lambda");
    if (!wr.outside[i] && std::fabs(w[i] + wr.profile.phi[i]) > tol)
      throw PreconditionError("sup^2 - sub^2 is not odd about lambda");
    r.max_gap = std::max(r.max_gap, std::fabs(gap));
    if (x >= lambda + h - eps) {
      r.min_gap = std::min(r.min_gap, gap);
      r.max_sum_over_2c = std::max(r.max_sum_over_2c, (sup_p.phi[i] + sub_p.phi[i]) / (2.0 * sup_p.c));
    }
  }
  if (r.max_gap <= tol)
    r.verdict = TouchingVerdict::identical;
  else if (r.min_gap > 0.0 && r.max_sum_over_2c < 1.0)
    r.verdict = TouchingVerdict::strictly_above;
  else
    r.verdict = TouchingVerdict::falsified;
  return r;
}

}  // namespace dpw
