#include "dpw/grid.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "dpw/errors.hpp"
#include "dpw/simd.hpp"
#include "dpw/spectral.hpp"

namespace dpw {

std::string to_string(GridKind kind) { return kind == GridKind::periodic ? "periodic" : "line"; }

GridKind grid_kind_from_string(const std::string& s) {
  if (s == "periodic") return GridKind::periodic;
  if (s == "line" || s == "truncated-line") return GridKind::line;
  throw std::invalid_argument("unknown grid kind: " + s);
}

std::string to_string(Operator op) { return op == Operator::spectral ? "spectral" : "quadrature"; }

Operator operator_from_string(const std::string& s) {
  if (s == "spectral") return Operator::spectral;
  if (s == "quadrature") return Operator::quadrature;
  throw std::invalid_argument("unknown operator: " + s);
}

Grid::Grid(GridKind kind_, int n_, double half_length_) : kind(kind_), n(n_), half_length(half_length_) {
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid needs an even point count n >= 8");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("grid half length must be positive and finite");
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = this->x(i);
  return x;
}

int Grid::mirror(int i) const {
  if (kind == GridKind::periodic) return (n - i) % n;
  return i == 0 ? -1 : n - i;
}

SampledField::SampledField(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.n)
    throw std::invalid_argument("field length does not match the grid");
  for (double x : values)
    if (!std::isfinite(x)) throw std::invalid_argument("field contains non-finite values");
}

SampledField SampledField::sample(const Grid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.n);
  for (int i = 0; i < grid.n; ++i) v[i] = f(grid.x(i));
  return SampledField(grid, std::move(v));
}

SampledField SampledField::constant(const Grid& grid, double c) {
  return SampledField(grid, std::vector<double>(grid.n, c));
}

double kernel_eval(double x) { return 0.5 * std::exp(-std::fabs(x)); }

double symbol_eval(double xi) { return 1.0 / (1.0 + xi * xi); }

SampledField apply_L_spectral(const SampledField& f) {
  if (f.grid.kind != GridKind::periodic) throw UnsupportedGrid("apply_L_spectral needs a periodic grid");
  Spectral sp(f.grid);
  return SampledField(f.grid, sp.apply_L(f.values));
}

namespace {

struct GaussRule {
  std::array<double, 8> s;
  std::array<double, 8> w;
};

const GaussRule& gauss8() {
  static const GaussRule rule = [] {
    GaussRule r{};
    const auto& a = boost::math::quadrature::gauss<double, 8>::abscissa();
    const auto& w = boost::math::quadrature::gauss<double, 8>::weights();
    for (int i = 0; i < 4; ++i) {
      r.s[3 - i] = 0.5 * (1.0 - a[i]);
      r.s[4 + i] = 0.5 * (1.0 + a[i]);
      r.w[3 - i] = 0.5 * w[i];
      r.w[4 + i] = 0.5 * w[i];
    }
    return r;
  }();
  return rule;
}

// Lagrange basis through the nodes offset, offset+1, .. offset+3 at s.
std::array<double, 4> lagrange(int offset, double s) {
  std::array<double, 4> l{};
  for (int k = 0; k < 4; ++k) {
    double v = 1.0;
    for (int m = 0; m < 4; ++m)
      if (m != k) v *= (s - (offset + m)) / double(k - m);
    l[k] = v;
  }
  return l;
}

struct CellWeights {
  std::array<double, 4> fwd;
  std::array<double, 4> bwd;
};

// fwd_k = h int_0^1 e^{-h(1-s)} l_k(s) ds, bwd_k = h int_0^1 e^{-h s} l_k(s) ds
CellWeights cell_weights(double h, int offset) {
  const GaussRule& g = gauss8();
  CellWeights cw{};
  for (int q = 0; q < 8; ++q) {
    const auto l = lagrange(offset, g.s[q]);
    const double ef = std::exp(-h * (1.0 - g.s[q]));
    const double eb = std::exp(-h * g.s[q]);
    for (int k = 0; k < 4; ++k) {
      cw.fwd[k] += h * g.w[q] * ef * l[k];
      cw.bwd[k] += h * g.w[q] * eb * l[k];
    }
  }
  return cw;
}

int cell_offset(int j, const Grid& g, const std::vector<int>& breaks) {
  const int n = g.n;
  const bool periodic = g.kind == GridKind::periodic;
  int o = -1;
  if (!periodic) {
    if (j == 0) o = 0;
    if (j == n - 2) o = -2;
  }
  for (int b : breaks) {
    if (b == j) o = 0;
    if ((periodic ? (j + 1) % n : j + 1) == b) o = -2;
  }
  if (!periodic) o = std::clamp(o, -j, n - 4 - j);
  return o;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

struct CellSums {
  std::vector<double> fwd;
  std::vector<double> bwd;
};

CellSums cell_sums(const SampledField& f, const std::vector<int>& breaks) {
  const Grid& g = f.grid;
  const int n = g.n;
  const double h = g.h();
  const bool periodic = g.kind == GridKind::periodic;
  const int cells = periodic ? n : n - 1;
  const CellWeights w[3] = {cell_weights(h, -2), cell_weights(h, -1), cell_weights(h, 0)};
  const auto& k = simd::active();
  CellSums cs{std::vector<double>(cells), std::vector<double>(cells)};
  const double* v = f.values.data();

  if (periodic) {
    std::vector<double> ext(n + 3);
    for (int t = 0; t < n + 3; ++t) ext[t] = v[wrap(t - 1, n)];
    k.stencil4(ext.data(), w[1].fwd.data(), cs.fwd.data(), n);
    k.stencil4(ext.data(), w[1].bwd.data(), cs.bwd.data(), n);
  } else {
    k.stencil4(v, w[1].fwd.data(), cs.fwd.data() + 1, n - 3);
    k.stencil4(v, w[1].bwd.data(), cs.bwd.data() + 1, n - 3);
  }

  std::vector<int> special;
  if (!periodic) special = {0, n - 2};
  for (int b : breaks) {
    special.push_back(wrap(b, n));
    special.push_back(wrap(b - 1, n));
  }
  for (int j : special) {
    if (j < 0 || j >= cells) continue;
    const int o = cell_offset(j, g, breaks);
    const CellWeights& cw = w[o + 2];
    double sf = 0.0, sb = 0.0;
    for (int m = 0; m < 4; ++m) {
      const double fv = v[wrap(j + o + m, n)];
      sf = sf + cw.fwd[m] * fv;
      sb = sb + cw.bwd[m] * fv;
    }
    cs.fwd[j] = sf;
    cs.bwd[j] = sb;
  }
  return cs;
}

}  // namespace

LineResult apply_L_line(const SampledField& f, const LineOptions& opt) {
  const Grid& g = f.grid;
  if (g.kind != GridKind::line) throw UnsupportedGrid("apply_L_line needs a truncated-line grid");
  const int n = g.n;
  const double e = std::exp(-g.h());
  const CellSums cs = cell_sums(f, opt.breaks);
  std::vector<double> A(n, 0.0), B(n, 0.0), out(n);
  for (int i = 1; i < n; ++i) A[i] = e * A[i - 1] + cs.fwd[i - 1];
  for (int i = n - 2; i >= 0; --i) B[i] = e * B[i + 1] + cs.bwd[i];
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (A[i] + B[i]);

  LineResult r{SampledField(g, std::move(out))};
  const double peak = simd::active().max_abs(f.values.data(), n);
  r.edge_magnitude = std::max(std::fabs(f.values.front()), std::fabs(f.values.back()));
  r.truncation_warning = r.edge_magnitude > opt.edge_threshold * peak;
  return r;
}

SampledField apply_L_periodic_quadrature(const SampledField& f, const std::vector<int>& breaks) {
  const Grid& g = f.grid;
  if (g.kind != GridKind::periodic) throw UnsupportedGrid("periodic quadrature needs a periodic grid");
  const int n = g.n;
  const double h = g.h();
  const double e = std::exp(-h);
  const double wrapf = 1.0 / (1.0 - std::exp(-n * h));
  const CellSums cs = cell_sums(f, breaks);

  std::vector<double> A(n), B(n), out(n);
  double s = 0.0, p = 1.0;
  for (int m = 1; m <= n; ++m) {
    s += p * cs.fwd[wrap(-m, n)];
    p *= e;
  }
  A[0] = s * wrapf;
  for (int i = 1; i < n; ++i) A[i] = e * A[i - 1] + cs.fwd[i - 1];
  s = 0.0;
  p = 1.0;
  for (int m = 0; m < n; ++m) {
    s += p * cs.bwd[m];
    p *= e;
  }
  B[0] = s * wrapf;
  for (int i = n - 1; i >= 1; --i) B[i] = e * B[(i + 1) % n] + cs.bwd[i];
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (A[i] + B[i]);
  return SampledField(g, std::move(out));
}

SampledField apply_L(const SampledField& f, Operator op, const std::vector<int>& breaks) {
  if (op == Operator::spectral) return apply_L_spectral(f);
  if (f.grid.kind == GridKind::periodic) return apply_L_periodic_quadrature(f, breaks);
  LineOptions opt;
  opt.breaks = breaks;
  return apply_L_line(f, opt).value;
}

namespace {

struct CellSamples {
  std::vector<double> y;  // quadrature abscissae, 8 per cell
  std::vector<double> wp; // weight times interpolant value
};

CellSamples cell_samples(const SampledField& f, const std::vector<int>& breaks) {
  const Grid& g = f.grid;
  const int n = g.n;
  const double h = g.h();
  const int cells = g.kind == GridKind::periodic ? n : n - 1;
  const GaussRule& q = gauss8();
  CellSamples cs{std::vector<double>(8 * cells), std::vector<double>(8 * cells)};
  for (int j = 0; j < cells; ++j) {
    const int o = cell_offset(j, g, breaks);
    for (int t = 0; t < 8; ++t) {
      const auto l = lagrange(o, q.s[t]);
      double p = 0.0;
      for (int m = 0; m < 4; ++m) p += l[m] * f.values[wrap(j + o + m, n)];
      cs.y[8 * j + t] = g.x(j) + q.s[t] * h;
      cs.wp[8 * j + t] = h * q.w[t] * p;
    }
  }
  return cs;
}

}  // namespace

SampledField convolve_quadrature(const SampledField& f, const std::function<double(double)>& w,
                                 const std::vector<int>& breaks) {
  const Grid& g = f.grid;
  const CellSamples cs = cell_samples(f, breaks);
  std::vector<double> out(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double xi = g.x(i);
    double acc = 0.0;
    for (std::size_t t = 0; t < cs.y.size(); ++t) acc += w(xi - cs.y[t]) * cs.wp[t];
    out[i] = acc;
  }
  return SampledField(g, std::move(out));
}

double convolve_quadrature_at(const SampledField& f, const std::function<double(double)>& w, double x,
                              const std::vector<int>& breaks) {
  const CellSamples cs = cell_samples(f, breaks);
  double acc = 0.0;
  for (std::size_t t = 0; t < cs.y.size(); ++t) acc += w(x - cs.y[t]) * cs.wp[t];
  return acc;
}

std::vector<double> operator_matrix(const Grid& g, Operator op, const std::vector<int>& breaks) {
  const int n = g.n;
  std::vector<double> M(static_cast<std::size_t>(n) * n);
  std::vector<double> e(n, 0.0);
  if (g.kind == GridKind::periodic && (op == Operator::spectral || breaks.empty())) {
    e[0] = 1.0;
    const auto col = apply_L(SampledField(g, e), op).values;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M[static_cast<std::size_t>(i) * n + j] = col[wrap(i - j, n)];
    return M;
  }
  for (int j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const auto col = apply_L(SampledField(g, e), op, breaks).values;
    for (int i = 0; i < n; ++i) M[static_cast<std::size_t>(i) * n + j] = col[i];
  }
  return M;
}

}  // namespace dpw
