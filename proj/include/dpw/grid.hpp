#pragma once

#include <functional>
#include <string>
#include <vector>

namespace dpw {

enum class GridKind { periodic, line };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& s);

// Uniform nodes x_i = -P + i h, h = 2P/n, on [-P, P).
struct Grid {
  GridKind kind = GridKind::periodic;
  int n = 0;
  double half_length = 0.0;

  Grid() = default;
  Grid(GridKind kind, int n, double half_length);

  double h() const { return 2.0 * half_length / n; }
  double x(int i) const { return -half_length + i * h(); }
  int center() const { return n / 2; }
  std::vector<double> nodes() const;
  // node whose mirror about x = 0 is i, or -1 when it lies outside the grid
  int mirror(int i) const;

  bool operator==(const Grid& o) const {
    return kind == o.kind && n == o.n && half_length == o.half_length;
  }
};

struct SampledField {
  Grid grid;
  std::vector<double> values;

  SampledField() = default;
  SampledField(Grid grid, std::vector<double> values);

  static SampledField sample(const Grid& grid, const std::function<double(double)>& f);
  static SampledField constant(const Grid& grid, double v);
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

double kernel_eval(double x);
double symbol_eval(double xi);

// Realizations of L = (1 - d^2/dx^2)^{-1}.
enum class Operator { quadrature, spectral };

std::string to_string(Operator op);
Operator operator_from_string(const std::string& s);

SampledField apply_L_spectral(const SampledField& f);

struct LineOptions {
  // edge values above edge_threshold * max|f| raise the truncation warning
  double edge_threshold = 1e-10;
  // nodes at which the interpolating stencils must not straddle (kinks)
  std::vector<int> breaks;
};

struct LineResult {
  SampledField value;
  bool truncation_warning = false;
  double edge_magnitude = 0.0;
};

// Exact-exponential product integration of K against the piecewise cubic
// interpolant of f; O(n) by forward and backward recurrences.
LineResult apply_L_line(const SampledField& f, const LineOptions& opt = {});

// Same product rule on a periodic grid with wrapped stencils.
SampledField apply_L_periodic_quadrature(const SampledField& f, const std::vector<int>& breaks = {});

// Dispatch: spectral needs a periodic grid; quadrature picks the periodic or
// line variant from the grid kind.
SampledField apply_L(const SampledField& f, Operator op, const std::vector<int>& breaks = {});

// O(n^2) reference: per-cell 8-point Gauss-Legendre of w(x_i - y) times the
// same piecewise cubic interpolant used by the fast paths. The field is taken
// as zero outside [-P, P].
SampledField convolve_quadrature(const SampledField& f, const std::function<double(double)>& w,
                                 const std::vector<int>& breaks = {});
double convolve_quadrature_at(const SampledField& f, const std::function<double(double)>& w, double x,
                              const std::vector<int>& breaks = {});

// Dense matrix of L on the grid, column j = L e_j (row-major, n*n).
std::vector<double> operator_matrix(const Grid& g, Operator op, const std::vector<int>& breaks = {});

}  // namespace dpw
