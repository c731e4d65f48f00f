#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpw/grid.hpp"

namespace dpw {

// phi(2c - phi)/3 = L phi^2 + a
struct WaveProfile {
  Grid grid;
  std::vector<double> phi;
  double c = 1.0;
  double a = 0.0;

  SampledField field() const { return SampledField(grid, phi); }
  double sup() const;
  int argmax() const;
};

struct ResidualOptions {
  Operator op = Operator::quadrature;
  // one-sided interpolation at the crest node; for peaked profiles
  bool crest_break = false;
};

SampledField residual(const WaveProfile& p, const ResidualOptions& opt = {});
double residual_norm(const WaveProfile& p, const ResidualOptions& opt = {});

struct SolveConfig {
  double residual_tol = 1e-10;
  int max_iter = 100;
  double damping = 1.0;
  // prescribed crest height phi(0); unset means c fixed and no height condition
  std::optional<double> amplitude_mu;
  // with amplitude_mu: solve for c (true) or keep c and replace the crest equation (false)
  bool free_speed = true;
  bool pin_even = true;
  Operator op = Operator::quadrature;
  bool crest_break = false;
  // reject Newton steps that lift the crest to or above c
  bool branch_guard = true;
  // Petviashvili exponent
  double gamma = 2.0;

  void validate(double c) const;
};

struct SolveResult {
  WaveProfile profile;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> history;
};

SolveResult solve_newton(const WaveProfile& initial, const SolveConfig& cfg);
SolveResult solve_petviashvili(const WaveProfile& initial, const SolveConfig& cfg);

// Periodic grids: nontrivial wave at speed c from a cosh-shaped guess, then
// rescaled to crest height mu when given (the equation is homogeneous of
// degree two in (phi, c)). Line grids: mu e^{-|x|} at speed c.
WaveProfile initial_guess(const Grid& g, double c, std::optional<double> mu, const SolveConfig& cfg);

// initial_guess followed by Newton with the crest height pinned.
SolveResult solve_wave(const Grid& g, double c, std::optional<double> mu, const SolveConfig& cfg);

struct PathEntry {
  double mu = 0.0;
  WaveProfile profile;
  int iterations = 0;
  double residual_norm = 0.0;
  double crest_slope = 0.0;
  double crest_curvature = 0.0;
};

struct ContinuationPath {
  std::vector<PathEntry> entries;
  bool truncated = false;
  int failed_index = -1;
  std::string failure;
};

struct ContinuationOptions {
  double eps_peak = 1e-3;
};

ContinuationPath continue_in_height(const Grid& g, double c, double mu_from, double mu_to, int steps,
                                    const SolveConfig& cfg, const ContinuationOptions& opt = {});

WaveProfile peakon(double c, double lambda0, const Grid& g);

// second difference and one-sided slope at the discrete maximum
double crest_curvature(const WaveProfile& p);
double crest_slope(const WaveProfile& p);

// mean of phi(2c - phi)/3 - L phi^2 over the outer 10% on each side
double asymptotic_constant(const WaveProfile& p, Operator op = Operator::quadrature);

struct BoundsReport {
  bool positive = false;
  bool below_two_c = false;
  bool below_c = false;
  double sup = 0.0;
  double argmax_x = 0.0;
  double min = 0.0;
  bool pass() const { return positive && below_two_c && below_c; }
};

BoundsReport bounds_check(const WaveProfile& p, double tol = 1e-8);

}  // namespace dpw
