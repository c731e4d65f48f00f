#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpw/grid.hpp"
#include "dpw/spectral.hpp"

namespace dpw {

struct EvolutionState {
  double t = 0.0;
  SampledField u;
};

struct StepConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double dealias_fraction = 2.0 / 3.0;
  int record_every = 1;
  // exponential filter exp(-alpha (|k|/kmax)^order) after each step; 0 disables
  double filter_alpha = 0.0;
  int filter_order = 8;
  Operator op = Operator::spectral;
  // slope blow-up: max|u_x| h above this fraction of (max u - min u)
  double breaking_factor = 0.5;

  void validate() const;
};

struct BlowUpError : std::runtime_error {
  BlowUpError(const std::string& what, EvolutionState last_valid, double t_fail, double max_slope)
      : std::runtime_error(what), last_valid(std::move(last_valid)), t_fail(t_fail), max_slope(max_slope) {}
  EvolutionState last_valid;
  double t_fail;
  double max_slope;
};

struct CflError : std::invalid_argument {
  CflError(const std::string& what, double suggested_dt) : std::invalid_argument(what), suggested_dt(suggested_dt) {}
  double suggested_dt;
};

// largest dt allowed by dt <= h / (2 sup|u|)
double cfl_limit(const SampledField& u);

// Right-hand side -u u_x - d/dx L(3/2 u^2) with a reusable transform.
class Evolver {
 public:
  Evolver(const Grid& g, const StepConfig& cfg);
  std::vector<double> rhs(const std::vector<double>& u);
  // classical four-stage step, followed by the optional filter
  std::vector<double> step(const std::vector<double>& u, double dt);
  const StepConfig& config() const { return cfg_; }
  Spectral& spectral() { return sp_; }

 private:
  Grid grid_;
  StepConfig cfg_;
  Spectral sp_;
  std::vector<double> mask_;
  std::vector<double> dsym_;  // i k m(k) restricted to kept modes, as k m(k)
  std::vector<double> filter_;
  cvec uh_, wh_;
  std::vector<double> ud_, ux_, w_;
};

SampledField rhs(const SampledField& u, double dealias_fraction = 2.0 / 3.0);
EvolutionState step_rk4(const EvolutionState& s, const StepConfig& cfg);

// crest position: quadratic fit through the discrete maximum, then Newton on
// the derivative of the trigonometric interpolant
double crest_quadratic(const SampledField& u);
double crest_position(const SampledField& u, Spectral& sp);

double l2_norm(const SampledField& u);
// sup |u - u0(x - shift)|
double shape_error(const SampledField& u, const SampledField& u0, double shift, Spectral& sp);
// sup |u(x) - u(2 lambda - x)| with the trigonometric interpolant
double symmetry_persistence(const EvolutionState& s, double lambda);
double symmetry_error(const SampledField& u, double lambda, Spectral& sp);

struct TraceRow {
  double t = 0.0;
  double lambda = 0.0;
  double lambda_dot = 0.0;
  double shape_error = 0.0;
  double symmetry_error = 0.0;
  double l2_norm = 0.0;
};

struct EvolutionTrace {
  std::vector<TraceRow> rows;
  double speed_mean = 0.0;
  double speed_std = 0.0;
  double max_shape_error = 0.0;
  double max_symmetry_error = 0.0;
  EvolutionState final_state;
};

using Observer = std::function<void(const EvolutionState&)>;

EvolutionTrace simulate(const SampledField& initial, const StepConfig& cfg, const Observer& observer = {});
void write_trace_csv(std::ostream& os, const EvolutionTrace& trace);

struct ConstraintResiduals {
  double r1 = 0.0;
  double r2 = 0.0;
};

// u_t by the centred difference of before/after; spatial terms at mid
ConstraintResiduals constraint_residuals(const EvolutionState& before, const EvolutionState& mid,
                                         const EvolutionState& after, double lambda_dot);
// midpoint taken as the average of before and after
ConstraintResiduals constraint_residuals(const EvolutionState& before, const EvolutionState& after,
                                         double lambda_dot);

// u_t - u_xxt + 4 u u_x - 3 u_x u_xx - u u_xxx at mid
SampledField local_form_residual(const EvolutionState& prev, const EvolutionState& mid, const EvolutionState& next);

}  // namespace dpw
