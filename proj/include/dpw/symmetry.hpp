#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dpw/steady.hpp"

namespace dpw {

struct Reflection {
  WaveProfile profile;
  // nodes whose mirror 2 lambda - x leaves [-P, P); their values are copied
  // from the input and must be ignored downstream
  std::vector<std::uint8_t> outside;
};

// phi(2 lambda - x) by linear interpolation between nodes
Reflection reflect(const WaveProfile& p, double lambda);

struct ReflectionSet {
  double lambda = 0.0;
  std::vector<std::pair<double, double>> intervals;
  double measure = 0.0;
  bool empty() const { return intervals.empty(); }
};

ReflectionSet sigma_minus(const WaveProfile& p, double lambda, double tol_set = 1e-10);
void write_reflection_csv(std::ostream& os, const std::vector<ReflectionSet>& sets);

struct SymmetryReport {
  double axis = 0.0;
  double axis_node = 0.0;
  double max_asymmetry = 0.0;
  int crest_count = 0;
  bool monotone_left = false;
  bool monotone_right = false;
  // every node axis left of axis_node had an empty reflection set
  bool empty_left_of_axis = false;
  int scanned_axes = 0;
  bool single_crest() const { return crest_count == 1 && monotone_left && monotone_right; }
  bool symmetric(double tol) const { return single_crest() && max_asymmetry <= tol; }
};

struct ScanOptions {
  double tol_set = 1e-10;
  // hysteresis for crest counting and slack for monotonicity, relative to max|phi|
  double crest_hysteresis = 1e-6;
  double monotone_slack = 1e-12;
};

double max_asymmetry(const WaveProfile& p, double lambda);
int crest_count(const std::vector<double>& v, double hysteresis);
SymmetryReport moving_plane_scan(const WaveProfile& p, const ScanOptions& opt = {});

struct KernelReflectionReport {
  long pairs = 0;
  long identity_failures = 0;
  long positivity_failures = 0;
  long bound_failures = 0;
  long sharp_bound_failures = 0;
  double worst_identity_error = 0.0;
  // min over pairs of the kernel difference and of the slack in each bound
  double min_difference = 0.0;
  double min_bound_margin = 0.0;
  double min_sharp_margin = 0.0;
  bool pass() const { return identity_failures == 0 && positivity_failures == 0 && bound_failures == 0; }
};

KernelReflectionReport kernel_reflection_inequalities(double lambda,
                                                      const std::vector<std::pair<double, double>>& pairs);
std::vector<std::pair<double, double>> random_pairs(double lambda, long count, std::uint64_t seed, double span = 20.0);

struct CrestFit {
  double alpha = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double window = 0.0;
  double crest_x = 0.0;
  int points = 0;
};

CrestFit fit_crest_exponent(const WaveProfile& p, double window_radius);

enum class TouchingVerdict { identical, strictly_above, falsified };
std::string to_string(TouchingVerdict v);

struct TouchingReport {
  TouchingVerdict verdict = TouchingVerdict::falsified;
  double max_gap = 0.0;
  double min_gap = 0.0;
  double max_sum_over_2c = 0.0;
};

TouchingReport touching_check(const WaveProfile& sup_p, const WaveProfile& sub_p, double lambda, double tol = 1e-10);

}  // namespace dpw
