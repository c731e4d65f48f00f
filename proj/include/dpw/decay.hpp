#pragma once

#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "dpw/steady.hpp"

namespace dpw {

struct DecayReport {
  double fitted_rate = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  double fit_r2 = 0.0;
  double weighted_sup = 0.0;
  // (max - min)/max of e^{|x|} phi over the outer half of the window
  double weighted_variation = 0.0;
  int points = 0;
};

// Window in |x - crest|; default is the outer 25% of the half domain minus
// the last five nodes.
std::pair<double, double> default_tail_window(const Grid& g);
DecayReport fit_tail_rate(const WaveProfile& p, std::optional<std::pair<double, double>> window = std::nullopt);

// int e^{l|x|} / ((1 + sigma e^{|x|})^m e^{m|x-y|}) dx over the real line
double conv_estimate_lhs(double l, double m, double sigma, double y);

struct ConvEstimateCase {
  double l = 0.0;
  double m = 0.0;
  double sigma = 0.0;
  double y = 0.0;
  double lhs = 0.0;
  double B_paper = 0.0;
  double B_safe = 0.0;

  static ConvEstimateCase make(double l, double m, double sigma, double y);
};

struct ConvVerdict {
  double rhs_paper = 0.0;
  double rhs_safe = 0.0;
  bool ok_paper = false;
  bool ok_safe = false;
};

ConvVerdict conv_estimate_check(const ConvEstimateCase& c);

struct ConvSweepRow {
  ConvEstimateCase c;
  ConvVerdict v;
};

struct ConvSweepSpec {
  std::vector<double> l_fractions{0.2, 0.5, 0.9};
  std::vector<double> m_values{1.0, 2.0, 4.0};
  std::vector<double> sigmas{0.1, 1.0, 10.0};
  std::vector<double> ys{0.0, 1.0, -1.0, 5.0, -5.0, 20.0, -20.0};
};

std::vector<ConvSweepRow> conv_sweep(const ConvSweepSpec& spec = {});
void write_conv_csv(std::ostream& os, const std::vector<ConvSweepRow>& rows);

}  // namespace dpw
