#include "dpw/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <algorithm>
#include <cstring>
#include <mutex>
#include <numbers>

#include "dpw/errors.hpp"
#include "dpw/simd.hpp"

namespace dpw {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Spectral::Spectral(const Grid& g) : grid_(g) {
  if (g.kind != GridKind::periodic) throw UnsupportedGrid("spectral transforms need a periodic grid");
  const int n = g.n;
  k_.resize(n / 2 + 1);
  for (int j = 0; j <= n / 2; ++j) k_[j] = std::numbers::pi * j / g.half_length;
  rbuf_ = fftw_alloc_real(n);
  auto* c = fftw_alloc_complex(n / 2 + 1);
  cbuf_ = c;
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd_ = fftw_plan_dft_r2c_1d(n, rbuf_, c, FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_c2r_1d(n, c, rbuf_, FFTW_ESTIMATE);
}

Spectral::~Spectral() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_));
  fftw_free(rbuf_);
  fftw_free(cbuf_);
}

void Spectral::forward(const double* u, std::complex<double>* uh) {
  const int n = grid_.n;
  std::memcpy(rbuf_, u, sizeof(double) * n);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  std::memcpy(static_cast<void*>(uh), cbuf_, sizeof(fftw_complex) * modes());
}

void Spectral::inverse(const std::complex<double>* uh, double* u) {
  const int n = grid_.n;
  std::memcpy(cbuf_, static_cast<const void*>(uh), sizeof(fftw_complex) * modes());
  fftw_execute(static_cast<fftw_plan>(inv_));
  const double s = 1.0 / n;
  for (int i = 0; i < n; ++i) u[i] = rbuf_[i] * s;
}

cvec Spectral::forward(const std::vector<double>& u) {
  cvec uh(modes());
  forward(u.data(), uh.data());
  return uh;
}

std::vector<double> Spectral::inverse(const cvec& uh) {
  std::vector<double> u(grid_.n);
  inverse(uh.data(), u.data());
  return u;
}

std::vector<double> Spectral::derivative(const std::vector<double>& u, int order) {
  cvec uh = forward(u);
  const int m = modes();
  const std::complex<double> I(0.0, 1.0);
  for (int j = 0; j < m; ++j) uh[j] *= std::pow(I * k_[j], order);
  if (order % 2 == 1) uh[m - 1] = 0.0;
  return inverse(uh);
}

std::vector<double> Spectral::apply_L(const std::vector<double>& u) {
  cvec uh = forward(u);
  const int m = modes();
  std::vector<double> sym(m);
  for (int j = 0; j < m; ++j) sym[j] = symbol_eval(k_[j]);
  simd::active().scale_complex(reinterpret_cast<double*>(uh.data()), sym.data(), m);
  // the inverse keeps only the real part of the self-conjugate modes
  double scale = 0.0;
  for (const auto& z : uh) scale = std::max(scale, std::abs(z));
  const double residue = std::max(std::fabs(uh[0].imag()), std::fabs(uh[m - 1].imag()));
  if (residue > 1e-10 * std::max(scale, 1.0))
    throw std::runtime_error("spectral L produced a non-real result");
  return inverse(uh);
}

std::vector<double> Spectral::shift(const std::vector<double>& u, double s) {
  cvec uh = forward(u);
  const int m = modes();
  for (int j = 0; j < m - 1; ++j) uh[j] *= std::polar(1.0, -k_[j] * s);
  uh[m - 1] *= std::cos(k_[m - 1] * s);
  return inverse(uh);
}

std::vector<double> Spectral::reflect(const std::vector<double>& u, double lambda) {
  cvec uh = forward(u);
  const int m = modes();
  const double d = 2.0 * (lambda + grid_.half_length);
  for (int j = 0; j < m - 1; ++j) uh[j] = std::conj(uh[j]) * std::polar(1.0, -k_[j] * d);
  uh[m - 1] = uh[m - 1].real() * std::cos(k_[m - 1] * d);
  return inverse(uh);
}

double Spectral::eval(const cvec& uh, double y, int deriv) const {
  const int m = modes();
  const double s = y + grid_.half_length;
  const std::complex<double> I(0.0, 1.0);
  double acc = deriv == 0 ? uh[0].real() : 0.0;
  for (int j = 1; j < m - 1; ++j)
    acc += 2.0 * (std::pow(I * k_[j], deriv) * uh[j] * std::polar(1.0, k_[j] * s)).real();
  if (deriv % 2 == 0) acc += (std::pow(I * k_[m - 1], deriv) * uh[m - 1]).real() * std::cos(k_[m - 1] * s);
  return acc / grid_.n;
}

}  // namespace dpw
