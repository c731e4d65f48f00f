#include "dpw/simd.hpp"

#include <cmath>

namespace dpw::simd::scalar {
namespace {

void steady_residual(const double* phi, const double* lphi2, double c, double a, double* out,
                     std::size_t n) {
  const double two_c = 2.0 * c;
  for (std::size_t i = 0; i < n; ++i) out[i] = phi[i] * (two_c - phi[i]) / 3.0 - lphi2[i] - a;
}

void mul(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void rk4_combine(const double* u, const double* k1, const double* k2, const double* k3,
                 const double* k4, double dt, double* out, std::size_t n) {
  const double s = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i)
    out[i] = u[i] + s * ((k1[i] + 2.0 * k2[i]) + (2.0 * k3[i] + k4[i]));
}

void scale_complex(double* z, const double* s, std::size_t m) {
  for (std::size_t k = 0; k < m; ++k) {
    z[2 * k] = z[2 * k] * s[k];
    z[2 * k + 1] = z[2 * k + 1] * s[k];
  }
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i]);
    m = v > m ? v : m;
  }
  return m;
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i] - y[i]);
    m = v > m ? v : m;
  }
  return m;
}

void stencil4(const double* f, const double* w, double* out, std::size_t count) {
  for (std::size_t j = 0; j < count; ++j)
    out[j] = ((w[0] * f[j] + w[1] * f[j + 1]) + w[2] * f[j + 2]) + w[3] * f[j + 3];
}

void below_reflected(const double* phi, std::size_t center, std::size_t count, double tol,
                     std::uint8_t* mask) {
  for (std::size_t k = 0; k < count; ++k)
    mask[k] = phi[center + 1 + k] < phi[center - 1 - k] - tol ? 1 : 0;
}

}  // namespace

const Kernels table = {steady_residual, mul,     axpy,     rk4_combine,    scale_complex,
                       max_abs,         max_abs_diff, stencil4, below_reflected};

}  // namespace dpw::simd::scalar
