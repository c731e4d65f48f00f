#pragma once

// Hot loops shared by the operators, solvers and the time stepper.
// Each kernel has a scalar reference and an AVX2 variant; the AVX2 path
// uses no fused multiply-add so both produce bitwise identical results.

#include <cstddef>
#include <cstdint>

namespace dpw::simd {

enum class Isa { scalar, avx2 };

struct Kernels {
  // out = phi*(2c - phi)/3 - lphi2 - a
  void (*steady_residual)(const double* phi, const double* lphi2, double c, double a,
                          double* out, std::size_t n);
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  // y += alpha*x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out = u + (dt/6)*((k1 + 2 k2) + (2 k3 + k4))
  void (*rk4_combine)(const double* u, const double* k1, const double* k2, const double* k3,
                      const double* k4, double dt, double* out, std::size_t n);
  // interleaved complex z[k] *= s[k]
  void (*scale_complex)(double* z, const double* s, std::size_t m);
  double (*max_abs)(const double* x, std::size_t n);
  double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
  // out[j] = ((w0 f[j] + w1 f[j+1]) + w2 f[j+2]) + w3 f[j+3]
  void (*stencil4)(const double* f, const double* w, double* out, std::size_t count);
  // mask[k] = phi[center+1+k] < phi[center-1-k] - tol
  void (*below_reflected)(const double* phi, std::size_t center, std::size_t count, double tol,
                          std::uint8_t* mask);
};

Isa detected_isa();
Isa active_isa();
// Requests an ISA for subsequent calls; falls back to scalar when unsupported.
void set_isa(Isa isa);
const char* isa_name(Isa isa);

const Kernels& kernels(Isa isa);
inline const Kernels& active() { return kernels(active_isa()); }

namespace scalar {
extern const Kernels table;
}
namespace avx2 {
extern const Kernels table;
}

}  // namespace dpw::simd
