#include "dpw/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#define DPW_AVX2 __attribute__((target("avx2")))

namespace dpw::simd::avx2 {
namespace {

DPW_AVX2 void steady_residual(const double* phi, const double* lphi2, double c, double a,
                              double* out, std::size_t n) {
  const double two_c = 2.0 * c;
  const __m256d vc = _mm256_set1_pd(two_c);
  const __m256d v3 = _mm256_set1_pd(3.0);
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(phi + i);
    __m256d r = _mm256_div_pd(_mm256_mul_pd(p, _mm256_sub_pd(vc, p)), v3);
    r = _mm256_sub_pd(_mm256_sub_pd(r, _mm256_loadu_pd(lphi2 + i)), va);
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = phi[i] * (two_c - phi[i]) / 3.0 - lphi2[i] - a;
}

DPW_AVX2 void mul(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

DPW_AVX2 void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

DPW_AVX2 void rk4_combine(const double* u, const double* k1, const double* k2, const double* k3,
                          const double* k4, double dt, double* out, std::size_t n) {
  const double s = dt / 6.0;
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_mul_pd(two, _mm256_loadu_pd(k2 + i)));
    const __m256d b = _mm256_add_pd(_mm256_mul_pd(two, _mm256_loadu_pd(k3 + i)), _mm256_loadu_pd(k4 + i));
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(u + i), _mm256_mul_pd(vs, _mm256_add_pd(a, b)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = u[i] + s * ((k1[i] + 2.0 * k2[i]) + (2.0 * k3[i] + k4[i]));
}

DPW_AVX2 void scale_complex(double* z, const double* s, std::size_t m) {
  std::size_t k = 0;
  for (; k + 2 <= m; k += 2) {
    const __m128d pair = _mm_loadu_pd(s + k);
    const __m256d ss = _mm256_permute4x64_pd(_mm256_castpd128_pd256(pair), 0x50);
    _mm256_storeu_pd(z + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(z + 2 * k), ss));
  }
  for (; k < m; ++k) {
    z[2 * k] = z[2 * k] * s[k];
    z[2 * k + 1] = z[2 * k + 1] * s[k];
  }
}

DPW_AVX2 double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int i = 1; i < 4; ++i) m = lanes[i] > m ? lanes[i] : m;
  return m;
}

DPW_AVX2 double max_abs(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(_mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)), acc);
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double v = std::fabs(x[i]);
    m = v > m ? v : m;
  }
  return m;
}

DPW_AVX2 double max_abs_diff(const double* x, const double* y, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_max_pd(_mm256_andnot_pd(sign, d), acc);
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double v = std::fabs(x[i] - y[i]);
    m = v > m ? v : m;
  }
  return m;
}

DPW_AVX2 void stencil4(const double* f, const double* w, double* out, std::size_t count) {
  const __m256d w0 = _mm256_set1_pd(w[0]);
  const __m256d w1 = _mm256_set1_pd(w[1]);
  const __m256d w2 = _mm256_set1_pd(w[2]);
  const __m256d w3 = _mm256_set1_pd(w[3]);
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d acc = _mm256_add_pd(_mm256_mul_pd(w0, _mm256_loadu_pd(f + j)),
                                _mm256_mul_pd(w1, _mm256_loadu_pd(f + j + 1)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w2, _mm256_loadu_pd(f + j + 2)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w3, _mm256_loadu_pd(f + j + 3)));
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < count; ++j)
    out[j] = ((w[0] * f[j] + w[1] * f[j + 1]) + w[2] * f[j + 2]) + w[3] * f[j + 3];
}

DPW_AVX2 void below_reflected(const double* phi, std::size_t center, std::size_t count, double tol,
                              std::uint8_t* mask) {
  const __m256d vt = _mm256_set1_pd(tol);
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d right = _mm256_loadu_pd(phi + center + 1 + k);
    // phi[center-1-k-3 .. center-1-k], reversed into lane order k..k+3
    const __m256d left = _mm256_permute4x64_pd(_mm256_loadu_pd(phi + center - 4 - k), 0x1B);
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(right, _mm256_sub_pd(left, vt), _CMP_LT_OQ));
    for (int b = 0; b < 4; ++b) mask[k + b] = (bits >> b) & 1;
  }
  for (; k < count; ++k) mask[k] = phi[center + 1 + k] < phi[center - 1 - k] - tol ? 1 : 0;
}

}  // namespace

const Kernels table = {steady_residual, mul,     axpy,     rk4_combine,    scale_complex,
                       max_abs,         max_abs_diff, stencil4, below_reflected};

}  // namespace dpw::simd::avx2

#else

namespace dpw::simd::avx2 {
const Kernels table = scalar::table;
}

#endif
