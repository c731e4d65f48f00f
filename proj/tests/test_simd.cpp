#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "dpw/simd.hpp"

using namespace dpw::simd;

namespace {

std::vector<double> randv(std::size_t n, std::uint64_t seed, double lo = -3.0, double hi = 3.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("isa selection") {
  CHECK(std::string(isa_name(Isa::scalar)) == "scalar");
  const Isa before = active_isa();
  set_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  set_isa(Isa::avx2);
  CHECK(active_isa() == detected_isa());
  set_isa(before);
}

TEST_CASE("avx2 kernels match scalar bitwise") {
  if (detected_isa() != Isa::avx2) {
    MESSAGE("AVX2 not available; skipped");
    return;
  }
  const Kernels& s = scalar::table;
  const Kernels& v = avx2::table;

  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 13u, 64u, 1001u}) {
    CAPTURE(n);
    const auto a = randv(n, 1), b = randv(n, 2), k2 = randv(n, 3), k3 = randv(n, 4), k4 = randv(n, 5);

    std::vector<double> o1(n), o2(n);
    s.steady_residual(a.data(), b.data(), 1.3, 0.01, o1.data(), n);
    v.steady_residual(a.data(), b.data(), 1.3, 0.01, o2.data(), n);
    CHECK(same_bits(o1, o2));

    s.mul(a.data(), b.data(), o1.data(), n);
    v.mul(a.data(), b.data(), o2.data(), n);
    CHECK(same_bits(o1, o2));

    o1 = b;
    o2 = b;
    s.axpy(0.37, a.data(), o1.data(), n);
    v.axpy(0.37, a.data(), o2.data(), n);
    CHECK(same_bits(o1, o2));

    s.rk4_combine(a.data(), b.data(), k2.data(), k3.data(), k4.data(), 0.013, o1.data(), n);
    v.rk4_combine(a.data(), b.data(), k2.data(), k3.data(), k4.data(), 0.013, o2.data(), n);
    CHECK(same_bits(o1, o2));

    CHECK(s.max_abs(a.data(), n) == v.max_abs(a.data(), n));
    CHECK(s.max_abs_diff(a.data(), b.data(), n) == v.max_abs_diff(a.data(), b.data(), n));

    auto z1 = randv(2 * n, 6), z2 = z1;
    s.scale_complex(z1.data(), a.data(), n);
    v.scale_complex(z2.data(), a.data(), n);
    CHECK(same_bits(z1, z2));

    if (n >= 4) {
      const auto f = randv(n + 3, 7);
      const auto w = randv(4, 8);
      s.stencil4(f.data(), w.data(), o1.data(), n);
      v.stencil4(f.data(), w.data(), o2.data(), n);
      CHECK(same_bits(o1, o2));
    }

    if (n >= 3) {
      const std::size_t center = n / 2, count = std::min(center, n - 1 - center);
      std::vector<std::uint8_t> m1(count + 1, 9), m2(count + 1, 9);
      s.below_reflected(a.data(), center, count, 1e-3, m1.data());
      v.below_reflected(a.data(), center, count, 1e-3, m2.data());
      CHECK(m1 == m2);
    }
  }
}

TEST_CASE("scalar kernels compute their definitions") {
  const Kernels& s = scalar::table;
  const std::vector<double> phi{0.5, 1.0}, lp{0.1, 0.2};
  std::vector<double> out(2);
  s.steady_residual(phi.data(), lp.data(), 1.0, 0.0, out.data(), 2);
  CHECK(out[0] == doctest::Approx(0.5 * 1.5 / 3.0 - 0.1));
  CHECK(out[1] == doctest::Approx(1.0 / 3.0 - 0.2));
  const std::vector<double> u{3.0, -7.0, 2.0};
  CHECK(s.max_abs(u.data(), 3) == 7.0);
  const std::vector<double> f{0, 1, 2, 3, 4}, w{1, 0, 0, 1};
  std::vector<double> st(2);
  s.stencil4(f.data(), w.data(), st.data(), 2);
  CHECK(st[0] == 3.0);
  CHECK(st[1] == 5.0);
}
