#pragma once

#include <complex>
#include <vector>

#include "dpw/grid.hpp"

namespace dpw {

using cvec = std::vector<std::complex<double>>;

// Real-to-complex FFT pair on a periodic grid. Coefficients are unnormalized
// (forward of the constant 1 gives n at mode 0). Instances own scratch
// buffers and are not safe to share between threads; create one per thread.
class Spectral {
 public:
  explicit Spectral(const Grid& g);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const Grid& grid() const { return grid_; }
  int n() const { return grid_.n; }
  int modes() const { return grid_.n / 2 + 1; }
  // angular wavenumber of mode j, 0 <= j <= n/2
  double k(int j) const { return k_[j]; }
  const std::vector<double>& wavenumbers() const { return k_; }

  void forward(const double* u, std::complex<double>* uh);
  void inverse(const std::complex<double>* uh, double* u);
  cvec forward(const std::vector<double>& u);
  std::vector<double> inverse(const cvec& uh);

  std::vector<double> derivative(const std::vector<double>& u, int order);
  std::vector<double> apply_L(const std::vector<double>& u);
  // u(x - s)
  std::vector<double> shift(const std::vector<double>& u, double s);
  // u(2 lambda - x)
  std::vector<double> reflect(const std::vector<double>& u, double lambda);
  // trigonometric interpolant (or its derivative) at an arbitrary point
  double eval(const cvec& uh, double y, int deriv = 0) const;

 private:
  Grid grid_;
  std::vector<double> k_;
  double* rbuf_ = nullptr;
  void* cbuf_ = nullptr;
  void* fwd_ = nullptr;
  void* inv_ = nullptr;
};

}  // namespace dpw
