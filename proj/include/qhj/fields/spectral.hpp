#pragma once

#include "qhj/fields/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qhj::fields {

enum class Scheme { spectral, central };

inline Scheme parse_scheme(const std::string& s) {
  if (s == "spectral") return Scheme::spectral;
  if (s == "central") return Scheme::central;
  throw std::invalid_argument("unknown derivative scheme: " + s);
}

namespace detail {

// Wave numbers for a length-L periodic axis in FFT bin order.
inline std::vector<double> wave_numbers(int n, double length) {
  std::vector<double> k(n);
  double base = 2 * std::numbers::pi / length;
  for (int j = 0; j < n; ++j) k[j] = base * (j <= n / 2 ? j : j - n);
  return k;
}

// In-place derivative of one periodic line. Spectral: multiply by (ik)^order,
// zeroing the Nyquist bin for odd orders (its sign is ambiguous). Central:
// second-order stencils.
inline void line_derivative(std::vector<std::complex<double>>& line, double length,
                            int order, Scheme scheme) {
  const int n = static_cast<int>(line.size());
  if (scheme == Scheme::spectral) {
    thread_local Eigen::FFT<double> fft;
    std::vector<std::complex<double>> freq;
    fft.fwd(freq, line);
    auto k = wave_numbers(n, length);
    for (int j = 0; j < n; ++j) {
      if (order == 1) {
        freq[j] *= std::complex<double>(0, k[j]);
        if (j == n / 2) freq[j] = 0;
      } else {
        freq[j] *= -k[j] * k[j];
      }
    }
    fft.inv(line, freq);
    return;
  }
  const double h = length / n;
  std::vector<std::complex<double>> out(n);
  for (int j = 0; j < n; ++j) {
    const auto& prev = line[(j + n - 1) % n];
    const auto& next = line[(j + 1) % n];
    out[j] = order == 1 ? (next - prev) / (2 * h)
                        : (next - 2.0 * line[j] + prev) / (h * h);
  }
  line = std::move(out);
}

template <typename F>
inline void for_each_line(const Grid& g, int axis, F&& body) {
  if (g.dim == 1) {
    body(0, 1);  // start offset, stride
    return;
  }
  const int nx = g.points[0], ny = g.points[1];
  if (axis == 0)
    for (int iy = 0; iy < ny; ++iy) body(iy, ny);
  else
    for (int ix = 0; ix < nx; ++ix) body(ix * ny, 1);
}

}  // namespace detail

inline ComplexField derivative(const Grid& g, const ComplexField& f, int axis,
                               int order, Scheme scheme) {
  check_size(g, f.size(), "derivative");
  if (axis < 0 || axis >= g.dim) throw std::invalid_argument("derivative: axis out of range");
  if (order != 1 && order != 2) throw std::invalid_argument("derivative: order must be 1 or 2");
  ComplexField out = f;
  const int n = g.points[axis];
  std::vector<std::complex<double>> line(n);
  detail::for_each_line(g, axis, [&](int start, int stride) {
    for (int j = 0; j < n; ++j) line[j] = out[start + j * stride];
    detail::line_derivative(line, g.extent[axis], order, scheme);
    for (int j = 0; j < n; ++j) out[start + j * stride] = line[j];
  });
  return out;
}

inline RealField derivative(const Grid& g, const RealField& f, int axis, int order,
                            Scheme scheme) {
  ComplexField c(f.begin(), f.end());
  auto d = derivative(g, c, axis, order, scheme);
  RealField out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = d[i].real();
  return out;
}

inline RealField laplacian(const Grid& g, const RealField& f, Scheme scheme) {
  RealField out = derivative(g, f, 0, 2, scheme);
  if (g.dim == 2) {
    auto dyy = derivative(g, f, 1, 2, scheme);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += dyy[i];
  }
  return out;
}

}  // namespace qhj::fields
