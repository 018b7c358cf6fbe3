#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qhj::fields {

using RealField = std::vector<double>;
using ComplexField = std::vector<std::complex<double>>;
using Mask = std::vector<std::uint8_t>;  // 1 = active, 0 = excluded

struct Constants {
  double hbar = 1.0;
  double m = 1.0;       // nonrelativistic mass
  double m0 = 1.0;      // rest mass
  double c_light = 1.0;
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Uniform periodic grid, 1 or 2 spatial axes, row-major storage
// (index = ix * points[1] + iy). Spectral derivatives require power-of-two
// point counts; the constructor enforces points >= 8 per used axis.
struct Grid {
  int dim = 1;
  std::array<int, 2> points{8, 1};
  std::array<double, 2> extent{1.0, 0.0};
  std::array<double, 2> origin{0.0, 0.0};

  static Grid line(int n, double length) {
    return line(n, length, -length / 2);
  }
  static Grid line(int n, double length, double left) {
    Grid g;
    g.dim = 1;
    g.points = {n, 1};
    g.extent = {length, 0.0};
    g.origin = {left, 0.0};
    g.validate();
    return g;
  }
  static Grid plane(int nx, int ny, double lx, double ly) {
    Grid g;
    g.dim = 2;
    g.points = {nx, ny};
    g.extent = {lx, ly};
    g.origin = {-lx / 2, -ly / 2};
    g.validate();
    return g;
  }

  void validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
    for (int axis = 0; axis < dim; ++axis) {
      if (points[axis] < 8 || !is_power_of_two(points[axis]))
        throw std::invalid_argument("grid points must be a power of two >= 8");
      if (!(extent[axis] > 0)) throw std::invalid_argument("grid extent must be positive");
    }
  }

  double step(int axis) const { return extent[axis] / points[axis]; }
  int size() const { return dim == 1 ? points[0] : points[0] * points[1]; }
  int index(int ix, int iy = 0) const { return dim == 1 ? ix : ix * points[1] + iy; }
  double coord(int axis, int j) const { return origin[axis] + j * step(axis); }
  double cell() const { return dim == 1 ? step(0) : step(0) * step(1); }

  bool operator==(const Grid&) const = default;
};

inline void check_size(const Grid& g, std::size_t n, const char* what) {
  if (n != static_cast<std::size_t>(g.size()))
    throw std::invalid_argument(std::string(what) + ": field size does not match grid");
}

inline double max_abs(const RealField& f) {
  double m = 0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

// Active where the amplitude clears eps * max(R); everything else is excluded
// from norms ("node" handling).
inline Mask amplitude_mask(const RealField& r, double eps) {
  double cutoff = eps * max_abs(r);
  Mask mask(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) mask[i] = r[i] >= cutoff ? 1 : 0;
  return mask;
}

// Max |f| over active points. A non-finite value on an active point is a bug
// in the caller's field, so it propagates as NaN instead of being skipped.
inline double masked_max(const RealField& f, const Mask& mask) {
  double m = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask[i]) continue;
    if (!std::isfinite(f[i])) return std::numeric_limits<double>::quiet_NaN();
    m = std::max(m, std::abs(f[i]));
  }
  return m;
}

// Probability-weighted diagnostic: sqrt(sum f^2 R^2 / sum R^2) over active points.
inline double weighted_l2(const RealField& f, const RealField& r, const Mask& mask) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask[i]) continue;
    if (!std::isfinite(f[i])) return std::numeric_limits<double>::quiet_NaN();
    num += f[i] * f[i] * r[i] * r[i];
    den += r[i] * r[i];
  }
  return den > 0 ? std::sqrt(num / den) : 0.0;
}

inline double mask_fraction(const Mask& mask) {
  if (mask.empty()) return 0.0;
  std::size_t inactive = 0;
  for (auto b : mask)
    if (!b) ++inactive;
  return static_cast<double>(inactive) / static_cast<double>(mask.size());
}

inline double norm_l2(const Grid& g, const ComplexField& psi) {
  double s = 0;
  for (const auto& v : psi) s += std::norm(v);
  return std::sqrt(s * g.cell());
}

}  // namespace qhj::fields
