#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qhj::opalg {

using Rational = boost::rational<long long>;

// Exact scalar: value * i^i_pow * hbar^hbar * m^mass * m0^rest_mass * c^c_light.
// i_pow is kept in {0,1}; even powers fold into the sign of value.
struct Coeff {
  Rational value{0};
  int i_pow = 0;
  int hbar = 0;
  int mass = 0;
  int rest_mass = 0;
  int c_light = 0;

  static Coeff one() { return Coeff{Rational(1), 0, 0, 0, 0, 0}; }
  static Coeff rational(Rational r) { return Coeff{r, 0, 0, 0, 0, 0}; }

  bool is_zero() const { return value == Rational(0); }

  void normalize_i() {
    int k = ((i_pow % 4) + 4) % 4;
    switch (k) {
      case 0: i_pow = 0; break;
      case 1: i_pow = 1; break;
      case 2: i_pow = 0; value = -value; break;
      case 3: i_pow = 1; value = -value; break;
    }
  }

  Coeff& operator*=(const Coeff& o) {
    value *= o.value;
    i_pow += o.i_pow;
    hbar += o.hbar;
    mass += o.mass;
    rest_mass += o.rest_mass;
    c_light += o.c_light;
    normalize_i();
    return *this;
  }

  friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }

  Coeff operator-() const {
    Coeff r = *this;
    r.value = -r.value;
    return r;
  }

  // Same monomial in {i, hbar, m, m0, c}; only such coefficients may add.
  bool same_monomial(const Coeff& o) const {
    return i_pow == o.i_pow && hbar == o.hbar && mass == o.mass &&
           rest_mass == o.rest_mass && c_light == o.c_light;
  }

  Coeff inverse() const {
    if (is_zero()) throw std::domain_error("Coeff: inverse of zero");
    Coeff r;
    r.value = Rational(value.denominator(), value.numerator());
    r.i_pow = -i_pow;  // 1/i = -i
    r.hbar = -hbar;
    r.mass = -mass;
    r.rest_mass = -rest_mass;
    r.c_light = -c_light;
    r.normalize_i();
    return r;
  }

  friend bool operator==(const Coeff& a, const Coeff& b) {
    return a.value == b.value && a.same_monomial(b);
  }
};

}  // namespace qhj::opalg
