#ifndef CONFDIM_RATIONAL_HPP
#define CONFDIM_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace confdim {

// Exact fraction on int64. Cover geometry keeps denominators bounded by
// 2*|det A|^n, far below overflow at the piece budgets we allow.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }

  void normalize() {
    if (den < 0) { num = -num; den = -den; }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  Rational operator+(const Rational& o) const { return Rational(num * o.den + o.num * den, den * o.den); }
  Rational operator-(const Rational& o) const { return Rational(num * o.den - o.num * den, den * o.den); }
  Rational operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }
  Rational operator/(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("Rational: division by zero");
    return Rational(num * o.den, den * o.num);
  }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
  bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }

  // Representative in [0,1): x - floor(x).
  Rational mod1() const {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    return Rational(r, den);
  }

  bool is_integer() const { return den == 1; }
};

} // namespace confdim

#endif
