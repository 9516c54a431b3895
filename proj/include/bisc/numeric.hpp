#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace bisc {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses "p/q", "p" or a finite decimal like "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Natural log of a positive integer/rational, safe far beyond double range.
double log_of(const BigInt& value);
double log_of(const Rational& value);

BigInt pow2(unsigned exponent);
Rational pow(const Rational& base, unsigned exponent);

/// Exact base-2 logarithm when `value` is an integral power of two (2^k, k in Z).
std::optional<Rational> exact_log2(const Rational& value);

/// log2(d)^2 / d, the recurring expansion scale.
inline double log2sq_over_d(int d) {
  const double l = std::log2(static_cast<double>(d));
  return l * l / static_cast<double>(d);
}

/// ln(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -INFINITY) return a;
  return a + std::log1p(std::exp(b - a));
}

/// Neumaier-compensated running sum.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Decimal rendering of e^log_value: ten significant digits below 1e15, else "m.mmmmmmmmme+XX".
std::string decimal_from_log(double log_value);

/// Uniform double in [0,1) from a 64-bit engine, identical on every platform.
template <class Engine>
double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound) by rejection; identical on every platform.
template <class Engine>
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

}  // namespace bisc
