#include "bisc/numeric.hpp"

#include <gmp.h>

#include <cstdio>

#include "bisc/errors.hpp"

namespace bisc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InvalidArgument("not an integer: '" + std::string(s) + "'");
  // Leading zeros would make the string constructor read octal.
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
      throw InvalidArgument("not a rational: '" + std::string(text) + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt num = parse_integer(whole) * scale + (frac.empty() ? BigInt(0) : parse_integer(frac));
    Rational q(num, scale);
    return negative ? Rational(-q) : q;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

double log_of(const BigInt& value) {
  if (value <= 0) throw InvalidArgument("log of non-positive integer");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, value.backend().data());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

double log_of(const Rational& value) {
  if (value <= 0) throw InvalidArgument("log of non-positive rational");
  return log_of(BigInt(numerator(value))) - log_of(BigInt(denominator(value)));
}

BigInt pow2(unsigned exponent) {
  BigInt r = 1;
  r <<= exponent;
  return r;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

std::optional<Rational> exact_log2(const Rational& value) {
  if (value <= 0) return std::nullopt;
  auto is_pow2 = [](const BigInt& v) -> std::optional<long> {
    if (v <= 0) return std::nullopt;
    const auto bits = mpz_sizeinbase(v.backend().data(), 2);
    if (mpz_popcount(v.backend().data()) != 1) return std::nullopt;
    return static_cast<long>(bits) - 1;
  };
  auto num = is_pow2(BigInt(numerator(value)));
  auto den = is_pow2(BigInt(denominator(value)));
  if (!num || !den) return std::nullopt;
  return Rational(*num - *den);
}

std::string decimal_from_log(double log_value) {
  if (!std::isfinite(log_value)) return "inf";
  const double log10v = log_value / std::log(10.0);
  if (log10v < 15.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", std::exp(log_value));
    return buf;
  }
  const double exponent = std::floor(log10v);
  const double mantissa = std::pow(10.0, log10v - exponent);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9fe+%.0f", mantissa, exponent);
  return buf;
}

}  // namespace bisc
