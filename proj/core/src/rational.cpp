#include "consonance/rational.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "consonance/error.hpp"

namespace consonance {
namespace {

using Wide = __int128;

constexpr Wide kMax = std::numeric_limits<std::int64_t>::max();
constexpr Wide kMin = std::numeric_limits<std::int64_t>::min();

Wide gcd_wide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(Wide v) {
  if (v > kMax || v < kMin) throw Error(ErrorCode::Overflow, "rational component exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  CONSONANCE_REQUIRE(den != 0, ErrorCode::InvalidArgument, "zero denominator");
  Wide n = num;
  Wide d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const Wide g = gcd_wide(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (den_ == rhs.den_) {
    *this = Rational(narrow(Wide{num_} + rhs.num_), den_);
    return *this;
  }
  const Wide g = std::gcd(den_, rhs.den_);
  const Wide n = Wide{num_} * (rhs.den_ / g) + Wide{rhs.num_} * (den_ / g);
  const Wide d = Wide{den_} * (rhs.den_ / g);
  const Wide h = gcd_wide(n, d);
  *this = Rational(narrow(n / (h == 0 ? 1 : h)), narrow(d / (h == 0 ? 1 : h)));
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  const Wide g1 = gcd_wide(num_, rhs.den_);
  const Wide g2 = gcd_wide(rhs.num_, den_);
  const Wide n = (Wide{num_} / (g1 == 0 ? 1 : g1)) * (Wide{rhs.num_} / (g2 == 0 ? 1 : g2));
  const Wide d = (Wide{den_} / (g2 == 0 ? 1 : g2)) * (Wide{rhs.den_} / (g1 == 0 ? 1 : g1));
  *this = Rational(narrow(n), narrow(d));
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  CONSONANCE_REQUIRE(rhs.num_ != 0, ErrorCode::InvalidArgument, "division by zero");
  return *this *= Rational(rhs.den_, rhs.num_);
}

Rational Rational::operator-() const {
  CONSONANCE_REQUIRE(num_ != std::numeric_limits<std::int64_t>::min(), ErrorCode::Overflow,
                     "negation overflow");
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) noexcept {
  const Wide a = Wide{lhs.num_} * rhs.den_;
  const Wide b = Wide{rhs.num_} * lhs.den_;
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&] { return Error(ErrorCode::Parse, "not a rational: '" + std::string(text) + "'"); };
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw fail();

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t n = 0;
    std::int64_t d = 0;
    const auto lhs = text.substr(0, slash);
    const auto rhs = text.substr(slash + 1);
    auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), n);
    auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), d);
    if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size() || r2.ec != std::errc{} ||
        r2.ptr != rhs.data() + rhs.size() || d == 0) {
      throw fail();
    }
    return {n, d};
  }

  // Decimal: [sign] digits [. digits] [e|E [sign] digits]
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  Wide mantissa = 0;
  int scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      any_digit = true;
      mantissa = mantissa * 10 + (c - '0');
      if (mantissa > kMax) throw Error(ErrorCode::Overflow, "decimal too long: " + std::string(text));
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw fail();
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    ++i;
    const auto rest = text.substr(i);
    const char* begin = rest.data();
    if (!rest.empty() && rest.front() == '+') ++begin;
    auto r = std::from_chars(begin, rest.data() + rest.size(), exponent);
    if (r.ec != std::errc{} || r.ptr != rest.data() + rest.size()) throw fail();
  }
  exponent -= scale;
  Wide num = negative ? -mantissa : mantissa;
  Wide den = 1;
  for (; exponent > 0; --exponent) {
    num *= 10;
    if (num > kMax || num < kMin) throw Error(ErrorCode::Overflow, "decimal too large");
  }
  for (; exponent < 0; ++exponent) {
    den *= 10;
    if (den > kMax) throw Error(ErrorCode::Overflow, "decimal too precise: " + std::string(text));
  }
  const Wide g = gcd_wide(num, den);
  return {narrow(num / g), narrow(den / g)};
}

Rational Rational::from_double(double value) {
  CONSONANCE_REQUIRE(std::isfinite(value), ErrorCode::InvalidArgument, "non-finite value");
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error(ErrorCode::Parse, "cannot format double");
  return parse(std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data())));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace consonance
