#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace consonance {

// Exact fraction over 64-bit integers. Always normalized: gcd(num, den) == 1
// and den > 0. Arithmetic that would overflow throws Error(Overflow) instead of
// wrapping, so a result is either exact or absent.
class Rational {
 public:
  constexpr Rational() noexcept = default;
  constexpr Rational(std::int64_t value) noexcept : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  [[nodiscard]] constexpr std::int64_t num() const noexcept { return num_; }
  [[nodiscard]] constexpr std::int64_t den() const noexcept { return den_; }

  [[nodiscard]] double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // "n/d", or just "n" when d == 1.
  [[nodiscard]] std::string str() const;

  // Accepts "n/d", integers and plain decimals ("0.25", "-1.5e-3").
  static Rational parse(std::string_view text);

  // Shortest round-trip decimal of `value`, read back exactly: 0.1 -> 1/10.
  static Rational from_double(double value);

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const;

  friend constexpr bool operator==(const Rational&, const Rational&) noexcept = default;
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) noexcept;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Conversion hook used by templates that run on either exact or real weights.
template <class T>
T scalar_cast(const Rational& r);

template <>
inline Rational scalar_cast<Rational>(const Rational& r) {
  return r;
}

template <>
inline double scalar_cast<double>(const Rational& r) {
  return r.to_double();
}

inline double to_double(double v) noexcept { return v; }
inline double to_double(const Rational& r) noexcept { return r.to_double(); }

}  // namespace consonance
