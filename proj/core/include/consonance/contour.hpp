#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "consonance/outcome.hpp"
#include "consonance/rational.hpp"

namespace consonance {

enum class Provenance : std::uint8_t { raw, prime_adjusted, double_prime_adjusted, analytic };

std::string_view to_string(Provenance p) noexcept;
Provenance provenance_from_string(std::string_view text);

// Plausibility contour: one value in [0, 1] per outcome of its space.
class Contour {
 public:
  Contour(std::shared_ptr<const OutcomeSpace> space, std::vector<Rational> values,
          Provenance provenance = Provenance::analytic);
  Contour(OutcomeSpace space, std::vector<Rational> values, Provenance provenance = Provenance::analytic);

  [[nodiscard]] const OutcomeSpace& space() const noexcept { return *space_; }
  [[nodiscard]] const std::shared_ptr<const OutcomeSpace>& space_ptr() const noexcept { return space_; }
  [[nodiscard]] std::span<const Rational> values() const noexcept { return values_; }
  [[nodiscard]] const Rational& operator[](std::size_t i) const { return values_.at(i); }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] Provenance provenance() const noexcept { return provenance_; }

  [[nodiscard]] Rational max_value() const;
  // sup of the contour equals one exactly.
  [[nodiscard]] bool is_consonant() const { return max_value() == Rational(1); }

  // Distinct contour values in increasing order.
  [[nodiscard]] std::vector<Rational> breakpoints() const;

  // Only meaningful when space() holds a FiniteOutcomeSpace.
  [[nodiscard]] const FiniteOutcomeSpace& finite_space() const;

  friend bool operator==(const Contour& a, const Contour& b) {
    return a.values_ == b.values_ && *a.space_ == *b.space_;
  }

 private:
  std::shared_ptr<const OutcomeSpace> space_;
  std::vector<Rational> values_;
  Provenance provenance_;
};

}  // namespace consonance
