#include "consonance/contour.hpp"

#include <algorithm>

#include "consonance/error.hpp"

namespace consonance {

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::raw: return "raw";
    case Provenance::prime_adjusted: return "prime-adjusted";
    case Provenance::double_prime_adjusted: return "double-prime-adjusted";
    case Provenance::analytic: return "analytic";
  }
  return "analytic";
}

Provenance provenance_from_string(std::string_view text) {
  for (auto p : {Provenance::raw, Provenance::prime_adjusted, Provenance::double_prime_adjusted,
                 Provenance::analytic}) {
    if (to_string(p) == text) return p;
  }
  throw Error(ErrorCode::Parse, "unknown provenance '" + std::string(text) + "'");
}

Contour::Contour(std::shared_ptr<const OutcomeSpace> space, std::vector<Rational> values, Provenance provenance)
    : space_(std::move(space)), values_(std::move(values)), provenance_(provenance) {
  CONSONANCE_REQUIRE(space_ != nullptr, ErrorCode::InvalidArgument, "contour without a space");
  CONSONANCE_REQUIRE(values_.size() == space_size(*space_), ErrorCode::InvalidArgument,
                     "contour has " + std::to_string(values_.size()) + " values for a space of " +
                         std::to_string(space_size(*space_)));
  for (const auto& v : values_) {
    CONSONANCE_REQUIRE(v >= Rational(0) && v <= Rational(1), ErrorCode::InvalidArgument,
                       "contour value " + v.str() + " outside [0, 1]");
  }
}

Contour::Contour(OutcomeSpace space, std::vector<Rational> values, Provenance provenance)
    : Contour(std::make_shared<const OutcomeSpace>(std::move(space)), std::move(values), provenance) {}

Rational Contour::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

std::vector<Rational> Contour::breakpoints() const {
  std::vector<Rational> out(values_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const FiniteOutcomeSpace& Contour::finite_space() const {
  const auto* fs = std::get_if<FiniteOutcomeSpace>(space_.get());
  CONSONANCE_REQUIRE(fs != nullptr, ErrorCode::InvalidArgument, "contour is not over a finite label space");
  return *fs;
}

}  // namespace consonance
