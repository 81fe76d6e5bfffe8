#include "consonance/transducer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "consonance/error.hpp"

namespace consonance {
namespace {

double sorted_sum(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return std::accumulate(sorted.begin(), sorted.end(), 0.0);
}

Rational fraction_of(std::size_t count, std::size_t n) {
  return {static_cast<std::int64_t>(count), static_cast<std::int64_t>(n + 1)};
}

}  // namespace

double nonconformity_mean_abs(std::span<const double> rest, double y) {
  CONSONANCE_REQUIRE(!rest.empty(), ErrorCode::EmptyBag, "mean of an empty bag");
  return std::abs(sorted_sum(rest) / static_cast<double>(rest.size()) - y);
}

Rational nonconformity_one_minus_emp(std::span<const std::size_t> counts, std::size_t y) {
  CONSONANCE_REQUIRE(y < counts.size(), ErrorCode::UnknownLabel, "label index " + std::to_string(y) + " out of range");
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  CONSONANCE_REQUIRE(total > 0, ErrorCode::EmptyBag, "empirical pmf of an empty bag");
  return Rational(1) - Rational(static_cast<std::int64_t>(counts[y]), static_cast<std::int64_t>(total));
}

NonconformityMeasure NonconformityMeasure::mean_abs() { return {Kind::mean_abs_distance, "mean-abs"}; }

NonconformityMeasure NonconformityMeasure::one_minus_empirical() {
  return {Kind::one_minus_empirical_pmf, "one-minus-emp"};
}

NonconformityMeasure NonconformityMeasure::user(std::string name, RealScore score) {
  NonconformityMeasure m(Kind::user_supplied, std::move(name));
  m.real_score_ = std::move(score);
  return m;
}

NonconformityMeasure NonconformityMeasure::user(std::string name, LabelScore score) {
  NonconformityMeasure m(Kind::user_supplied, std::move(name));
  m.label_score_ = std::move(score);
  return m;
}

bool NonconformityMeasure::accepts_real_data() const noexcept {
  return kind_ == Kind::mean_abs_distance || (kind_ == Kind::user_supplied && real_score_);
}

bool NonconformityMeasure::accepts_label_data() const noexcept {
  return kind_ == Kind::one_minus_empirical_pmf || (kind_ == Kind::user_supplied && label_score_);
}

std::size_t NonconformityMeasure::conforming_count(std::span<const double> augmented) const {
  CONSONANCE_REQUIRE(!augmented.empty(), ErrorCode::EmptyBag, "augmented bag must hold the candidate");
  CONSONANCE_REQUIRE(accepts_real_data(), ErrorCode::InvalidArgument, name_ + " does not score real-valued data");
  const std::size_t n = augmented.size() - 1;
  if (n == 0) return 1;

  std::vector<double> scores(augmented.size());
  if (kind_ == Kind::mean_abs_distance) {
    // Callers pass the observed part sorted, so this sum is order-free.
    const double total = std::accumulate(augmented.begin(), augmented.end() - 1, 0.0) + augmented.back();
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 0; i < augmented.size(); ++i) {
      scores[i] = std::abs((total - augmented[i]) / nd - augmented[i]);
    }
  } else {
    std::vector<double> rest;
    rest.reserve(n);
    for (std::size_t i = 0; i < augmented.size(); ++i) {
      rest.clear();
      for (std::size_t j = 0; j < augmented.size(); ++j) {
        if (j != i) rest.push_back(augmented[j]);
      }
      scores[i] = real_score_(rest, augmented[i]);
    }
  }
  const double last = scores.back();
  return static_cast<std::size_t>(std::count_if(scores.begin(), scores.end(), [last](double t) { return t >= last; }));
}

std::size_t NonconformityMeasure::conforming_count(std::span<const std::size_t> augmented,
                                                   std::size_t space_size) const {
  CONSONANCE_REQUIRE(!augmented.empty(), ErrorCode::EmptyBag, "augmented bag must hold the candidate");
  CONSONANCE_REQUIRE(accepts_label_data(), ErrorCode::InvalidArgument, name_ + " does not score label data");
  for (auto y : augmented) {
    CONSONANCE_REQUIRE(y < space_size, ErrorCode::UnknownLabel, "label index " + std::to_string(y) + " out of range");
  }
  const std::size_t n = augmented.size() - 1;
  if (n == 0) return 1;

  if (kind_ == Kind::one_minus_empirical_pmf) {
    std::vector<std::size_t> counts(space_size, 0);
    for (auto y : augmented) ++counts[y];
    // Every point with label k sees the rest-of-bag counts with its own copy removed.
    std::vector<Rational> label_score(space_size);
    for (std::size_t k = 0; k < space_size; ++k) {
      if (counts[k] == 0) continue;
      auto rest = counts;
      --rest[k];
      label_score[k] = nonconformity_one_minus_emp(rest, k);
    }
    const Rational last = label_score[augmented.back()];
    std::size_t count = 0;
    for (std::size_t k = 0; k < space_size; ++k) {
      if (counts[k] > 0 && label_score[k] >= last) count += counts[k];
    }
    return count;
  }

  std::vector<double> scores(augmented.size());
  std::vector<std::size_t> rest;
  rest.reserve(n);
  for (std::size_t i = 0; i < augmented.size(); ++i) {
    rest.clear();
    for (std::size_t j = 0; j < augmented.size(); ++j) {
      if (j != i) rest.push_back(augmented[j]);
    }
    scores[i] = label_score_(rest, augmented[i]);
  }
  const double last = scores.back();
  return static_cast<std::size_t>(std::count_if(scores.begin(), scores.end(), [last](double t) { return t >= last; }));
}

Rational conformal_transducer(std::span<const double> data, double candidate, const NonconformityMeasure& psi) {
  return transduce_candidates(data, std::span<const double>(&candidate, 1), psi).front();
}

Rational conformal_transducer(std::span<const std::size_t> data, std::size_t candidate, std::size_t space_size,
                              const NonconformityMeasure& psi) {
  std::vector<std::size_t> augmented(data.begin(), data.end());
  augmented.push_back(candidate);
  return fraction_of(psi.conforming_count(augmented, space_size), data.size());
}

std::vector<Rational> transduce_candidates(std::span<const double> data, std::span<const double> candidates,
                                           const NonconformityMeasure& psi) {
  std::vector<double> augmented(data.begin(), data.end());
  std::sort(augmented.begin(), augmented.end());
  augmented.push_back(0.0);
  std::vector<Rational> out;
  out.reserve(candidates.size());
  for (double y : candidates) {
    augmented.back() = y;
    out.push_back(fraction_of(psi.conforming_count(augmented), data.size()));
  }
  return out;
}

ConformalResult transduce_grid(std::span<const std::size_t> data, const FiniteOutcomeSpace& space,
                               const NonconformityMeasure& psi) {
  std::vector<Rational> values;
  values.reserve(space.size());
  for (std::size_t y = 0; y < space.size(); ++y) values.push_back(conformal_transducer(data, y, space.size(), psi));
  return {std::vector<std::size_t>(data.begin(), data.end()), Contour(space, std::move(values), Provenance::raw),
          data.size()};
}

ConformalResult transduce_grid(std::span<const double> data, const GridOutcomeSpace& space,
                               const NonconformityMeasure& psi) {
  const auto points = space.points();
  auto values = transduce_candidates(data, points, psi);
  return {std::vector<double>(data.begin(), data.end()), Contour(space, std::move(values), Provenance::raw),
          data.size()};
}

Contour adjust_prime(const Contour& c) {
  const Rational top = c.max_value();
  CONSONANCE_REQUIRE(top > Rational(0), ErrorCode::AllZeroContour, "cannot normalize an all-zero contour");
  std::vector<Rational> values;
  values.reserve(c.size());
  for (const auto& v : c.values()) values.push_back(v / top);
  return {c.space_ptr(), std::move(values), Provenance::prime_adjusted};
}

Contour adjust_double_prime(const Contour& c) {
  const Rational top = c.max_value();
  std::vector<Rational> values(c.values().begin(), c.values().end());
  for (auto& v : values) {
    if (v == top) v = Rational(1);
  }
  return {c.space_ptr(), std::move(values), Provenance::double_prime_adjusted};
}

}  // namespace consonance
