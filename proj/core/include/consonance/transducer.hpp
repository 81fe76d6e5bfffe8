#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "consonance/contour.hpp"
#include "consonance/outcome.hpp"
#include "consonance/rational.hpp"

namespace consonance {

// |mean(rest) - y|. The mean is taken over the sorted bag so the result does
// not depend on the order of `rest`.
double nonconformity_mean_abs(std::span<const double> rest, double y);

// 1 - counts[y] / sum(counts), exact. `counts` are per-label counts of the
// bag the scored point is compared against.
Rational nonconformity_one_minus_emp(std::span<const std::size_t> counts, std::size_t y);

// Scores a point against the rest of the augmented bag. Built-in measures use
// closed forms over the whole bag; user-supplied ones are called once per point.
class NonconformityMeasure {
 public:
  enum class Kind { mean_abs_distance, one_minus_empirical_pmf, user_supplied };

  using RealScore = std::function<double(std::span<const double> rest, double y)>;
  using LabelScore = std::function<double(std::span<const std::size_t> rest, std::size_t y)>;

  static NonconformityMeasure mean_abs();
  static NonconformityMeasure one_minus_empirical();
  static NonconformityMeasure user(std::string name, RealScore score);
  static NonconformityMeasure user(std::string name, LabelScore score);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] bool accepts_real_data() const noexcept;
  [[nodiscard]] bool accepts_label_data() const noexcept;

  // Count of T_i >= T_{n+1} over the augmented bag whose last element is the
  // candidate.
  [[nodiscard]] std::size_t conforming_count(std::span<const double> augmented) const;
  [[nodiscard]] std::size_t conforming_count(std::span<const std::size_t> augmented,
                                             std::size_t space_size) const;

 private:
  NonconformityMeasure(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
  RealScore real_score_;
  LabelScore label_score_;
};

using Observations = std::variant<std::vector<std::size_t>, std::vector<double>>;

struct ConformalResult {
  Observations data;
  Contour contour;
  std::size_t n = 0;
};

// pi(candidate, data) = #{i : T_i >= T_{n+1}} / (n + 1).
Rational conformal_transducer(std::span<const double> data, double candidate, const NonconformityMeasure& psi);
Rational conformal_transducer(std::span<const std::size_t> data, std::size_t candidate, std::size_t space_size,
                              const NonconformityMeasure& psi);

// Transducer values for every candidate, in candidate order.
std::vector<Rational> transduce_candidates(std::span<const double> data, std::span<const double> candidates,
                                           const NonconformityMeasure& psi);

ConformalResult transduce_grid(std::span<const std::size_t> data, const FiniteOutcomeSpace& space,
                               const NonconformityMeasure& psi);
ConformalResult transduce_grid(std::span<const double> data, const GridOutcomeSpace& space,
                               const NonconformityMeasure& psi);

// pi / sup pi.
Contour adjust_prime(const Contour& c);
// Lifts every maximizer of pi to 1 and leaves the rest alone.
Contour adjust_double_prime(const Contour& c);

}  // namespace consonance
