#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "consonance/contour.hpp"
#include "consonance/rational.hpp"

namespace consonance {

// Slack allowed on real-valued probability sums and event comparisons.
inline constexpr double kProbabilityTolerance = 1e-12;

// Largest space for which extreme points (K! permutations) are enumerated.
inline constexpr std::size_t kMaxExtremePointOutcomes = 8;

// A point of the probability simplex over K outcomes. Exact when T is
// Rational, real-valued (sum within 1e-12) when T is double.
template <class T>
class BasicProbabilityVector {
 public:
  explicit BasicProbabilityVector(std::vector<T> weights);

  [[nodiscard]] std::span<const T> weights() const noexcept { return weights_; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] const T& operator[](std::size_t i) const { return weights_.at(i); }

  friend bool operator==(const BasicProbabilityVector&, const BasicProbabilityVector&) = default;

 private:
  std::vector<T> weights_;
};

using ProbabilityVector = BasicProbabilityVector<double>;
using ExactProbabilityVector = BasicProbabilityVector<Rational>;

ProbabilityVector to_real(const ExactProbabilityVector& p);

// P(A) <= upper_prob(c, A) for all 2^K events.
template <class T>
bool in_credal_set(const BasicProbabilityVector<T>& p, const Contour& c);

// P(strong alpha-cut of c) >= 1 - alpha at every contour value alpha.
template <class T>
bool prop2_membership(const BasicProbabilityVector<T>& p, const Contour& c);

// Vertices of the credal set: for each ordering of the outcomes, the
// increments of the upper probability along the growing prefix. Deduplicated,
// in first-seen permutation order.
std::vector<ExactProbabilityVector> extreme_points(const Contour& c);

// Shannon entropy in nats with 0 log 0 = 0.
double shannon_entropy(std::span<const double> weights);

struct LowerEntropy {
  double nats = 0.0;
  ExactProbabilityVector minimizer;
};

// Minimum entropy over the credal set, attained at an extreme point.
LowerEntropy lower_entropy(const Contour& c);

// `count` members of the credal set: uniform simplex draws kept when they are
// members, otherwise a random mixture of extreme points (or, beyond eight
// outcomes, the draw pulled toward the mode until it is a member).
// Deterministic per seed.
std::vector<ProbabilityVector> sample_credal(const Contour& c, std::size_t count, std::uint64_t seed);

// Barycentric -> Cartesian for K = 3 with vertices (0,0), (1,0), (1/2, sqrt(3)/2).
std::pair<double, double> ternary_coords(const ProbabilityVector& p);

}  // namespace consonance
