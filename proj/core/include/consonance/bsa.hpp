#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace consonance {

// Gamma(shape, rate) prior or posterior on a Poisson rate.
struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;

  void validate() const;
  friend bool operator==(const GammaParams&, const GammaParams&) = default;
};

// Conjugate update: (shape + sum(counts), rate + n).
GammaParams posterior_update(const GammaParams& prior, std::span<const std::int64_t> counts);

// Negative-binomial predictive pmf with size = shape and success probability
// rate / (rate + 1), evaluated in log space.
double predictive_log_pmf(const GammaParams& post, std::uint64_t y);
double predictive_pmf(const GammaParams& post, std::uint64_t y);

// Mass a component may leave beyond the truncated support.
inline constexpr double kTruncationTail = 1e-10;
inline constexpr std::size_t kMaxSupport = 1'000'000;

// Finitely generated predictive credal set: one negative-binomial extreme
// point per posterior. The support is truncated at the smallest T for which
// every component's CDF reaches 1 - 1e-10.
class PredictiveFGCS {
 public:
  explicit PredictiveFGCS(std::vector<GammaParams> posteriors);

  [[nodiscard]] std::size_t components() const noexcept { return posteriors_.size(); }
  [[nodiscard]] const std::vector<GammaParams>& posteriors() const noexcept { return posteriors_; }
  // Support is {0, ..., support_size() - 1}.
  [[nodiscard]] std::size_t support_size() const noexcept { return support_; }
  [[nodiscard]] double pmf(std::size_t component, std::size_t y) const;
  [[nodiscard]] double probability(std::size_t component, std::span<const std::size_t> event) const;

 private:
  std::vector<GammaParams> posteriors_;
  std::size_t support_ = 0;
  std::vector<std::vector<double>> pmf_;
};

// min over components of the event's probability.
double fgcs_lower_prob(const PredictiveFGCS& fgcs, std::span<const std::size_t> event);

inline constexpr std::size_t kExhaustiveMaxSet = 20;
inline constexpr std::size_t kExhaustiveMaxSupport = 25;

struct BsaRegion {
  std::vector<std::size_t> set;     // sorted
  std::vector<std::size_t> greedy;  // sorted prefix set before improvement
  std::vector<double> component_probs;
  double lower_prob = 0.0;
  bool improved = false;             // local search or exhaustive check shrank the greedy set
  bool exhaustive_verified = false;  // no smaller qualifying set exists
};

// Smallest set found with lower probability >= 1 - alpha: greedy by
// decreasing min_j pmf_j(y), then removal/swap local search, then an
// exhaustive check on small supports.
BsaRegion bsa_ihdr(const PredictiveFGCS& fgcs, double alpha);

}  // namespace consonance
