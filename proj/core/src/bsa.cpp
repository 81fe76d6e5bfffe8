#include "consonance/bsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "consonance/error.hpp"

namespace consonance {
namespace {

struct Tracker {
  const PredictiveFGCS& fgcs;
  std::vector<double> sums;

  explicit Tracker(const PredictiveFGCS& f) : fgcs(f), sums(f.components(), 0.0) {}

  void add(std::size_t y) {
    for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += fgcs.pmf(j, y);
  }
  void remove(std::size_t y) {
    for (std::size_t j = 0; j < sums.size(); ++j) sums[j] -= fgcs.pmf(j, y);
  }
  [[nodiscard]] double lower() const { return *std::min_element(sums.begin(), sums.end()); }
  [[nodiscard]] double lower_without(std::size_t y) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sums.size(); ++j) best = std::min(best, sums[j] - fgcs.pmf(j, y));
    return best;
  }
  [[nodiscard]] double lower_swapped(std::size_t out, std::size_t in) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sums.size(); ++j) best = std::min(best, sums[j] - fgcs.pmf(j, out) + fgcs.pmf(j, in));
    return best;
  }
};

// Lower probability of the event, summed fresh so the reported coverage does
// not carry incremental rounding.
double exact_lower(const PredictiveFGCS& fgcs, const std::vector<std::size_t>& set) {
  return fgcs_lower_prob(fgcs, set);
}

// First k-subset of {0..m-1} (lexicographic) meeting the threshold.
bool find_subset(const PredictiveFGCS& fgcs, std::size_t k, double threshold, std::vector<std::size_t>& found) {
  const std::size_t m = fgcs.support_size();
  if (k > m) return false;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (fgcs_lower_prob(fgcs, idx) >= threshold) {
      found = idx;
      return true;
    }
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == m - k + pos - 1) --pos;
    if (pos == 0) return false;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

}  // namespace

void GammaParams::validate() const {
  CONSONANCE_REQUIRE(std::isfinite(shape) && shape > 0.0 && std::isfinite(rate) && rate > 0.0,
                     ErrorCode::InvalidArgument, "Gamma shape and rate must be positive");
}

GammaParams posterior_update(const GammaParams& prior, std::span<const std::int64_t> counts) {
  prior.validate();
  GammaParams post = prior;
  for (auto y : counts) {
    CONSONANCE_REQUIRE(y >= 0, ErrorCode::NegativeCount, "Poisson count " + std::to_string(y) + " is negative");
    post.shape += static_cast<double>(y);
  }
  post.rate += static_cast<double>(counts.size());
  return post;
}

double predictive_log_pmf(const GammaParams& post, std::uint64_t y) {
  post.validate();
  const double a = post.shape;
  const double b = post.rate;
  const auto yd = static_cast<double>(y);
  return std::lgamma(yd + a) - std::lgamma(a) - std::lgamma(yd + 1.0) + a * std::log(b / (b + 1.0)) -
         yd * std::log1p(b);
}

double predictive_pmf(const GammaParams& post, std::uint64_t y) { return std::exp(predictive_log_pmf(post, y)); }

PredictiveFGCS::PredictiveFGCS(std::vector<GammaParams> posteriors) : posteriors_(std::move(posteriors)) {
  CONSONANCE_REQUIRE(!posteriors_.empty(), ErrorCode::InvalidArgument, "predictive credal set needs a component");
  pmf_.resize(posteriors_.size());
  std::vector<double> cdf(posteriors_.size(), 0.0);
  auto covered = [&] {
    return std::all_of(cdf.begin(), cdf.end(), [](double v) { return v >= 1.0 - kTruncationTail; });
  };
  std::size_t y = 0;
  while (!covered()) {
    CONSONANCE_REQUIRE(y < kMaxSupport, ErrorCode::TruncationInsufficient,
                       "support mass below 1 - 1e-10 after " + std::to_string(kMaxSupport) + " points");
    for (std::size_t j = 0; j < posteriors_.size(); ++j) {
      const double p = predictive_pmf(posteriors_[j], y);
      pmf_[j].push_back(p);
      cdf[j] += p;
    }
    ++y;
  }
  support_ = y;
}

double PredictiveFGCS::pmf(std::size_t component, std::size_t y) const {
  if (y >= support_) return 0.0;
  return pmf_.at(component)[y];
}

double PredictiveFGCS::probability(std::size_t component, std::span<const std::size_t> event) const {
  double total = 0.0;
  for (auto y : event) total += pmf(component, y);
  return total;
}

double fgcs_lower_prob(const PredictiveFGCS& fgcs, std::span<const std::size_t> event) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < fgcs.components(); ++j) best = std::min(best, fgcs.probability(j, event));
  return best;
}

BsaRegion bsa_ihdr(const PredictiveFGCS& fgcs, double alpha) {
  CONSONANCE_REQUIRE(alpha > 0.0 && alpha < 1.0, ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
  const double threshold = 1.0 - alpha;
  const std::size_t m = fgcs.support_size();

  std::vector<double> score(m);
  for (std::size_t y = 0; y < m; ++y) {
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < fgcs.components(); ++j) s = std::min(s, fgcs.pmf(j, y));
    score[y] = s;
  }
  std::vector<std::size_t> ranking(m);
  std::iota(ranking.begin(), ranking.end(), 0);
  std::stable_sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

  std::vector<std::size_t> set;
  Tracker tracker(fgcs);
  for (auto y : ranking) {
    if (exact_lower(fgcs, set) >= threshold) break;
    set.push_back(y);
    tracker.add(y);
  }
  CONSONANCE_REQUIRE(exact_lower(fgcs, set) >= threshold, ErrorCode::TruncationInsufficient,
                     "truncated support cannot reach the requested coverage");

  BsaRegion region;
  region.greedy = set;
  std::sort(region.greedy.begin(), region.greedy.end());

  // Local search: drop redundant points; otherwise swap one point for an
  // outside one if that raises the lower probability, then retry.
  const std::size_t max_rounds = m * m + 1;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    bool changed = false;
    for (std::size_t i = set.size(); i-- > 0;) {
      if (tracker.lower_without(set[i]) >= threshold) {
        tracker.remove(set[i]);
        set.erase(set.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
    if (changed) continue;
    std::vector<bool> inside(m, false);
    for (auto y : set) inside[y] = true;
    const double current = tracker.lower();
    for (std::size_t i = 0; i < set.size() && !changed; ++i) {
      for (std::size_t z = 0; z < m && !changed; ++z) {
        if (inside[z]) continue;
        if (tracker.lower_swapped(set[i], z) > current + 1e-15) {
          tracker.remove(set[i]);
          tracker.add(z);
          set[i] = z;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  // Swaps alone never shrink the set; keep them only if removals followed.
  if (set.size() == region.greedy.size() || exact_lower(fgcs, set) < threshold) {
    set = region.greedy;
  }

  if (set.size() <= kExhaustiveMaxSet && m <= kExhaustiveMaxSupport) {
    std::vector<std::size_t> smaller;
    while (!set.empty() && find_subset(fgcs, set.size() - 1, threshold, smaller)) set = smaller;
    region.exhaustive_verified = true;
  }

  std::sort(set.begin(), set.end());
  region.improved = set != region.greedy;
  region.set = std::move(set);
  region.lower_prob = exact_lower(fgcs, region.set);
  for (std::size_t j = 0; j < fgcs.components(); ++j) region.component_probs.push_back(fgcs.probability(j, region.set));
  return region;
}

}  // namespace consonance
