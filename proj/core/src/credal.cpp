#include "consonance/credal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "consonance/error.hpp"
#include "consonance/possibility.hpp"

namespace consonance {
namespace {

template <class T>
bool at_most(const T& lhs, const Rational& rhs) {
  if constexpr (std::is_same_v<T, Rational>) {
    return lhs <= rhs;
  } else {
    return lhs <= rhs.to_double() + kProbabilityTolerance;
  }
}

template <class T>
bool at_least(const T& lhs, const Rational& rhs) {
  if constexpr (std::is_same_v<T, Rational>) {
    return lhs >= rhs;
  } else {
    return lhs >= rhs.to_double() - kProbabilityTolerance;
  }
}

template <class T>
void require_dimension(const BasicProbabilityVector<T>& p, const Contour& c) {
  CONSONANCE_REQUIRE(p.size() == c.size(), ErrorCode::WrongDimension,
                     "probability vector has " + std::to_string(p.size()) + " weights, contour has " +
                         std::to_string(c.size()) + " outcomes");
}

std::vector<double> dirichlet_ones(std::size_t k, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(k);
  for (auto& x : w) x = expo(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

template <class T>
BasicProbabilityVector<T>::BasicProbabilityVector(std::vector<T> weights) : weights_(std::move(weights)) {
  CONSONANCE_REQUIRE(!weights_.empty(), ErrorCode::InvalidArgument, "empty probability vector");
  T total{};
  for (const auto& w : weights_) {
    CONSONANCE_REQUIRE(w >= T{}, ErrorCode::InvalidArgument, "negative probability weight");
    total += w;
  }
  if constexpr (std::is_same_v<T, Rational>) {
    CONSONANCE_REQUIRE(total == Rational(1), ErrorCode::InvalidArgument, "weights sum to " + total.str() + ", not 1");
  } else {
    CONSONANCE_REQUIRE(std::abs(total - 1.0) <= kProbabilityTolerance, ErrorCode::InvalidArgument,
                       "weights do not sum to 1");
  }
}

template class BasicProbabilityVector<double>;
template class BasicProbabilityVector<Rational>;

ProbabilityVector to_real(const ExactProbabilityVector& p) {
  std::vector<double> w;
  w.reserve(p.size());
  for (const auto& x : p.weights()) w.push_back(x.to_double());
  // Rounding may leave the sum a few ulps off 1; that stays inside tolerance.
  return ProbabilityVector(std::move(w));
}

template <class T>
bool in_credal_set(const BasicProbabilityVector<T>& p, const Contour& c) {
  require_dimension(p, c);
  const auto upper = upper_table(c);
  std::vector<T> prob(upper.size(), T{});
  for (EventMask m = 1; m < prob.size(); ++m) {
    const auto low = static_cast<std::size_t>(std::countr_zero(m));
    prob[m] = prob[m & (m - 1)] + p[low];
    if (!at_most(prob[m], upper[m])) return false;
  }
  return true;
}

template <class T>
bool prop2_membership(const BasicProbabilityVector<T>& p, const Contour& c) {
  require_dimension(p, c);
  CONSONANCE_REQUIRE(c.is_consonant(), ErrorCode::NonConsonantContour, "credal set needs a consonant contour");
  CONSONANCE_REQUIRE(c.size() <= kMaxEnumerableOutcomes, ErrorCode::SpaceTooLarge, "membership needs K <= 20");
  for (const auto& alpha : c.breakpoints()) {
    T mass{};
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] > alpha) mass += p[i];
    }
    if (!at_least(mass, Rational(1) - alpha)) return false;
  }
  return true;
}

template bool in_credal_set(const ProbabilityVector&, const Contour&);
template bool in_credal_set(const ExactProbabilityVector&, const Contour&);
template bool prop2_membership(const ProbabilityVector&, const Contour&);
template bool prop2_membership(const ExactProbabilityVector&, const Contour&);

std::vector<ExactProbabilityVector> extreme_points(const Contour& c) {
  CONSONANCE_REQUIRE(c.size() <= kMaxExtremePointOutcomes, ErrorCode::SpaceTooLarge,
                     "extreme points enumerated only for K <= 8");
  const auto upper = upper_table(c);
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<ExactProbabilityVector> out;
  auto rational_less = [](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };
  std::set<std::vector<Rational>, decltype(rational_less)> unique(rational_less);
  do {
    std::vector<Rational> w(c.size(), Rational(0));
    EventMask prefix = 0;
    for (auto i : order) {
      const EventMask next = prefix | (EventMask{1} << i);
      w[i] = upper[next] - upper[prefix];
      prefix = next;
    }
    if (unique.insert(w).second) out.emplace_back(std::move(w));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

double shannon_entropy(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) h -= w * std::log(w);
  }
  return h;
}

LowerEntropy lower_entropy(const Contour& c) {
  auto vertices = extreme_points(c);
  std::size_t best = 0;
  double best_h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto real = to_real(vertices[i]);
    const double h = shannon_entropy(real.weights());
    if (h < best_h) {
      best_h = h;
      best = i;
    }
  }
  return {best_h, vertices[best]};
}

std::vector<ProbabilityVector> sample_credal(const Contour& c, std::size_t count, std::uint64_t seed) {
  CONSONANCE_REQUIRE(c.is_consonant(), ErrorCode::NonConsonantContour, "credal set needs a consonant contour");
  constexpr int kRejectionAttempts = 64;
  std::mt19937_64 rng(seed);

  std::vector<ProbabilityVector> vertices;
  if (c.size() <= kMaxExtremePointOutcomes) {
    for (const auto& v : extreme_points(c)) vertices.push_back(to_real(v));
  }
  const auto mode = static_cast<std::size_t>(
      std::find(c.values().begin(), c.values().end(), Rational(1)) - c.values().begin());

  std::vector<ProbabilityVector> out;
  out.reserve(count);
  while (out.size() < count) {
    bool accepted = false;
    std::vector<double> draw;
    for (int attempt = 0; attempt < kRejectionAttempts && !accepted; ++attempt) {
      draw = dirichlet_ones(c.size(), rng);
      ProbabilityVector candidate(draw);
      if (in_credal_set(candidate, c)) {
        out.push_back(std::move(candidate));
        accepted = true;
      }
    }
    if (accepted) continue;

    if (!vertices.empty()) {
      const auto mix = dirichlet_ones(vertices.size(), rng);
      std::vector<double> w(c.size(), 0.0);
      for (std::size_t v = 0; v < vertices.size(); ++v) {
        for (std::size_t i = 0; i < c.size(); ++i) w[i] += mix[v] * vertices[v][i];
      }
      out.emplace_back(std::move(w));
      continue;
    }

    // Bisect on t in (1 - t) * draw + t * delta_mode; t = 1 is always a member.
    double lo = 0.0;
    double hi = 1.0;
    auto at = [&](double t) {
      std::vector<double> w(draw.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = (1.0 - t) * draw[i] + (i == mode ? t : 0.0);
      return w;
    };
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (in_credal_set(ProbabilityVector(at(mid)), c)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.emplace_back(at(hi));
  }
  return out;
}

std::pair<double, double> ternary_coords(const ProbabilityVector& p) {
  CONSONANCE_REQUIRE(p.size() == 3, ErrorCode::WrongDimension, "ternary coordinates need exactly three outcomes");
  return {p[1] + 0.5 * p[2], p[2] * std::sqrt(3.0) / 2.0};
}

}  // namespace consonance
