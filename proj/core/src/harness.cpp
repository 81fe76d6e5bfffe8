#include "consonance/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <random>
#include <thread>

#include "consonance/contour.hpp"
#include "consonance/error.hpp"
#include "consonance/region.hpp"

namespace consonance {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct TrialOutcome {
  bool in_cpr = false;
  bool in_cut = false;
};

std::vector<std::size_t> draw_labels(const ProcessSpec& spec, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  out.reserve(count);
  if (spec.family == ProcessFamily::categorical) {
    std::discrete_distribution<std::size_t> pick(spec.weights.begin(), spec.weights.end());
    for (std::size_t i = 0; i < count; ++i) out.push_back(pick(rng));
    return out;
  }
  std::vector<double> urn = spec.weights;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double total = std::accumulate(urn.begin(), urn.end(), 0.0);
    double u = unit(rng) * total;
    std::size_t k = 0;
    while (k + 1 < urn.size() && u >= urn[k]) {
      u -= urn[k];
      ++k;
    }
    urn[k] += spec.reinforcement;
    out.push_back(k);
  }
  return out;
}

std::vector<double> draw_reals(const ProcessSpec& spec, std::size_t count, std::mt19937_64& rng) {
  std::vector<double> out;
  out.reserve(count);
  if (spec.family == ProcessFamily::gaussian) {
    std::normal_distribution<double> normal(spec.mu, spec.sigma);
    for (std::size_t i = 0; i < count; ++i) out.push_back(normal(rng));
  } else {
    std::poisson_distribution<std::int64_t> poisson(spec.lambda);
    for (std::size_t i = 0; i < count; ++i) out.push_back(static_cast<double>(poisson(rng)));
  }
  return out;
}

TrialOutcome membership(const Contour& raw, std::size_t held_out, const Rational& alpha) {
  const Contour c = raw.is_consonant() ? raw : adjust_double_prime(raw);
  return {cpr(c, alpha).event.contains(held_out), ihdr_cut(c, alpha).event.contains(held_out)};
}

class TrialRunner {
 public:
  TrialRunner(const ProcessSpec& spec, std::size_t n, Rational alpha, const NonconformityMeasure& psi,
              const CoverageOptions& options)
      : spec_(spec), n_(n), alpha_(std::move(alpha)), psi_(psi), options_(options) {
    if (spec_.is_label_valued()) {
      CONSONANCE_REQUIRE(psi_.accepts_label_data(), ErrorCode::InvalidSpec,
                         psi_.name() + " cannot score " + std::string(to_string(spec_.family)) + " data");
      label_space_ = std::make_shared<const OutcomeSpace>(FiniteOutcomeSpace::indexed(spec_.label_count()));
    } else {
      CONSONANCE_REQUIRE(psi_.accepts_real_data(), ErrorCode::InvalidSpec,
                         psi_.name() + " cannot score " + std::string(to_string(spec_.family)) + " data");
      if (spec_.family == ProcessFamily::gaussian) {
        candidate_space_ = std::make_shared<const OutcomeSpace>(FiniteOutcomeSpace::indexed(options_.grid_points + 1));
      }
    }
  }

  TrialOutcome run(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    if (spec_.is_label_valued()) {
      auto draws = draw_labels(spec_, n_ + 1, rng);
      const std::size_t held_out = draws.back();
      draws.pop_back();
      std::vector<Rational> values;
      values.reserve(spec_.label_count());
      for (std::size_t y = 0; y < spec_.label_count(); ++y) {
        values.push_back(conformal_transducer(draws, y, spec_.label_count(), psi_));
      }
      return membership(Contour(label_space_, std::move(values), Provenance::raw), held_out, alpha_);
    }

    auto draws = draw_reals(spec_, n_ + 1, rng);
    const double held_out = draws.back();
    draws.pop_back();
    std::vector<double> candidates = spec_.family == ProcessFamily::gaussian ? gaussian_grid(draws)
                                                                             : integer_grid(draws, held_out);
    std::size_t held_index = 0;
    if (spec_.family == ProcessFamily::gaussian) {
      held_index = candidates.size();
      candidates.push_back(held_out);
    } else {
      held_index = static_cast<std::size_t>(held_out);
    }
    auto values = transduce_candidates(draws, candidates, psi_);
    auto space = candidate_space_ ? candidate_space_
                                  : std::make_shared<const OutcomeSpace>(FiniteOutcomeSpace::indexed(candidates.size()));
    return membership(Contour(std::move(space), std::move(values), Provenance::raw), held_index, alpha_);
  }

 private:
  // Sample mean +- k sample sds; sd falls back to 1 when it is undefined or zero.
  std::vector<double> gaussian_grid(const std::vector<double>& data) const {
    double mean = 0.0;
    double sd = 1.0;
    if (!data.empty()) {
      mean = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(data.size());
    }
    if (data.size() >= 2) {
      double ss = 0.0;
      for (double x : data) ss += (x - mean) * (x - mean);
      const double s = std::sqrt(ss / static_cast<double>(data.size() - 1));
      if (s > 0.0) sd = s;
    }
    const double half = options_.grid_half_width_sds * sd;
    return GridOutcomeSpace(mean - half, mean + half, options_.grid_points).points();
  }

  // Integers 0..U covering the data, the held-out point and mean + 6 sd.
  static std::vector<double> integer_grid(const std::vector<double>& data, double held_out) {
    double top = held_out;
    for (double x : data) top = std::max(top, x);
    double mean = 0.0;
    if (!data.empty()) mean = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(data.size());
    top = std::max(top, std::ceil(mean + 6.0 * std::sqrt(std::max(mean, 1.0))));
    std::vector<double> out(static_cast<std::size_t>(top) + 1);
    std::iota(out.begin(), out.end(), 0.0);
    return out;
  }

  const ProcessSpec& spec_;
  std::size_t n_;
  Rational alpha_;
  const NonconformityMeasure& psi_;
  CoverageOptions options_;
  std::shared_ptr<const OutcomeSpace> label_space_;
  std::shared_ptr<const OutcomeSpace> candidate_space_;
};

}  // namespace

std::string_view to_string(ProcessFamily family) noexcept {
  switch (family) {
    case ProcessFamily::categorical: return "categorical";
    case ProcessFamily::gaussian: return "gaussian";
    case ProcessFamily::poisson: return "poisson";
    case ProcessFamily::polya_urn: return "polya-urn";
  }
  return "categorical";
}

ProcessSpec ProcessSpec::categorical(std::vector<double> weights) {
  ProcessSpec s;
  s.family = ProcessFamily::categorical;
  s.weights = std::move(weights);
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::gaussian(double mu, double sigma) {
  ProcessSpec s;
  s.family = ProcessFamily::gaussian;
  s.mu = mu;
  s.sigma = sigma;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::poisson(double lambda) {
  ProcessSpec s;
  s.family = ProcessFamily::poisson;
  s.lambda = lambda;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::polya_urn(std::vector<double> initial, double reinforcement) {
  ProcessSpec s;
  s.family = ProcessFamily::polya_urn;
  s.weights = std::move(initial);
  s.reinforcement = reinforcement;
  s.validate();
  return s;
}

void ProcessSpec::validate() const {
  switch (family) {
    case ProcessFamily::categorical: {
      CONSONANCE_REQUIRE(!weights.empty(), ErrorCode::InvalidSpec, "categorical family needs weights");
      double total = 0.0;
      for (double w : weights) {
        CONSONANCE_REQUIRE(std::isfinite(w) && w >= 0.0, ErrorCode::InvalidSpec, "categorical weight must be >= 0");
        total += w;
      }
      CONSONANCE_REQUIRE(std::abs(total - 1.0) <= 1e-9, ErrorCode::InvalidSpec, "categorical weights must sum to 1");
      break;
    }
    case ProcessFamily::gaussian:
      CONSONANCE_REQUIRE(std::isfinite(mu) && std::isfinite(sigma) && sigma > 0.0, ErrorCode::InvalidSpec,
                         "gaussian family needs finite mu and sigma > 0");
      break;
    case ProcessFamily::poisson:
      CONSONANCE_REQUIRE(std::isfinite(lambda) && lambda > 0.0, ErrorCode::InvalidSpec, "poisson family needs lambda > 0");
      break;
    case ProcessFamily::polya_urn:
      CONSONANCE_REQUIRE(!weights.empty(), ErrorCode::InvalidSpec, "polya urn needs initial contents");
      for (double w : weights) {
        CONSONANCE_REQUIRE(std::isfinite(w) && w > 0.0, ErrorCode::InvalidSpec, "initial urn contents must be > 0");
      }
      CONSONANCE_REQUIRE(std::isfinite(reinforcement) && reinforcement >= 0.0, ErrorCode::InvalidSpec,
                         "urn reinforcement must be >= 0");
      break;
  }
}

bool ProcessSpec::is_label_valued() const noexcept {
  return family == ProcessFamily::categorical || family == ProcessFamily::polya_urn;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("CONSONANCE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

CoverageReport run_coverage(const ProcessSpec& spec, std::size_t n, const Rational& alpha,
                            const NonconformityMeasure& psi, std::size_t trials, std::uint64_t seed,
                            const CoverageOptions& options) {
  spec.validate();
  CONSONANCE_REQUIRE(alpha >= Rational(0) && alpha < Rational(1), ErrorCode::AlphaOutOfRange,
                     "coverage alpha must lie in [0, 1)");
  CONSONANCE_REQUIRE(trials >= 1, ErrorCode::InvalidArgument, "coverage needs at least one trial");

  const TrialRunner runner(spec, n, alpha, psi, options);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(options.threads == 0 ? default_thread_count() : options.threads, trials));

  struct Counts {
    std::size_t hits = 0;
    std::size_t ihdr_hits = 0;
    std::size_t mismatches = 0;
  };
  std::vector<Counts> partial(workers);
  auto work = [&](unsigned w) {
    for (std::size_t t = w; t < trials; t += workers) {
      const auto outcome = runner.run(trial_seed(seed, t));
      partial[w].hits += outcome.in_cpr ? 1 : 0;
      partial[w].ihdr_hits += outcome.in_cut ? 1 : 0;
      partial[w].mismatches += outcome.in_cpr != outcome.in_cut ? 1 : 0;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  CoverageReport report;
  report.family = std::string(to_string(spec.family));
  report.n = n;
  report.alpha = alpha;
  report.trials = trials;
  for (const auto& c : partial) {
    report.hits += c.hits;
    report.ihdr_hits += c.ihdr_hits;
    report.mismatches += c.mismatches;
  }
  const double cov = static_cast<double>(report.hits) / static_cast<double>(trials);
  report.empirical_coverage = cov;
  report.standard_error = std::sqrt(cov * (1.0 - cov) / static_cast<double>(trials));
  report.pass = cov >= (1.0 - alpha.to_double()) - 3.0 * report.standard_error;
  return report;
}

std::vector<CoverageReport> run_uniformity_sweep(std::span<const ProcessSpec> specs, std::span<const std::size_t> ns,
                                                 std::span<const Rational> alphas, const NonconformityMeasure& psi,
                                                 std::size_t trials, std::uint64_t seed,
                                                 const CoverageOptions& options) {
  std::vector<CoverageReport> out;
  out.reserve(specs.size() * ns.size() * alphas.size());
  for (const auto& spec : specs) {
    for (auto n : ns) {
      for (const auto& alpha : alphas) out.push_back(run_coverage(spec, n, alpha, psi, trials, seed, options));
    }
  }
  return out;
}

NonconformityMeasure default_measure(const ProcessSpec& spec) {
  return spec.is_label_valued() ? NonconformityMeasure::one_minus_empirical() : NonconformityMeasure::mean_abs();
}

std::vector<CoverageReport> run_uniformity_sweep(std::span<const ProcessSpec> specs, std::span<const std::size_t> ns,
                                                 std::span<const Rational> alphas, std::size_t trials,
                                                 std::uint64_t seed, const CoverageOptions& options) {
  std::vector<CoverageReport> out;
  out.reserve(specs.size() * ns.size() * alphas.size());
  for (const auto& spec : specs) {
    const auto psi = default_measure(spec);
    for (auto n : ns) {
      for (const auto& alpha : alphas) out.push_back(run_coverage(spec, n, alpha, psi, trials, seed, options));
    }
  }
  return out;
}

}  // namespace consonance
