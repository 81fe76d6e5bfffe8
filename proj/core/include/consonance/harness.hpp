#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "consonance/rational.hpp"
#include "consonance/transducer.hpp"

namespace consonance {

enum class ProcessFamily : std::uint8_t { categorical, gaussian, poisson, polya_urn };

std::string_view to_string(ProcessFamily family) noexcept;

// Generator of an exchangeable sequence Y_1, Y_2, ...
struct ProcessSpec {
  ProcessFamily family = ProcessFamily::categorical;
  std::vector<double> weights;  // categorical probabilities, or initial urn contents
  double mu = 0.0;
  double sigma = 1.0;
  double lambda = 1.0;
  double reinforcement = 1.0;  // balls added per draw (Pólya urn)

  static ProcessSpec categorical(std::vector<double> weights);
  static ProcessSpec gaussian(double mu, double sigma);
  static ProcessSpec poisson(double lambda);
  static ProcessSpec polya_urn(std::vector<double> initial, double reinforcement = 1.0);

  void validate() const;
  [[nodiscard]] bool is_label_valued() const noexcept;
  [[nodiscard]] std::size_t label_count() const noexcept { return weights.size(); }
};

struct CoverageOptions {
  std::size_t grid_points = 201;  // Gaussian candidate grid size
  double grid_half_width_sds = 6.0;
  unsigned threads = 0;           // 0: CONSONANCE_THREADS or hardware concurrency
};

struct CoverageReport {
  std::string family;
  std::size_t n = 0;
  Rational alpha;
  std::size_t trials = 0;
  std::size_t hits = 0;        // held-out point inside the CPR
  std::size_t ihdr_hits = 0;   // held-out point inside the IHDR cut
  std::size_t mismatches = 0;  // trials where the two memberships differ
  double empirical_coverage = 0.0;
  double standard_error = 0.0;
  bool pass = false;  // empirical_coverage >= (1 - alpha) - 3 * standard_error
};

// Seed for trial `index` of a run seeded with `master`.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept;

// Draws n + 1 points per trial, builds the contour from the first n (lifting
// its maximizers to 1 when it is not consonant), and records whether point
// n + 1 falls in the CPR and in the IHDR cut at level alpha.
CoverageReport run_coverage(const ProcessSpec& spec, std::size_t n, const Rational& alpha,
                            const NonconformityMeasure& psi, std::size_t trials, std::uint64_t seed,
                            const CoverageOptions& options = {});

// Built-in measure for the family's data type: one-minus-emp for label
// families, mean-abs for numeric ones.
NonconformityMeasure default_measure(const ProcessSpec& spec);

// One report per (spec, n, alpha) cell, specs outermost. Every cell uses the
// same master seed.
std::vector<CoverageReport> run_uniformity_sweep(std::span<const ProcessSpec> specs, std::span<const std::size_t> ns,
                                                 std::span<const Rational> alphas, const NonconformityMeasure& psi,
                                                 std::size_t trials, std::uint64_t seed,
                                                 const CoverageOptions& options = {});

// As above with default_measure(spec) chosen per spec.
std::vector<CoverageReport> run_uniformity_sweep(std::span<const ProcessSpec> specs, std::span<const std::size_t> ns,
                                                 std::span<const Rational> alphas, std::size_t trials,
                                                 std::uint64_t seed, const CoverageOptions& options = {});

// CONSONANCE_THREADS if set and positive, else hardware concurrency (>= 1).
unsigned default_thread_count();

}  // namespace consonance
