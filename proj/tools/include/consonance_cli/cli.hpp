#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "consonance/io.hpp"
#include "consonance/rational.hpp"

namespace consonance::cli {

enum class Subcommand { transduce, possibility, region, credal, bsa, coverage, table1 };
using io::NumericMode;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

// kind is one of UnknownFlag, MissingInput, AlphaOutOfRange, BadValue.
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Thrown for --help / --version; the payload is the text to print.
struct HelpRequested {
  std::string text;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::table1;
  std::string action;  // possibility/credal action, or "prop1" for region

  // inputs
  std::string data;
  std::string space;
  std::string contour;
  std::string spec;
  std::string priors;  // inline JSON or a path
  std::string event;   // comma-separated labels for upper/lower

  std::string out;
  std::optional<std::uint64_t> seed;
  NumericMode numeric = NumericMode::rational;
  bool numeric_explicit = false;
  bool json = false;

  std::string psi;
  std::string adjust = "double-prime";
  std::string kind = "cpr";
  std::vector<Rational> alphas;
  std::size_t order = 2;  // check-alt / check-mon
  std::vector<Rational> p;
  std::size_t count = 200;
  std::vector<std::size_t> ns;
  std::size_t trials = 10000;
};

RunConfig parse_args(const std::vector<std::string>& args);
RunConfig parse_args(int argc, const char* const* argv);

// Executes the configured subcommand; returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with usage/I-O error mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace consonance::cli
