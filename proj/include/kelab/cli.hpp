#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kelab/model_densities.hpp"
#include "kelab/scaling.hpp"

namespace kelab::cli {

enum class Command { verify_scaling, gas_converge, paradox, search, tabulate };
enum class OutputFormat { tsv, json };
enum class FunctionalChoice { vw, tf, tf_corrected, ks };

std::string to_string(Command command);
std::string to_string(OutputFormat format);
std::string to_string(FunctionalChoice functional);

struct RunSpec {
  Command command = Command::tabulate;
  DensityFamily family = DensityFamily::gaussian;
  double electrons = 1.0;
  double width = 1.0;
  int grid = 32;
  // Zipped tuple lists; a list of length one is broadcast. All empty means
  // the standard twelve-tuple sweep.
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> m;
  std::vector<double> p;
  std::optional<FunctionalChoice> functional;  // every functional when unset
  std::vector<std::int64_t> ladder{100, 1000, 10000, 100000};
  double nbar = 1.0;
  OutputFormat format = OutputFormat::tsv;
  std::uint64_t seed = 0;  // 0 keeps the unperturbed search guess
  int orbitals = 1;
  double penalty = 1e10;
  int max_iterations = 500;

  /// Throws Error(InvalidArgument) on out-of-range fields.
  void validate() const;
  std::vector<ScalingParams> tuples() const;
  /// Canonical single-line echo of every field.
  std::string echo() const;
};

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> failures;  // in-run assertions that did not hold

  bool passed() const { return failures.empty(); }
};

/// Runs the command and collects its table; does not print.
Report execute(const RunSpec& spec);

void write_tsv(const Report& report, std::ostream& out);
void write_json(const Report& report, std::ostream& out);

/// Executes and prints the report. Returns 0 when every assertion holds,
/// 1 on an assertion failure and 2 on a validation error.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Parses command-line arguments into a RunSpec, then runs it.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Seventeen significant digits, "%.17g".
std::string format_double(double value);

}  // namespace kelab::cli
