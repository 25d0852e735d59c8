#include "kelab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kelab/constants.hpp"
#include "kelab/constrained_search.hpp"
#include "kelab/electron_gas.hpp"
#include "kelab/errors.hpp"
#include "kelab/functionals.hpp"

#ifndef KELAB_VERSION
#define KELAB_VERSION "0.0.0"
#endif

namespace kelab::cli {

namespace {

constexpr double exact_tolerance = 1e-12;
constexpr double continuum_tolerance = 0.02;
constexpr double search_residual_tolerance = 1e-4;
constexpr double search_energy_tolerance = 1e-6;

// Closed-shell gas used for the gas route of the paradox table.
constexpr std::int64_t paradox_gas_electrons = 14;

double relative_deviation(double observed, double predicted) {
  if (observed == predicted) return 0.0;
  return std::abs(observed - predicted) / std::abs(predicted);
}

// Ratio of two energies; 0/0 is taken to obey any factor.
double observed_factor(double scaled, double unscaled, double predicted) {
  if (unscaled == 0.0 && scaled == 0.0) return predicted;
  return scaled / unscaled;
}

std::string tuple_label(const ScalingParams& s) {
  return "alpha=" + format_double(s.alpha) + " beta=" + format_double(s.beta) + " m=" + format_double(s.m) +
         " p=" + format_double(s.p);
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
  return out.empty() ? "default" : out;
}

DensityField sample_3d(const RunSpec& spec) {
  const DensityModel model(spec.family, spec.electrons, spec.width);
  return sample_density(model, default_grid(model, 3, spec.grid));
}

std::vector<FunctionalChoice> selected_functionals(const RunSpec& spec) {
  if (spec.functional) return {*spec.functional};
  return {FunctionalChoice::vw, FunctionalChoice::tf, FunctionalChoice::tf_corrected, FunctionalChoice::ks};
}

void check(Report& report, double deviation, double tolerance, const std::string& what) {
  if (!(deviation <= tolerance)) {
    report.failures.push_back(what + ": deviation " + format_double(deviation) + " exceeds " +
                              format_double(tolerance));
  }
}

Report verify_scaling(const RunSpec& spec) {
  Report report;
  report.columns = {"functional",       "alpha",           "beta", "m", "p", "observed_factor",
                    "predicted_factor", "relative_deviation"};
  const DensityField n = sample_3d(spec);
  const auto tuples = spec.tuples();

  for (const FunctionalChoice f : selected_functionals(spec)) {
    double base = 0.0;
    std::optional<OrbitalSet> orbitals;
    switch (f) {
      case FunctionalChoice::vw: base = t_vw(n).value; break;
      case FunctionalChoice::tf:
      case FunctionalChoice::tf_corrected: base = t_tf(n).value; break;
      case FunctionalChoice::ks:
        orbitals.emplace(doubly_occupied_orbital_set(n));
        base = t_s_orbital(*orbitals).value;
        break;
    }
    for (const auto& s : tuples) {
      double scaled = 0.0;
      double predicted = s.kinetic_factor();
      switch (f) {
        case FunctionalChoice::vw: scaled = t_vw(scale_density(n, s)).value; break;
        case FunctionalChoice::tf:
          scaled = t_tf(scale_density(n, s)).value;
          predicted = s.naive_tf_factor();
          break;
        case FunctionalChoice::tf_corrected: scaled = tf_scaled_corrected(n, s).value; break;
        case FunctionalChoice::ks: scaled = t_s_orbital(scale_orbitals(*orbitals, s)).value; break;
      }
      const double observed = observed_factor(scaled, base, predicted);
      const double deviation = relative_deviation(observed, predicted);
      check(report, deviation, exact_tolerance, to_string(f) + " " + tuple_label(s));
      report.rows.push_back({to_string(f), s.alpha, s.beta, s.m, s.p, observed, predicted, deviation});
    }
  }
  return report;
}

Report gas_converge(const RunSpec& spec) {
  Report report;
  report.columns = {"electrons", "edge", "energy_per_volume", "continuum", "relative_error"};
  const auto rows = continuum_convergence(spec.nbar, spec.ladder);
  for (const auto& r : rows) {
    report.rows.push_back({r.electrons, r.edge, r.energy_per_volume, r.continuum, r.relative_error});
  }
  const auto& last = rows.back();
  check(report, last.relative_error, continuum_tolerance,
        "continuum limit at N_e=" + std::to_string(last.electrons));
  if (rows.size() > 1 && !(last.relative_error <= rows.front().relative_error)) {
    report.failures.push_back("error does not decrease from the first to the last rung");
  }
  return report;
}

Report paradox(const RunSpec& spec) {
  Report report;
  report.columns = {"alpha",           "beta",          "m",
                    "p",               "tf_unscaled",   "tf_naive",
                    "naive_factor",    "naive_predicted", "tf_corrected",
                    "corrected_factor", "kinetic_factor", "gas_factor",
                    "naive_over_corrected", "ratio_predicted", "max_deviation"};
  const DensityField n = sample_3d(spec);
  const double base = t_tf(n).value;
  for (const auto& s : spec.tuples()) {
    const double naive = t_tf(scale_density(n, s)).value;
    const double corrected = tf_scaled_corrected(n, s).value;
    const double naive_factor = naive / base;
    const double corrected_factor = corrected / base;
    const double gas_factor = scaled_gas_identity(1.0, paradox_gas_electrons, s).observed_factor;
    const double ratio = naive / corrected;
    const double ratio_predicted = std::pow(s.alpha, 2.0 * s.m / 3.0) / std::pow(s.beta, 2.0 * s.p);

    const double deviation = std::max({relative_deviation(naive_factor, s.naive_tf_factor()),
                                       relative_deviation(corrected_factor, s.kinetic_factor()),
                                       relative_deviation(gas_factor, s.kinetic_factor()),
                                       relative_deviation(ratio, ratio_predicted)});
    check(report, deviation, exact_tolerance, "paradox " + tuple_label(s));
    report.rows.push_back({s.alpha, s.beta, s.m, s.p, base, naive, naive_factor, s.naive_tf_factor(), corrected,
                           corrected_factor, s.kinetic_factor(), gas_factor, ratio, ratio_predicted, deviation});
  }
  return report;
}

Report search(const RunSpec& spec) {
  Report report;
  report.columns = {"orbitals",         "penalty_weight", "iterations",    "converged",
                    "energy",           "vw_reference",   "relative_error", "penalty",
                    "density_residual", "gradient_norm",  "orthogonality_defect"};
  const DensityModel model(spec.family, spec.electrons, spec.width);
  const DensityField target = sample_density(model, default_grid(model, 1, spec.grid));

  SearchConfig cfg;
  cfg.orbital_count = spec.orbitals;
  cfg.penalty_weight = spec.penalty;
  cfg.max_iterations = spec.max_iterations;
  if (spec.seed != 0) cfg.restart_seed = spec.seed;
  const SearchResult result = minimize_ts(target, cfg);

  // One orbital sqrt(n) carries the von Weizsacker energy of the target.
  const double reference = spectral_kinetic(doubly_occupied_orbital_set(target));
  const double error = (result.energy - reference) / reference;

  if (!result.converged) report.failures.push_back("search did not converge");
  check(report, result.density_residual, search_residual_tolerance, "density residual");
  if (spec.orbitals == 1) {
    check(report, std::abs(error), search_energy_tolerance, "single-orbital energy vs vW");
  } else if (error < -search_energy_tolerance) {
    report.failures.push_back("energy falls below the vW lower bound");
  }
  report.rows.push_back({static_cast<std::int64_t>(spec.orbitals), spec.penalty,
                         static_cast<std::int64_t>(result.iterations), result.converged, result.energy, reference,
                         error, result.penalty, result.density_residual, result.gradient_norm,
                         result.orbitals.orthogonality_defect()});
  return report;
}

Report tabulate(const RunSpec& spec) {
  Report report;
  report.columns = {"density", "functional", "value", "analytic", "relative_error"};
  const std::vector<DensityModel> oracles = {
      {DensityFamily::gaussian, 1.0, 1.0},
      {DensityFamily::hydrogenic_1s, 2.0, 1.0},
      {DensityFamily::uniform_box, 1.0, 1.0},
  };
  auto add = [&](const std::string& density, const std::string& functional, double value, double analytic) {
    const double error = analytic == 0.0 ? std::abs(value) : std::abs(value - analytic) / std::abs(analytic);
    report.rows.push_back({density, functional, value, analytic, error});
    return error;
  };
  for (const auto& model : oracles) {
    const DensityField n = sample_density(model, default_grid(model, 3, spec.grid));
    const std::string name = to_string(model.family) + " ne=" + format_double(model.electrons) +
                             " width=" + format_double(model.width);
    add(name, "vw", t_vw(n).value, analytic_t_vw(model));
    const double tf_error = add(name, "tf", t_tf(n).value, analytic_t_tf(model));
    if (model.family == DensityFamily::uniform_box) check(report, tf_error, exact_tolerance, "uniform tf");
    const OrbitalSet phi = doubly_occupied_orbital_set(n);
    add(name, "ks", t_s_orbital(phi).value, analytic_t_vw(model));
    add(name, "ks_gradient", t_s_orbital_gradient_form(phi).value, analytic_t_vw(model));
  }
  const BoxGas gas = fill_fermi_sphere(1.0, 14);
  const double gas_error = add("gas ne=14 edge=1", "gas_discrete", kinetic_discrete(gas).value, 6.0 * 4.0 * pi * pi);
  check(report, gas_error, exact_tolerance, "closed-shell gas");
  return report;
}

template <class T>
std::vector<T> broadcast(const std::vector<T>& values, std::size_t size, T fallback) {
  if (values.empty()) return std::vector<T>(size, fallback);
  if (values.size() == 1) return std::vector<T>(size, values.front());
  return values;
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, cell);
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

template <class Enum>
std::map<std::string, Enum> name_map(std::initializer_list<Enum> values) {
  std::map<std::string, Enum> out;
  for (Enum v : values) out.emplace(to_string(v), v);
  return out;
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::verify_scaling: return "verify-scaling";
    case Command::gas_converge: return "gas-converge";
    case Command::paradox: return "paradox";
    case Command::search: return "search";
    case Command::tabulate: return "tabulate";
  }
  return "unknown";
}

std::string to_string(OutputFormat format) { return format == OutputFormat::json ? "json" : "tsv"; }

std::string to_string(FunctionalChoice functional) {
  switch (functional) {
    case FunctionalChoice::vw: return "vw";
    case FunctionalChoice::tf: return "tf";
    case FunctionalChoice::tf_corrected: return "tf-corrected";
    case FunctionalChoice::ks: return "ks";
  }
  return "unknown";
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void RunSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (grid < 16 || grid > 256) fail("--grid must lie in [16, 256]");
  const std::size_t lengths[] = {alpha.size(), beta.size(), m.size(), p.size()};
  const std::size_t longest = *std::max_element(std::begin(lengths), std::end(lengths));
  for (std::size_t len : lengths) {
    if (len > 1 && len != longest) fail("--alpha, --beta, --m and --p lists must have equal length or length 1");
  }
  if (!(electrons > 0.0) || !std::isfinite(electrons)) fail("--ne must be positive");
  if (!(width > 0.0) || !std::isfinite(width)) fail("--width must be positive");
  if (!(nbar > 0.0) || !std::isfinite(nbar)) fail("--nbar must be positive");
  if (ladder.empty()) fail("--ladder must not be empty");
  for (auto n : ladder) {
    if (n < 2) fail("--ladder entries must be integers >= 2");
  }
  if (orbitals != 1 && orbitals != 2) fail("--orbitals must be 1 or 2");
  if (!(penalty > 0.0) || !std::isfinite(penalty)) fail("--penalty must be positive");
  if (max_iterations < 1) fail("--max-iter must be positive");
  DensityModel(family, electrons, width);
  tuples();
}

std::vector<ScalingParams> RunSpec::tuples() const {
  if (alpha.empty() && beta.empty() && m.empty() && p.empty()) return standard_sweep();
  const std::size_t size = std::max({alpha.size(), beta.size(), m.size(), p.size()});
  const auto a = broadcast(alpha, size, 1.0);
  const auto b = broadcast(beta, size, 1.0);
  const auto mm = broadcast(m, size, 1.0);
  const auto pp = broadcast(p, size, 1.0);
  std::vector<ScalingParams> out;
  for (std::size_t i = 0; i < size; ++i) out.emplace_back(a[i], b[i], mm[i], pp[i]);
  return out;
}

std::string RunSpec::echo() const {
  std::string ladder_text;
  for (std::size_t i = 0; i < ladder.size(); ++i) ladder_text += (i ? "," : "") + std::to_string(ladder[i]);
  std::ostringstream s;
  s << to_string(command) << " --family " << to_string(family) << " --ne " << format_double(electrons)
    << " --width " << format_double(width) << " --grid " << grid << " --alpha " << join(alpha) << " --beta "
    << join(beta) << " --m " << join(m) << " --p " << join(p) << " --functional "
    << (functional ? to_string(*functional) : "all") << " --ladder " << ladder_text << " --nbar "
    << format_double(nbar) << " --format " << to_string(format) << " --seed " << seed << " --orbitals "
    << orbitals << " --penalty " << format_double(penalty) << " --max-iter " << max_iterations;
  return s.str();
}

Report execute(const RunSpec& spec) {
  spec.validate();
  Report report;
  switch (spec.command) {
    case Command::verify_scaling: report = verify_scaling(spec); break;
    case Command::gas_converge: report = gas_converge(spec); break;
    case Command::paradox: report = paradox(spec); break;
    case Command::search: report = search(spec); break;
    case Command::tabulate: report = tabulate(spec); break;
  }
  report.command = to_string(spec.command);
  report.metadata = {{"version", KELAB_VERSION}, {"spec", spec.echo()}};
  return report;
}

void write_tsv(const Report& report, std::ostream& out) {
  for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "\t" : "") << report.columns[i];
  out << '\n';
  for (const auto& [key, value] : report.metadata) out << "# " << key << '\t' << value << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << cell_text(row[i]);
    out << '\n';
  }
}

void write_json(const Report& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["command"] = report.command;
  for (const auto& [key, value] : report.metadata) doc[key] = value;
  doc["columns"] = report.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) r.push_back(cell_json(cell));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  doc["passed"] = report.passed();
  doc["failures"] = report.failures;
  out << doc.dump(2) << '\n';
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  Report report;
  try {
    report = execute(spec);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  }
  if (spec.format == OutputFormat::json) {
    write_json(report, out);
  } else {
    write_tsv(report, out);
  }
  for (const auto& failure : report.failures) err << "assertion failed: " << failure << '\n';
  return report.passed() ? 0 : 1;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinetic-energy functional scaling lab", "ke_lab"};
  RunSpec spec;
  std::string command;
  std::string family = "gaussian";
  std::string functional;
  std::string format = "tsv";
  std::vector<double> ladder;

  const auto commands = name_map({Command::verify_scaling, Command::gas_converge, Command::paradox,
                                  Command::search, Command::tabulate});
  const auto functionals =
      name_map({FunctionalChoice::vw, FunctionalChoice::tf, FunctionalChoice::tf_corrected, FunctionalChoice::ks});

  app.add_option("command", command, "verify-scaling | gas-converge | paradox | search | tabulate")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("--family", family, "gaussian | hydrogenic | uniform")
      ->check(CLI::IsMember({"gaussian", "hydrogenic", "uniform"}));
  app.add_option("--ne", spec.electrons, "electron count");
  app.add_option("--width", spec.width, "gaussian exponent, nuclear charge or box edge");
  app.add_option("--grid", spec.grid, "points per axis")->check(CLI::Range(16, 256));
  for (auto [name, target] : {std::pair{"--alpha", &spec.alpha}, std::pair{"--beta", &spec.beta},
                              std::pair{"--m", &spec.m}, std::pair{"--p", &spec.p}}) {
    app.add_option(name, *target, "comma list")
        ->delimiter(',')
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  }
  app.add_option("--functional", functional, "vw | tf | tf-corrected | ks")->check(CLI::IsMember(functionals));
  app.add_option("--ladder", ladder, "electron counts, comma list")
      ->delimiter(',')
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--nbar", spec.nbar, "mean gas density");
  app.add_option("--format", format, "tsv | json")->check(CLI::IsMember({"tsv", "json"}));
  app.add_option("--seed", spec.seed, "search restart seed, 0 for none");
  app.add_option("--orbitals", spec.orbitals, "search orbital count");
  app.add_option("--penalty", spec.penalty, "search penalty weight");
  app.add_option("--max-iter", spec.max_iterations, "search iteration cap per penalty stage");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    spec.command = commands.at(command);
    spec.family = parse_family(family);
    if (!functional.empty()) spec.functional = functionals.at(functional);
    spec.format = format == "json" ? OutputFormat::json : OutputFormat::tsv;
    if (!ladder.empty()) {
      spec.ladder.clear();
      for (double v : ladder) {
        if (!(v >= 2.0) || v != std::floor(v) || v > 1e12) {
          throw Error(ErrorCode::InvalidArgument, "--ladder entries must be integers >= 2");
        }
        spec.ladder.push_back(static_cast<std::int64_t>(v));
      }
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  }
  return run(spec, out, err);
}

}  // namespace kelab::cli
