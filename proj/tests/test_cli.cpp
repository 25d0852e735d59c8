#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "kelab/cli.hpp"

using namespace kelab;
using namespace kelab::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> tsv_lines(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, '\t')) cells.push_back(cell);
    lines.push_back(cells);
  }
  return lines;
}

// Data rows only: header is line 0, metadata lines start with '#'.
std::vector<std::vector<std::string>> data_rows(const std::string& text) {
  auto lines = tsv_lines(text);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (!lines[i].empty() && lines[i][0].rfind("#", 0) != 0) rows.push_back(lines[i]);
  }
  return rows;
}

std::size_t column(const std::string& text, const std::string& name) {
  const auto header = tsv_lines(text).at(0);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("format_double prints seventeen significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(std::acos(-1.0))) == std::acos(-1.0));
}

TEST_CASE("paradox headline comparison") {
  const Outcome r = invoke({"paradox", "--family", "gaussian", "--alpha", "2", "--beta", "2", "--m", "1", "--p", "1"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 1);
  const double naive = std::stod(rows[0][column(r.out, "naive_factor")]);
  const double corrected = std::stod(rows[0][column(r.out, "corrected_factor")]);
  const double gas = std::stod(rows[0][column(r.out, "gas_factor")]);
  CHECK(naive == doctest::Approx(std::pow(2.0, -4.0 / 3.0)).epsilon(1e-12));
  CHECK(naive == doctest::Approx(0.3969).epsilon(1e-4));
  CHECK(corrected == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gas == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verify-scaling with identity parameters has zero deviation") {
  const Outcome r = invoke({"verify-scaling", "--functional", "vw", "--alpha", "1", "--beta", "1", "--m", "0", "--p", "0"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][column(r.out, "relative_deviation")] == "0");
}

TEST_CASE("verify-scaling covers every functional over the standard sweep") {
  const Outcome r = invoke({"verify-scaling", "--grid", "16"});
  CHECK(r.code == 0);
  const auto rows = data_rows(r.out);
  CHECK(rows.size() == 4 * 12);
  for (const auto& row : rows) CHECK(std::stod(row[column(r.out, "relative_deviation")]) <= 1e-12);
}

TEST_CASE("list flags zip with broadcast") {
  const Outcome r = invoke({"verify-scaling", "--functional", "tf", "--alpha", "2,0.5,3", "--beta", "1.5", "--m",
                            "1", "--p", "1,2", "--p", "-1", "--grid", "16"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2][column(r.out, "alpha")] == "3");
  CHECK(rows[2][column(r.out, "beta")] == "1.5");
  CHECK(rows[2][column(r.out, "p")] == "-1");
  CHECK(invoke({"paradox", "--alpha", "1,2", "--beta", "1,2,3"}).code == 2);
}

TEST_CASE("gas-converge reaches the continuum") {
  const Outcome r = invoke({"gas-converge", "--nbar", "1", "--ladder", "1e2,1e3,1e4,1e5"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[3][0] == "100000");
  CHECK(std::stod(rows[3][column(r.out, "relative_error")]) <= 0.02);
}

TEST_CASE("search and tabulate summaries") {
  const Outcome s = invoke({"search", "--grid", "64"});
  REQUIRE(s.code == 0);
  const auto row = data_rows(s.out).at(0);
  CHECK(row[column(s.out, "converged")] == "true");
  CHECK(std::abs(std::stod(row[column(s.out, "relative_error")])) <= 1e-6);

  const Outcome t = invoke({"tabulate", "--grid", "24"});
  REQUIRE(t.code == 0);
  CHECK(data_rows(t.out).size() == 3 * 4 + 1);
}

TEST_CASE("TSV layout: header, metadata, rows") {
  const Outcome r = invoke({"gas-converge", "--ladder", "100,1000"});
  const auto lines = tsv_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == std::vector<std::string>{"electrons", "edge", "energy_per_volume", "continuum", "relative_error"});
  CHECK(lines[1][0] == "# version");
  CHECK(lines[2][0] == "# spec");
  CHECK(lines[2][1].rfind("gas-converge ", 0) == 0);
  for (std::size_t i = 3; i < lines.size(); ++i) CHECK(lines[i].size() == lines[0].size());
}

TEST_CASE("JSON mirrors the TSV table") {
  for (const std::string command : {"verify-scaling", "gas-converge", "paradox", "search", "tabulate"}) {
    CAPTURE(command);
    const Outcome tsv = invoke({command, "--grid", "32", "--ladder", "100,1000"});
    const Outcome json = invoke({command, "--grid", "32", "--ladder", "100,1000", "--format", "json"});
    REQUIRE(json.code == tsv.code);
    const auto doc = nlohmann::json::parse(json.out);
    CHECK(doc.at("command") == command);
    CHECK(doc.at("passed").get<bool>() == (tsv.code == 0));
    CHECK(doc.at("failures").is_array());
    const auto header = tsv_lines(tsv.out).at(0);
    CHECK(doc.at("columns").get<std::vector<std::string>>() == header);
    const auto rows = data_rows(tsv.out);
    REQUIRE(doc.at("rows").size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& jrow = doc.at("rows")[i];
      REQUIRE(jrow.size() == rows[i].size());
      for (std::size_t c = 0; c < rows[i].size(); ++c) {
        const auto& cell = jrow[c];
        if (cell.is_number_float()) {
          CHECK(cell.get<double>() == std::stod(rows[i][c]));
        } else if (cell.is_number_integer()) {
          CHECK(std::to_string(cell.get<std::int64_t>()) == rows[i][c]);
        } else if (cell.is_boolean()) {
          CHECK((cell.get<bool>() ? "true" : "false") == rows[i][c]);
        } else {
          CHECK(cell.get<std::string>() == rows[i][c]);
        }
      }
    }
  }
}

TEST_CASE("identical specs produce identical bytes") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"verify-scaling", "--grid", "16"}, {"gas-converge", "--ladder", "100,5000"},
        {"paradox"}, {"search", "--orbitals", "2", "--seed", "3"}, {"tabulate", "--grid", "16", "--format", "json"}}) {
    const Outcome a = invoke(args);
    const Outcome b = invoke(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("validation errors exit with code 2") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{}, {"launch"}, {"paradox", "--grid", "8"}, {"paradox", "--grid", "512"},
        {"paradox", "--family", "slater"}, {"paradox", "--alpha", "-1"}, {"paradox", "--ne", "0"},
        {"gas-converge", "--ladder", "1"}, {"gas-converge", "--ladder", "2.5"}, {"gas-converge", "--nbar", "0"},
        {"verify-scaling", "--functional", "pbe"}, {"tabulate", "--format", "xml"}, {"search", "--orbitals", "3"},
        {"search", "--grid", "16"}, {"paradox", "--family", "hydrogenic", "--width", "-1"},
        {"paradox", "--bogus"}}) {
    const Outcome r = invoke(args);
    CAPTURE(args.empty() ? std::string("<none>") : args.back());
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
  }
}

TEST_CASE("failed in-run assertions exit with code 1") {
  const Outcome r = invoke({"gas-converge", "--ladder", "2"});
  CHECK(r.code == 1);
  CHECK(r.err.find("assertion failed") != std::string::npos);
  CHECK(!data_rows(r.out).empty());
}

TEST_CASE("help exits cleanly") {
  const Outcome r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--family") != std::string::npos);
}

TEST_CASE("RunSpec defaults and echo") {
  RunSpec spec;
  CHECK(spec.format == OutputFormat::tsv);
  CHECK(spec.grid == 32);
  CHECK(spec.tuples().size() == 12);
  spec.command = Command::paradox;
  spec.alpha = {2.0};
  CHECK(spec.tuples().size() == 1);
  CHECK(spec.echo().find("--alpha 2 ") != std::string::npos);
  spec.grid = 15;
  CHECK_THROWS(spec.validate());
}
