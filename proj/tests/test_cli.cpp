#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doublepass/figures.hpp"
#include "doublepass/table.hpp"
#include "json.hpp"

#ifndef DOUBLEPASS_CLI_BIN
#error "DOUBLEPASS_CLI_BIN must point at the command-line binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(DOUBLEPASS_CLI_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
    res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "doublepass_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// body = everything after the metadata preamble
std::string csv_body(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    pos = text.find('\n', pos);
    REQUIRE(pos != std::string::npos);
    ++pos;
  }
  return text.substr(pos);
}

}  // namespace

TEST_CASE("figure command writes a parseable deterministic table") {
  const fs::path dir = scratch_dir();
  const fs::path a = dir / "fig5_a.csv";
  const fs::path b = dir / "fig5_b.csv";
  CHECK(run_cli("figure 5 -o " + a.string()).exit_code == 0);
  CHECK(run_cli("figure 5 -o " + b.string()).exit_code == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));  // byte-identical rerun

  const doublepass::DataTable t = doublepass::parse_csv(text);
  REQUIRE(t.columns.size() == 2);
  CHECK(t.columns[0] == "kappa2");
  CHECK(t.columns[1] == "delta_epr");
  REQUIRE(t.rows.size() == 251);
  CHECK(t.rows.front()[1] == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(t.find("figure") != nullptr);
  CHECK(*t.find("figure") == "5");
}

TEST_CASE("figure metadata is sufficient to regenerate the body") {
  const fs::path file = scratch_dir() / "fig4a.csv";
  REQUIRE(run_cli("figure 4a -o " + file.string()).exit_code == 0);
  const std::string text = slurp(file);
  const doublepass::DataTable t = doublepass::parse_csv(text);
  REQUIRE(t.find("figure") != nullptr);
  const doublepass::DataTable again =
      doublepass::figure_table(*t.find("figure"));
  CHECK(csv_body(doublepass::to_csv(again)) == csv_body(text));
}

TEST_CASE("sweep command round-trips through its own metadata") {
  const fs::path a = scratch_dir() / "sweep_a.csv";
  const fs::path b = scratch_dir() / "sweep_b.csv";
  const std::string flags =
      "sweep --variable kappa2 --from 0 --to 5 --steps 11 "
      "--quantity coherent_fidelity --n 8";
  CHECK(run_cli(flags + " -o " + a.string()).exit_code == 0);
  CHECK(run_cli(flags + " -o " + b.string()).exit_code == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));

  const doublepass::DataTable t = doublepass::parse_csv(text);
  doublepass::SweepConfig cfg;
  cfg.variable = *t.find("variable");
  cfg.from = std::stod(*t.find("from"));
  cfg.to = std::stod(*t.find("to"));
  cfg.steps = std::stoi(*t.find("steps"));
  cfg.quantity = *t.find("quantity");
  cfg.kappa2 = std::stod(*t.find("kappa2"));
  cfg.eta = std::stod(*t.find("eta"));
  cfg.r = std::stod(*t.find("r"));
  cfg.n = std::stod(*t.find("n"));
  cfg.optimize_kappa2 = *t.find("optimize_kappa2") == "true";
  const doublepass::DataTable again = doublepass::sweep_table(cfg);
  CHECK(csv_body(doublepass::to_csv(again)) == csv_body(text));

  // ideal memory sweep: fidelity strictly increases with coupling
  REQUIRE(t.rows.size() == 11);
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    CHECK(t.rows[i][1] > t.rows[i - 1][1]);
}

TEST_CASE("sweep with two steps emits exactly two rows") {
  const fs::path file = scratch_dir() / "sweep_two.csv";
  REQUIRE(run_cli("sweep --variable r --from 0 --to 0.1 --steps 2 "
                  "--quantity epr_variance --kappa2 1 -o " +
                  file.string())
              .exit_code == 0);
  const doublepass::DataTable t = doublepass::parse_csv(slurp(file));
  CHECK(t.rows.size() == 2);
  CHECK(t.rows[0][0] == 0.0);
  CHECK(t.rows[1][0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(t.rows[1][1] > t.rows[0][1]);  // losses raise the EPR variance
}

TEST_CASE("json output carries the same table") {
  const fs::path file = scratch_dir() / "fig5.json";
  REQUIRE(run_cli("figure 5 --format json -o " + file.string()).exit_code ==
          0);
  const nlohmann::json j = nlohmann::json::parse(slurp(file));
  CHECK(j.at("meta").at("figure") == "5");
  CHECK(j.at("columns").size() == 2);
  CHECK(j.at("data").size() == 251);
  CHECK(j.at("data")[0][1].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("output directory falls back to the environment variable") {
  const fs::path dir = scratch_dir() / "envdir";
  fs::remove_all(dir);
  const std::string cmd = "DOUBLEPASS_OUTDIR=" + dir.string() + " " +
                          std::string(DOUBLEPASS_CLI_BIN) +
                          " figure 5 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[512];
  while (std::fread(buf, 1, sizeof buf, pipe) > 0) {
  }
  CHECK(WEXITSTATUS(pclose(pipe)) == 0);
  CHECK(fs::exists(dir / "figure_5.csv"));
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("figure nope").exit_code == 2);
  CHECK(run_cli("figure").exit_code == 2);
  CHECK(run_cli("sweep --variable kappa2 --from 0 --to 5 --steps 1 "
                "--quantity epr_variance")
            .exit_code == 2);
  CHECK(run_cli("sweep --variable kappa2 --from 5 --to 0 --steps 4 "
                "--quantity epr_variance")
            .exit_code == 2);
  CHECK(run_cli("sweep --variable n --from 0 --to 4 --steps 3 "
                "--quantity qubit_fidelity")
            .exit_code == 2);
  CHECK(run_cli("--no-such-flag").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);  // a subcommand is required
}

TEST_CASE("help names every figure id") {
  const RunResult res = run_cli("--help");
  CHECK(res.exit_code == 0);
  for (const std::string& id : doublepass::figure_ids())
    CHECK(res.output.find("\n  " + id + " ") != std::string::npos);
  CHECK(res.output.find("DOUBLEPASS_OUTDIR") != std::string::npos);
}

TEST_CASE("fast validation passes and the planted sign error is caught") {
  const RunResult good = run_cli("validate --level fast");
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("FAIL") == std::string::npos);
  CHECK(good.output.find("all") != std::string::npos);
  CHECK(good.output.find("minus-mode") != std::string::npos);  // diagnostic

  const RunResult bad = run_cli("validate --level fast --corrupt-readout-sign");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("FAIL") != std::string::npos);
}
