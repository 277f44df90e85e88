#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "doublepass/figures.hpp"
#include "doublepass/table.hpp"
#include "doublepass/validate.hpp"

namespace {

namespace fs = std::filesystem;
using doublepass::DataTable;

std::string default_outdir() {
  const char* env = std::getenv("DOUBLEPASS_OUTDIR");
  return (env && *env) ? env : ".";
}

std::string resolve_output(const std::string& explicit_path,
                           const std::string& stem,
                           const std::string& format) {
  if (!explicit_path.empty()) return explicit_path;
  return default_outdir() + "/" + stem + "." + format;
}

void write_table(const DataTable& table, const std::string& path,
                 const std::string& format) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << (format == "json" ? doublepass::to_json(table)
                           : doublepass::to_csv(table));
  out.close();
  std::printf("wrote %s\n", path.c_str());
}

std::string help_footer() {
  std::string text =
      "figure ids (historical labels around 8-10 are ambiguous; ids here "
      "are\nfixed by parameter content):\n";
  for (const std::string& id : doublepass::figure_ids())
    text += "  " + id + (id.size() == 1 ? "   " : (id.size() == 2 ? "  " : " ")) +
            doublepass::figure_caption(id) + "\n";
  text +=
      "\noutput files default to $DOUBLEPASS_OUTDIR (falling back to the\n"
      "current directory). Exit codes: 0 success, 1 validation failure,\n"
      "2 usage error.\n";
  return text;
}

int run(int argc, char** argv) {
  CLI::App app{
      "doublepass: data tables and self-validation for the double-pass "
      "light-atom protocols (exponential memory and two-mode squeezing)"};
  app.require_subcommand(1);
  app.footer(help_footer());

  std::string fig_id;
  std::string fig_out;
  std::string fig_format = "csv";
  CLI::App* fig = app.add_subcommand(
      "figure", "write the data table behind one figure panel");
  fig->add_option("id", fig_id, "panel id, e.g. 4a, 5, 8b, 10a")->required();
  fig->add_option("-o,--output", fig_out,
                  "output file (default $DOUBLEPASS_OUTDIR/figure_<id>.<fmt>)");
  fig->add_option("--format", fig_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string level = "fast";
  bool corrupt = false;
  CLI::App* val = app.add_subcommand(
      "validate",
      "run the integrator-vs-closed-form and invariant checks; exit 1 on any "
      "failure");
  val->add_option("--level", level, "fast: N=1000 slices; full: N=8000")
      ->check(CLI::IsMember({"fast", "full"}));
  val->add_flag("--corrupt-readout-sign", corrupt)->group("");

  doublepass::SweepConfig sweep;
  std::string sweep_out;
  std::string sweep_format = "csv";
  CLI::App* swp = app.add_subcommand(
      "sweep", "evaluate one quantity over a range of one variable");
  swp->add_option("--variable", sweep.variable, "kappa2, r, eta or n")
      ->check(CLI::IsMember({"kappa2", "r", "eta", "n"}));
  swp->add_option("--from", sweep.from, "range start")->required();
  swp->add_option("--to", sweep.to, "range end")->required();
  swp->add_option("--steps", sweep.steps, "grid points (>= 2)");
  swp->add_option("--quantity", sweep.quantity,
                  "coherent_fidelity, qubit_fidelity, epr_variance or "
                  "squeezing")
      ->check(CLI::IsMember({"coherent_fidelity", "qubit_fidelity",
                             "epr_variance", "squeezing"}));
  swp->add_option("--kappa2", sweep.kappa2, "fixed coupling");
  swp->add_option("--eta", sweep.eta, "fixed atomic decay");
  swp->add_option("--r", sweep.r, "fixed reflection coefficient");
  swp->add_option("--n", sweep.n, "coherent ensemble width");
  swp->add_flag("--optimize-kappa2", sweep.optimize_kappa2,
                "extremize over the coupling at every point");
  swp->add_option("-o,--output", sweep_out, "output file");
  swp->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (fig->parsed()) {
      DataTable table = doublepass::figure_table(fig_id);
      table.set("format", fig_format);
      write_table(table, resolve_output(fig_out, "figure_" + fig_id, fig_format),
                  fig_format);
      return 0;
    }
    if (swp->parsed()) {
      DataTable table = doublepass::sweep_table(sweep);
      table.set("format", sweep_format);
      write_table(table,
                  resolve_output(sweep_out,
                                 "sweep_" + sweep.variable + "_" +
                                     sweep.quantity,
                                 sweep_format),
                  sweep_format);
      return 0;
    }

    doublepass::ValidationOptions opts;
    opts.full = (level == "full");
    opts.corrupt_readout_sign = corrupt;
    const doublepass::ValidationReport report =
        doublepass::run_validation(opts);
    std::printf("validation level: %s\n\n", level.c_str());
    std::printf("%-58s %12s %10s  %s\n", "check", "max dev", "tol", "status");
    for (const auto& c : report.checks)
      std::printf("%-58s %12.3e %10.1e  %s\n", c.name.c_str(), c.deviation,
                  c.tolerance, c.pass ? "ok" : "FAIL");
    for (const auto& d : report.diagnostics) std::printf("\n%s\n", d.c_str());
    if (!report.all_pass) {
      std::fprintf(stderr, "validate: FAILED at '%s'\n",
                   report.first_failure.c_str());
      return 1;
    }
    std::printf("\nvalidate: all %zu checks passed\n", report.checks.size());
    return 0;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "doublepass: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "doublepass: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
