#include "doublepass/figures.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "doublepass/epr.hpp"
#include "doublepass/fidelity.hpp"
#include "doublepass/noise.hpp"
#include "doublepass/optimize.hpp"
#include "doublepass/params.hpp"

namespace doublepass {

namespace {

constexpr double kCouplingLo = 0.01;  // brackets for inner optimizations
constexpr double kCouplingHi = 10.0;

std::vector<double> linspace(double from, double to, int steps) {
  std::vector<double> xs(steps);
  for (int i = 0; i < steps; ++i)
    xs[i] = from + (to - from) * i / double(steps - 1);
  return xs;
}

double squeeze_db(double var) { return 10.0 * std::log10(var / 0.5); }

ProtocolParams protocol(double k2, double eta, double r, Setup setup) {
  ProtocolParams p;
  p.kappa2 = k2;
  p.eta = eta;
  p.r = r;
  p.setup = setup;
  return p;
}

// Maximum of a fidelity-like objective over the coupling; returns the value
// and leaves the argmax in *kopt.
double max_over_coupling(const std::function<double(double)>& f,
                         double* kopt) {
  const MinResult m = golden_section_minimize(
      [&](double k2) { return -f(k2); }, kCouplingLo, kCouplingHi);
  if (kopt) *kopt = m.x;
  return -m.value;
}

double min_sqz_var_over_coupling(double eta, double r, double* kopt) {
  const MinResult m = golden_section_minimize(
      [&](double k2) {
        return noisy_epr_and_squeezing(protocol(k2, eta, r, Setup::squeezer))
            .squeezing.var_p_fb;
      },
      kCouplingLo, kCouplingHi);
  if (kopt) *kopt = m.x;
  return m.value;
}

const std::vector<double> kPhotonNumbers = {4.0, 8.0, 20.0};
const std::vector<double> kEtaFamily = {0.05, 0.10, 0.25};
const std::vector<std::string> kEtaTag = {"eta5", "eta10", "eta25"};

void coupling_axis_meta(DataTable& t) {
  t.set("abscissa", "kappa2");
  t.set("kappa2_from", 0.0);
  t.set("kappa2_to", 5.0);
  t.set("kappa2_steps", 251);
}

void reflection_axis_meta(DataTable& t) {
  t.set("abscissa", "r");
  t.set("r_from", 0.0);
  t.set("r_to", 0.2);
  t.set("r_steps", 41);
  t.set("eta_list", "0.05,0.1,0.25");
  t.set("kappa2_bracket",
        format_number(kCouplingLo) + ".." + format_number(kCouplingHi));
}

DataTable fig_coherent(double eta, double r) {
  DataTable t;
  coupling_axis_meta(t);
  t.set("eta", eta);
  t.set("r", r);
  t.set("n_list", "4,8,20");
  t.columns = {"kappa2"};
  for (double n : kPhotonNumbers)
    t.columns.push_back("fbar_n" + format_number(n));
  for (double n : kPhotonNumbers)
    t.columns.push_back("classical_n" + format_number(n));
  for (double k2 : linspace(0.0, 5.0, 251)) {
    std::vector<double> row = {k2};
    for (double n : kPhotonNumbers)
      row.push_back(
          noisy_coherent_fidelity(protocol(k2, eta, r, Setup::memory), n));
    for (double n : kPhotonNumbers) row.push_back(classical_limit_coherent(n));
    t.rows.push_back(std::move(row));
  }
  return t;
}

DataTable fig_qubit(double eta, double r) {
  DataTable t;
  coupling_axis_meta(t);
  t.set("eta", eta);
  t.set("r", r);
  t.columns = {"kappa2", "fbar_qubit", "classical_qubit"};
  for (double k2 : linspace(0.0, 5.0, 251)) {
    const FidelityReport rep =
        noisy_average_qubit(protocol(k2, eta, r, Setup::memory));
    t.rows.push_back({k2, rep.average, rep.classical_limit});
  }
  return t;
}

DataTable fig_epr(double eta, double r) {
  DataTable t;
  coupling_axis_meta(t);
  t.set("eta", eta);
  t.set("r", r);
  t.columns = {"kappa2", "delta_epr"};
  for (double k2 : linspace(0.0, 5.0, 251))
    t.rows.push_back(
        {k2, noisy_epr_and_squeezing(protocol(k2, eta, r, Setup::squeezer))
                 .delta_epr});
  return t;
}

DataTable fig_squeezing(double eta, double r) {
  DataTable t;
  coupling_axis_meta(t);
  t.set("eta", eta);
  t.set("r", r);
  t.columns = {"kappa2", "squeezing_db", "gain_opt"};
  for (double k2 : linspace(0.0, 5.0, 251)) {
    const NoisyEprResult res =
        noisy_epr_and_squeezing(protocol(k2, eta, r, Setup::squeezer));
    t.rows.push_back(
        {k2, squeeze_db(res.squeezing.var_p_fb), res.squeezing.gain});
  }
  return t;
}

DataTable fig_epr_optimized() {
  DataTable t;
  reflection_axis_meta(t);
  t.columns = {"r"};
  for (const std::string& tag : kEtaTag) {
    t.columns.push_back("delta_epr_" + tag);
    t.columns.push_back("kappa2_opt_" + tag);
  }
  for (double r : linspace(0.0, 0.2, 41)) {
    std::vector<double> row = {r};
    for (double eta : kEtaFamily) {
      const CouplingOptimum opt =
          optimize_epr_coupling(protocol(1.0, eta, r, Setup::squeezer),
                                kCouplingLo, kCouplingHi);
      row.push_back(opt.value);
      row.push_back(opt.kappa2);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

DataTable fig_max_squeezing() {
  DataTable t;
  reflection_axis_meta(t);
  t.columns = {"r"};
  for (const std::string& tag : kEtaTag)
    t.columns.push_back("squeezing_db_" + tag);
  for (double r : linspace(0.0, 0.2, 41)) {
    std::vector<double> row = {r};
    for (double eta : kEtaFamily)
      row.push_back(squeeze_db(min_sqz_var_over_coupling(eta, r, nullptr)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

DataTable fig_max_coherent() {
  DataTable t;
  reflection_axis_meta(t);
  t.set("n", 8.0);
  t.columns = {"r"};
  for (const std::string& tag : kEtaTag) t.columns.push_back("fbar_n8_" + tag);
  t.columns.push_back("classical_n8");
  for (double r : linspace(0.0, 0.2, 41)) {
    std::vector<double> row = {r};
    for (double eta : kEtaFamily)
      row.push_back(max_over_coupling(
          [&](double k2) {
            return noisy_coherent_fidelity(
                protocol(k2, eta, r, Setup::memory), 8.0);
          },
          nullptr));
    row.push_back(classical_limit_coherent(8.0));
    t.rows.push_back(std::move(row));
  }
  return t;
}

DataTable fig_max_qubit() {
  DataTable t;
  reflection_axis_meta(t);
  t.columns = {"r"};
  for (const std::string& tag : kEtaTag)
    t.columns.push_back("fbar_qubit_" + tag);
  t.columns.push_back("classical_qubit");
  for (double r : linspace(0.0, 0.2, 41)) {
    std::vector<double> row = {r};
    for (double eta : kEtaFamily)
      row.push_back(max_over_coupling(
          [&](double k2) {
            return noisy_average_qubit(protocol(k2, eta, r, Setup::memory))
                .average;
          },
          nullptr));
    row.push_back(classical_limit_qubit());
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct FigureEntry {
  const char* id;
  const char* caption;
  DataTable (*build)();
};

const FigureEntry kFigures[] = {
    {"4a",
     "lossless coherent-state transfer fidelity vs coupling (n = 4, 8, 20, "
     "classical limits 9/17, 17/33, 41/81)",
     [] { return fig_coherent(0.0, 0.0); }},
    {"4b", "lossless qubit transfer fidelity vs coupling (classical limit 2/3)",
     [] { return fig_qubit(0.0, 0.0); }},
    {"5", "lossless EPR variance of the two-mode squeezing source vs coupling",
     [] { return fig_epr(0.0, 0.0); }},
    {"6",
     "lossless atomic squeezing in dB at optimal gain vs coupling (gain "
     "column = inset)",
     [] { return fig_squeezing(0.0, 0.0); }},
    {"7a", "coherent transfer fidelity vs coupling at r = eta = 7.5%",
     [] { return fig_coherent(0.075, 0.075); }},
    {"7b", "qubit transfer fidelity vs coupling at r = eta = 7.5%",
     [] { return fig_qubit(0.075, 0.075); }},
    {"8a", "EPR variance vs coupling at r = eta = 10%",
     [] { return fig_epr(0.1, 0.1); }},
    {"8b",
     "coupling-optimized EPR variance vs reflection for eta = 5/10/25% "
     "(kappa2_opt columns = inset)",
     fig_epr_optimized},
    {"9a",
     "atomic squeezing in dB vs coupling at r = eta = 10% (gain column = "
     "inset)",
     [] { return fig_squeezing(0.1, 0.1); }},
    {"9b", "maximal atomic squeezing vs reflection for eta = 5/10/25%",
     fig_max_squeezing},
    {"10a", "maximal coherent fidelity (n = 8) vs reflection for eta = 5/10/25%",
     fig_max_coherent},
    {"10b", "maximal qubit fidelity vs reflection for eta = 5/10/25%",
     fig_max_qubit},
};

const FigureEntry& lookup(const std::string& id) {
  for (const FigureEntry& e : kFigures)
    if (id == e.id) return e;
  throw std::invalid_argument("unknown figure id '" + id + "'");
}

}  // namespace

std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const FigureEntry& e : kFigures) ids.emplace_back(e.id);
  return ids;
}

std::string figure_caption(const std::string& id) {
  return lookup(id).caption;
}

DataTable figure_table(const std::string& id) {
  const FigureEntry& entry = lookup(id);
  DataTable t = entry.build();
  DataTable out;
  out.set("generator", "doublepass");
  out.set("subcommand", "figure");
  out.set("figure", entry.id);
  out.set("caption", entry.caption);
  for (auto& kv : t.meta) out.meta.push_back(std::move(kv));
  out.columns = std::move(t.columns);
  out.rows = std::move(t.rows);
  return out;
}

DataTable sweep_table(const SweepConfig& config) {
  if (config.steps < 2)
    throw std::invalid_argument("sweep: steps must be >= 2");
  if (!(config.to > config.from))
    throw std::invalid_argument("sweep: empty range");
  const bool coherent = config.quantity == "coherent_fidelity";
  const bool qubit = config.quantity == "qubit_fidelity";
  const bool epr = config.quantity == "epr_variance";
  const bool squeezing = config.quantity == "squeezing";
  if (!coherent && !qubit && !epr && !squeezing)
    throw std::invalid_argument("sweep: unknown quantity '" + config.quantity +
                                "'");
  if (config.variable != "kappa2" && config.variable != "r" &&
      config.variable != "eta" && config.variable != "n")
    throw std::invalid_argument("sweep: unknown variable '" + config.variable +
                                "'");
  if (config.variable == "n" && !coherent)
    throw std::invalid_argument(
        "sweep: n is only an axis for coherent_fidelity");
  if (config.optimize_kappa2 && config.variable == "kappa2")
    throw std::invalid_argument(
        "sweep: cannot optimize the swept variable");
  if (config.n < 0.0) throw std::invalid_argument("sweep: n must be >= 0");

  const Setup setup = (epr || squeezing) ? Setup::squeezer : Setup::memory;

  DataTable t;
  t.set("generator", "doublepass");
  t.set("subcommand", "sweep");
  t.set("variable", config.variable);
  t.set("from", config.from);
  t.set("to", config.to);
  t.set("steps", config.steps);
  t.set("quantity", config.quantity);
  t.set("kappa2", config.kappa2);
  t.set("eta", config.eta);
  t.set("r", config.r);
  t.set("n", config.n);
  t.set("optimize_kappa2", config.optimize_kappa2 ? "true" : "false");

  t.columns = {config.variable};
  if (coherent) t.columns.push_back("fbar_coherent");
  if (qubit) t.columns.push_back("fbar_qubit");
  if (epr) t.columns.push_back("delta_epr");
  if (squeezing) {
    t.columns.push_back("squeezing_db");
    t.columns.push_back("gain_opt");
  }
  if (config.optimize_kappa2) t.columns.push_back("kappa2_opt");
  if (coherent) t.columns.push_back("classical_limit");
  if (qubit) t.columns.push_back("classical_limit");

  for (double x : linspace(config.from, config.to, config.steps)) {
    ProtocolParams p = protocol(config.kappa2, config.eta, config.r, setup);
    double n = config.n;
    if (config.variable == "kappa2") p.kappa2 = x;
    if (config.variable == "r") p.r = x;
    if (config.variable == "eta") p.eta = x;
    if (config.variable == "n") n = x;
    p.validate();

    std::vector<double> row = {x};
    double kopt = p.kappa2;
    if (coherent) {
      double f;
      if (config.optimize_kappa2) {
        f = max_over_coupling(
            [&](double k2) {
              ProtocolParams q = p;
              q.kappa2 = k2;
              return noisy_coherent_fidelity(q, n);
            },
            &kopt);
      } else {
        f = noisy_coherent_fidelity(p, n);
      }
      row.push_back(f);
    } else if (qubit) {
      double f;
      if (config.optimize_kappa2) {
        f = max_over_coupling(
            [&](double k2) {
              ProtocolParams q = p;
              q.kappa2 = k2;
              return noisy_average_qubit(q).average;
            },
            &kopt);
      } else {
        f = noisy_average_qubit(p).average;
      }
      row.push_back(f);
    } else if (epr) {
      if (config.optimize_kappa2) {
        const CouplingOptimum opt =
            optimize_epr_coupling(p, kCouplingLo, kCouplingHi);
        kopt = opt.kappa2;
        row.push_back(opt.value);
      } else {
        row.push_back(noisy_epr_and_squeezing(p).delta_epr);
      }
    } else {
      double var, gain;
      if (config.optimize_kappa2) {
        var = min_sqz_var_over_coupling(p.eta, p.r, &kopt);
        ProtocolParams q = p;
        q.kappa2 = kopt;
        gain = noisy_epr_and_squeezing(q).squeezing.gain;
      } else {
        const NoisyEprResult res = noisy_epr_and_squeezing(p);
        var = res.squeezing.var_p_fb;
        gain = res.squeezing.gain;
      }
      row.push_back(squeeze_db(var));
      row.push_back(gain);
    }
    if (config.optimize_kappa2) row.push_back(kopt);
    if (coherent) row.push_back(classical_limit_coherent(n));
    if (qubit) row.push_back(classical_limit_qubit());
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace doublepass
