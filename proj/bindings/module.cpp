#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "doublepass/envelope.hpp"
#include "doublepass/epr.hpp"
#include "doublepass/fidelity.hpp"
#include "doublepass/figures.hpp"
#include "doublepass/gaussian.hpp"
#include "doublepass/memory.hpp"
#include "doublepass/noise.hpp"
#include "doublepass/optimize.hpp"
#include "doublepass/oracle.hpp"
#include "doublepass/params.hpp"
#include "doublepass/table.hpp"
#include "doublepass/validate.hpp"

namespace py = pybind11;
using namespace doublepass;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Gaussian simulator for the double-pass light-atom loop: exponential "
      "quantum memory and two-mode-squeezing source, with loss models, "
      "fidelity metrics and a slice-level reference integrator.";

  // ---- parameters ----
  py::enum_<Setup>(m, "Setup")
      .value("memory", Setup::memory)
      .value("squeezer", Setup::squeezer);

  py::class_<ProtocolParams>(m, "ProtocolParams")
      .def(py::init<>())
      .def_readwrite("kappa2", &ProtocolParams::kappa2)
      .def_readwrite("omega_T", &ProtocolParams::omega_T)
      .def_readwrite("n_segments", &ProtocolParams::n_segments)
      .def_readwrite("loop_delay_segments",
                     &ProtocolParams::loop_delay_segments)
      .def_readwrite("eta", &ProtocolParams::eta)
      .def_readwrite("r", &ProtocolParams::r)
      .def_readwrite("setup", &ProtocolParams::setup)
      .def_readwrite("first_wall_loss", &ProtocolParams::first_wall_loss)
      .def_static("default_omega_T", &ProtocolParams::default_omega_T)
      .def("wt", &ProtocolParams::wt)
      .def("squeezer_wt", &ProtocolParams::squeezer_wt)
      .def("validate", &ProtocolParams::validate)
      .def("warnings", &ProtocolParams::warnings)
      .def("__repr__", [](const ProtocolParams& p) {
        std::ostringstream ss;
        ss << "ProtocolParams(kappa2=" << p.kappa2 << ", eta=" << p.eta
           << ", r=" << p.r << ", setup="
           << (p.setup == Setup::memory ? "memory" : "squeezer") << ")";
        return ss.str();
      });

  // ---- gaussian core ----
  py::class_<GaussianState>(m, "GaussianState")
      .def_readwrite("means", &GaussianState::means)
      .def_readwrite("cov", &GaussianState::cov)
      .def_readwrite("labels", &GaussianState::labels)
      .def("n_modes", &GaussianState::n_modes)
      .def("find_mode", &GaussianState::find_mode);

  py::class_<LinearIOMap>(m, "LinearIOMap")
      .def_readwrite("S", &LinearIOMap::S)
      .def_readwrite("d", &LinearIOMap::d)
      .def_readwrite("Y", &LinearIOMap::Y)
      .def_readwrite("in_labels", &LinearIOMap::in_labels)
      .def_readwrite("out_labels", &LinearIOMap::out_labels)
      .def("n_in", &LinearIOMap::n_in)
      .def("n_out", &LinearIOMap::n_out);

  m.def("symplectic_form", &symplectic_form, py::arg("n_modes"));
  m.def("make_vacuum",
        py::overload_cast<int>(&make_vacuum), py::arg("n_modes"));
  m.def("make_vacuum",
        py::overload_cast<const std::vector<std::string>&>(&make_vacuum),
        py::arg("labels"));
  m.def("physicality_margin", &physicality_margin, py::arg("cov"));
  m.def("is_physical", &is_physical, py::arg("state"),
        py::arg("tol") = 1e-9);
  m.def("identity_map", &identity_map, py::arg("n_modes"));
  m.def("make_map", &make_map, py::arg("S"),
        py::arg("in_labels") = std::vector<std::string>{},
        py::arg("out_labels") = std::vector<std::string>{});
  m.def("apply_map", &apply_map, py::arg("state"), py::arg("map"));
  m.def("compose", &compose, py::arg("second"), py::arg("first"));
  m.def("embed_map", &embed_map, py::arg("map"), py::arg("n_modes"),
        py::arg("modes"));
  m.def("symplectic_residual", &symplectic_residual, py::arg("S"));
  m.def("channel_physicality_margin", &channel_physicality_margin,
        py::arg("map"));
  m.def("check_symplectic", &check_symplectic, py::arg("map"),
        py::arg("tol") = 1e-10, py::arg("phys_tol") = 1e-9);
  m.def("epr_variance",
        py::overload_cast<const GaussianState&, int, int>(&epr_variance),
        py::arg("state"), py::arg("mode_a"), py::arg("mode_b"));
  m.def("epr_variance",
        py::overload_cast<const GaussianState&, const std::string&,
                          const std::string&>(&epr_variance),
        py::arg("state"), py::arg("mode_a"), py::arg("mode_b"));

  // ---- envelopes ----
  py::enum_<Sideband>(m, "Sideband")
      .value("upper", Sideband::upper)
      .value("lower", Sideband::lower);

  py::class_<ModeEnvelope>(m, "ModeEnvelope")
      .def(py::init<>())
      .def_readwrite("exponent_sign", &ModeEnvelope::exponent_sign)
      .def_readwrite("rate", &ModeEnvelope::rate)
      .def_readwrite("omega_T", &ModeEnvelope::omega_T)
      .def_readwrite("sideband", &ModeEnvelope::sideband)
      .def("continuum_norm", &ModeEnvelope::continuum_norm)
      .def("weights", &ModeEnvelope::weights, py::arg("n"));

  m.def("plus_mode", &plus_mode, py::arg("rate"), py::arg("omega_T"),
        py::arg("sideband"));
  m.def("minus_mode", &minus_mode, py::arg("rate"), py::arg("omega_T"),
        py::arg("sideband"));
  m.def("sideband_mode", &sideband_mode, py::arg("which"),
        py::arg("omega_T"));
  m.def("mode_x_row", &mode_x_row, py::arg("env"), py::arg("n"));
  m.def("mode_p_row", &mode_p_row, py::arg("env"), py::arg("n"));
  m.def("envelope_overlap", &envelope_overlap, py::arg("a"), py::arg("b"),
        py::arg("n"));
  m.def("plus_minus_overlap", &plus_minus_overlap, py::arg("rate"));

  // ---- lossless maps ----
  m.def("write_in_map", &write_in_map, py::arg("kappa2"));
  m.def("read_out_map", &read_out_map, py::arg("kappa2"));
  m.def("complete_transfer_map", &complete_transfer_map, py::arg("kappa2"));
  m.def("squeezer_maps", &squeezer_maps, py::arg("kappa2"));

  // ---- EPR / spin squeezing ----
  py::class_<FeedbackResult>(m, "FeedbackResult")
      .def_readonly("gain", &FeedbackResult::gain)
      .def_readonly("var_p_fb", &FeedbackResult::var_p_fb)
      .def_readonly("var_x", &FeedbackResult::var_x);

  m.def("epr_variances", &epr_variances, py::arg("kappa2"));
  m.def("spin_squeeze", &spin_squeeze, py::arg("kappa2"), py::arg("g"));
  m.def("optimal_gain", &optimal_gain, py::arg("kappa2"));

  // ---- fidelities ----
  py::class_<FidelityReport>(m, "FidelityReport")
      .def_readonly("per_state", &FidelityReport::per_state)
      .def_readonly("average", &FidelityReport::average)
      .def_readonly("classical_limit", &FidelityReport::classical_limit)
      .def_readonly("beats_classical", &FidelityReport::beats_classical);

  m.def("classical_limit_coherent", &classical_limit_coherent, py::arg("n"));
  m.def("classical_limit_qubit", &classical_limit_qubit);
  m.def("coherent_overlap", &coherent_overlap, py::arg("mean_in"),
        py::arg("mean_out"), py::arg("var_out"));
  m.def("average_coherent_from_io", &average_coherent_from_io, py::arg("a"),
        py::arg("vx"), py::arg("vp"), py::arg("n"));
  m.def("average_coherent", &average_coherent, py::arg("n"),
        py::arg("kappa2"));
  m.def("qubit_overlap", &qubit_overlap, py::arg("alpha"), py::arg("beta"),
        py::arg("kappa2"));
  m.def("bloch_average", &bloch_average, py::arg("f"),
        py::arg("n_theta") = 2048, py::arg("n_phi") = 128);
  m.def("average_qubit", &average_qubit, py::arg("kappa2"));

  // ---- slice integrator ----
  py::enum_<AncillaChannel>(m, "AncillaChannel")
      .value("first_wall", AncillaChannel::first_wall)
      .value("atomic", AncillaChannel::atomic)
      .value("mid_wall", AncillaChannel::mid_wall)
      .value("exit_wall", AncillaChannel::exit_wall);

  py::class_<PulseOracle> oracle(m, "PulseOracle");
  py::class_<PulseOracle::Row>(oracle, "Row")
      .def_readonly("atoms", &PulseOracle::Row::atoms)
      .def_readonly("light", &PulseOracle::Row::light)
      .def_readonly("ancilla", &PulseOracle::Row::ancilla)
      .def("added_noise", &PulseOracle::Row::added_noise);
  oracle.def(py::init<const ProtocolParams&>(), py::arg("params"))
      .def("params", &PulseOracle::params)
      .def("n_slices", &PulseOracle::n_slices)
      .def("n_ancillas", &PulseOracle::n_ancillas)
      .def("ancilla_channels", &PulseOracle::ancilla_channels)
      .def("atom_row", &PulseOracle::atom_row, py::arg("quad"))
      .def("mode_row", &PulseOracle::mode_row, py::arg("env"),
           py::arg("quad"))
      .def("output_row", &PulseOracle::output_row, py::arg("functional"))
      .def("channel_power", &PulseOracle::channel_power, py::arg("row"),
           py::arg("channel"));

  m.def("integrate_ideal", &integrate_ideal, py::arg("params"));
  m.def("integrate_noisy", &integrate_noisy, py::arg("params"));
  m.def("project_mode", &project_mode, py::arg("map"), py::arg("env"));

  // ---- noise models ----
  m.def("generalized_exponent", &generalized_exponent, py::arg("params"));

  py::class_<BundleMode>(m, "BundleMode")
      .def_readonly("label", &BundleMode::label)
      .def_readonly("family", &BundleMode::family)
      .def_readonly("env_sign", &BundleMode::env_sign)
      .def_readonly("swapped", &BundleMode::swapped);

  py::class_<NoisyIOBundle>(m, "NoisyIOBundle")
      .def_readonly("modes", &NoisyIOBundle::modes)
      .def_readonly("family_overlap", &NoisyIOBundle::family_overlap)
      .def_readonly("S", &NoisyIOBundle::S)
      .def_readonly("Y", &NoisyIOBundle::Y)
      .def_readonly("Yc", &NoisyIOBundle::Yc)
      .def_readonly("c", &NoisyIOBundle::c)
      .def_readonly("out_label", &NoisyIOBundle::out_label)
      .def("n_modes", &NoisyIOBundle::n_modes)
      .def("find_mode", &NoisyIOBundle::find_mode, py::arg("label"))
      .def("gram", &NoisyIOBundle::gram)
      .def("comm", &NoisyIOBundle::comm)
      .def("out_covariance", &NoisyIOBundle::out_covariance)
      .def("out_commutator", &NoisyIOBundle::out_commutator)
      .def("commutator_defect", &NoisyIOBundle::commutator_defect);

  m.def("noisy_write_in", &noisy_write_in, py::arg("params"));
  m.def("noisy_read_out", &noisy_read_out, py::arg("params"));
  m.def("noisy_complete_transfer", &noisy_complete_transfer,
        py::arg("params"));

  py::class_<BogoliubovDecomp>(m, "BogoliubovDecomp")
      .def_readonly("k", &BogoliubovDecomp::k)
      .def_readonly("k_tilde", &BogoliubovDecomp::k_tilde)
      .def_readonly("n_a", &BogoliubovDecomp::n_a)
      .def_readonly("n_c", &BogoliubovDecomp::n_c)
      .def_readonly("weak_noise", &BogoliubovDecomp::weak_noise);

  m.def("bogoliubov_decompose", &bogoliubov_decompose, py::arg("bundle"));
  m.def("noisy_qubit_fidelity", &noisy_qubit_fidelity, py::arg("decomp"),
        py::arg("alpha"), py::arg("beta"));
  m.def("noisy_average_qubit", &noisy_average_qubit, py::arg("params"));
  m.def("noisy_coherent_fidelity", &noisy_coherent_fidelity,
        py::arg("params"), py::arg("n"));

  py::class_<NoisyEprResult>(m, "NoisyEprResult")
      .def_readonly("delta_epr", &NoisyEprResult::delta_epr)
      .def_readonly("squeezing", &NoisyEprResult::squeezing);

  m.def("noisy_epr_and_squeezing", &noisy_epr_and_squeezing,
        py::arg("params"), py::arg("g") = std::nullopt);

  py::class_<SqueezerMoments>(m, "SqueezerMoments")
      .def_readonly("var_atom", &SqueezerMoments::var_atom)
      .def_readonly("var_light", &SqueezerMoments::var_light)
      .def_readonly("cross", &SqueezerMoments::cross);

  m.def("noisy_squeezer_moments", &noisy_squeezer_moments,
        py::arg("params"));

  py::class_<CouplingOptimum>(m, "CouplingOptimum")
      .def_readonly("kappa2", &CouplingOptimum::kappa2)
      .def_readonly("value", &CouplingOptimum::value);

  m.def("optimize_epr_coupling", &optimize_epr_coupling, py::arg("params"),
        py::arg("lo") = 0.01, py::arg("hi") = 10.0);

  // ---- optimizers ----
  py::class_<MinResult>(m, "MinResult")
      .def_readonly("x", &MinResult::x)
      .def_readonly("value", &MinResult::value)
      .def_readonly("evals", &MinResult::evals);

  m.def("golden_section_minimize", &golden_section_minimize, py::arg("f"),
        py::arg("lo"), py::arg("hi"), py::arg("xtol") = 1e-6);
  m.def("polished_minimize", &polished_minimize, py::arg("f"), py::arg("lo"),
        py::arg("hi"), py::arg("xtol") = 1e-6);

  // ---- tables, figures, sweeps ----
  py::class_<DataTable>(m, "DataTable")
      .def(py::init<>())
      .def_readwrite("meta", &DataTable::meta)
      .def_readwrite("columns", &DataTable::columns)
      .def_readwrite("rows", &DataTable::rows)
      .def("set",
           py::overload_cast<const std::string&, const std::string&>(
               &DataTable::set),
           py::arg("key"), py::arg("value"))
      .def("set",
           py::overload_cast<const std::string&, double>(&DataTable::set),
           py::arg("key"), py::arg("value"))
      .def("find", [](const DataTable& t, const std::string& key) {
        const std::string* v = t.find(key);
        return v ? std::optional<std::string>(*v) : std::nullopt;
      });

  m.def("format_number", &format_number, py::arg("x"));
  m.def("to_csv", &to_csv, py::arg("table"));
  m.def("to_json", &to_json, py::arg("table"));
  m.def("parse_csv", &parse_csv, py::arg("text"));

  m.def("figure_ids", &figure_ids);
  m.def("figure_caption", &figure_caption, py::arg("id"));
  m.def("figure_table", &figure_table, py::arg("id"));

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("variable", &SweepConfig::variable)
      .def_readwrite("from_", &SweepConfig::from)
      .def_readwrite("to", &SweepConfig::to)
      .def_readwrite("steps", &SweepConfig::steps)
      .def_readwrite("quantity", &SweepConfig::quantity)
      .def_readwrite("kappa2", &SweepConfig::kappa2)
      .def_readwrite("eta", &SweepConfig::eta)
      .def_readwrite("r", &SweepConfig::r)
      .def_readwrite("n", &SweepConfig::n)
      .def_readwrite("optimize_kappa2", &SweepConfig::optimize_kappa2);

  m.def("sweep_table", &sweep_table, py::arg("config"));

  // ---- self-validation ----
  py::class_<ValidationCheck>(m, "ValidationCheck")
      .def_readonly("name", &ValidationCheck::name)
      .def_readonly("deviation", &ValidationCheck::deviation)
      .def_readonly("tolerance", &ValidationCheck::tolerance)
      .def_readonly("pass_", &ValidationCheck::pass);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def_readonly("diagnostics", &ValidationReport::diagnostics)
      .def_readonly("all_pass", &ValidationReport::all_pass)
      .def_readonly("first_failure", &ValidationReport::first_failure);

  m.def(
      "run_validation",
      [](bool full, bool corrupt_readout_sign) {
        ValidationOptions opts;
        opts.full = full;
        opts.corrupt_readout_sign = corrupt_readout_sign;
        return run_validation(opts);
      },
      py::arg("full") = false, py::arg("corrupt_readout_sign") = false);
}
