// Command-line front end: parity / erasure / bell / tomo / run subcommands
// with config-driven noise, seeds and output locations.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>

#include "nlm/circuit.hpp"
#include "nlm/errors.hpp"
#include "nlm/io.hpp"
#include "nlm/noise.hpp"
#include "nlm/protocol.hpp"
#include "nlm/tomography.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::uint64_t seed = 12345;
  std::uint64_t shots = 10000;
  nlm::NoiseModel noise = nlm::NoiseModel::ideal();
  fs::path output_dir = ".";
  std::string format = "csv";
};

struct CommonFlags {
  CLI::Option* seed = nullptr;
  CLI::Option* shots = nullptr;
  CLI::Option* ideal = nullptr;
  CLI::Option* noise = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* format = nullptr;
  std::string noise_arg;
  std::string out_arg = ".";
};

CommonFlags add_common_flags(CLI::App* cmd, RunConfig& config) {
  CommonFlags flags;
  flags.seed = cmd->add_option("--seed", config.seed, "64-bit generator seed");
  flags.shots = cmd->add_option("--shots", config.shots, "post-selected events per row");
  flags.ideal = cmd->add_flag("--ideal", "noise model (1, 0, 0)");
  flags.noise = cmd->add_option("--noise", flags.noise_arg,
                                "'default' or a JSON config file (flags win)");
  flags.out = cmd->add_option("--out", flags.out_arg, "output directory");
  flags.format = cmd->add_option("--format", config.format, "csv or json")
                     ->check(CLI::IsMember({"csv", "json"}));
  return flags;
}

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in.good()) {
    throw nlm::Error("cannot open '" + path.string() + "'");
  }
  json parsed;
  in >> parsed;
  return parsed;
}

// The --noise argument: "default", a bare noise-model JSON, or a flat config
// JSON mirroring RunConfig fields. Explicitly set flags keep precedence.
void fold_noise_argument(const CommonFlags& flags, RunConfig& config) {
  if (flags.noise_arg.empty()) return;
  if (flags.noise_arg == "default") {
    config.noise = nlm::NoiseModel::calibrated_default();
    return;
  }
  const json file = load_json_file(flags.noise_arg);
  static const std::set<std::string> config_keys = {"seed", "shots", "noise", "output_dir",
                                                    "format"};
  static const std::set<std::string> noise_keys = {"eraser_visibility", "extinction",
                                                   "background"};
  bool bare_noise = !file.empty();
  for (const auto& [key, value] : file.items()) {
    if (!noise_keys.count(key)) bare_noise = false;
  }
  if (bare_noise) {
    config.noise = nlm::noise_from_json(file);
    return;
  }
  for (const auto& [key, value] : file.items()) {
    if (!config_keys.count(key)) {
      throw nlm::Error("unknown config key '" + key + "' in " + flags.noise_arg);
    }
  }
  if (file.contains("noise")) config.noise = nlm::noise_from_json(file["noise"]);
  if (file.contains("seed") && flags.seed->count() == 0) config.seed = file["seed"];
  if (file.contains("shots") && flags.shots->count() == 0) config.shots = file["shots"];
  if (file.contains("output_dir") && flags.out->count() == 0)
    config.output_dir = file["output_dir"].get<std::string>();
  if (file.contains("format") && flags.format->count() == 0)
    config.format = file["format"].get<std::string>();
}

RunConfig finalize_config(const CommonFlags& flags, RunConfig config) {
  fold_noise_argument(flags, config);
  if (flags.out->count() > 0 || config.output_dir == ".") {
    config.output_dir = flags.out_arg;
  }
  if (flags.ideal->count() > 0) {
    config.noise = nlm::NoiseModel::ideal();
  }
  config.noise.validate();
  fs::create_directories(config.output_dir);
  return config;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) {
    throw nlm::Error("cannot write '" + path.string() + "'");
  }
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

const std::map<std::string, nlm::SystemAmplitudes>& named_states() {
  using nlm::Complex;
  using nlm::SystemAmplitudes;
  static const std::map<std::string, SystemAmplitudes> states = {
      {"hh", SystemAmplitudes{1, 0, 0, 0}},
      {"hv", SystemAmplitudes{0, 1, 0, 0}},
      {"vh", SystemAmplitudes{0, 0, 1, 0}},
      {"vv", SystemAmplitudes{0, 0, 0, 1}},
      {"psi_plus", nlm::bell_state(nlm::BellLabel::PsiPlus)},
      {"psi_minus", nlm::bell_state(nlm::BellLabel::PsiMinus)},
      {"phi_plus", nlm::bell_state(nlm::BellLabel::PhiPlus)},
      {"phi_minus", nlm::bell_state(nlm::BellLabel::PhiMinus)},
      // |D> (x) (|H> - i|V>)/sqrt2: the product superposition that loads all
      // four parity cells evenly.
      {"dr", SystemAmplitudes{0.5, Complex(0, -0.5), 0.5, Complex(0, -0.5)}},
  };
  return states;
}

nlm::SystemAmplitudes resolve_state(const std::string& text, std::string& label) {
  label = text;
  const auto it = named_states().find(text);
  if (it != named_states().end()) {
    return it->second;
  }
  return nlm::parse_amplitude_list(text);
}

int run_parity(const RunConfig& config, const std::vector<std::string>& state_args) {
  std::vector<nlm::SystemAmplitudes> inputs;
  std::vector<std::string> labels;
  if (state_args.empty()) {
    for (const char* name : {"hh", "vv", "hv", "vh"}) {
      inputs.push_back(named_states().at(name));
      std::string upper(name);
      for (char& c : upper) c = static_cast<char>(std::toupper(c));
      labels.push_back(upper);
    }
  } else {
    for (const std::string& arg : state_args) {
      std::string label;
      inputs.push_back(resolve_state(arg, label));
      labels.push_back(label);
    }
  }

  const nlm::CountsTable table =
      nlm::parity_table(inputs, labels, config.shots, config.noise, config.seed);

  // Channel masses per row; parity error where the input is a parity eigenstate.
  json summary_rows = json::array();
  std::uint64_t eigen_total = 0;
  std::uint64_t eigen_wrong = 0;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& row = table.rows[k];
    std::uint64_t l_mass = 0;
    std::uint64_t r_mass = 0;
    for (int b = 0; b < 4; ++b) {
      l_mass += row.counts[nlm::kChannelL][b];
      r_mass += row.counts[nlm::kChannelR][b];
    }
    json entry{{"input", row.input},
               {"shots", row.shots},
               {"counts_l", l_mass},
               {"counts_r", r_mass}};
    const double p_even = std::norm(inputs[k].alpha) + std::norm(inputs[k].eta);
    if (p_even > 1.0 - 1e-9 || p_even < 1e-9) {
      const bool even = p_even > 0.5;
      const std::uint64_t wrong = even ? r_mass : l_mass;
      entry["expected_channel"] = even ? "l" : "r";
      if (row.shots > 0) {
        entry["channel_error"] = static_cast<double>(wrong) / static_cast<double>(row.shots);
      }
      eigen_total += row.shots;
      eigen_wrong += wrong;
    }
    summary_rows.push_back(entry);
  }
  json summary{{"rows", summary_rows},
               {"noise", nlm::noise_to_json(config.noise)},
               {"seed", config.seed}};
  if (eigen_total > 0) {
    summary["channel_error"] =
        static_cast<double>(eigen_wrong) / static_cast<double>(eigen_total);
  }

  if (config.format == "csv") {
    write_text(config.output_dir / "parity_counts.csv", nlm::counts_table_to_csv(table));
  } else {
    write_json(config.output_dir / "parity_counts.json", nlm::counts_table_to_json(table));
  }
  write_json(config.output_dir / "parity_summary.json", summary);

  if (summary.contains("channel_error")) {
    std::cout << "parity channel error: " << nlm::format_double(summary["channel_error"])
              << "\n";
  }
  std::cout << "wrote parity_counts." << config.format << " and parity_summary.json in "
            << config.output_dir.string() << "\n";
  return 0;
}

int run_erasure(const RunConfig& config, const std::string& state_arg) {
  std::string label;
  const nlm::SystemAmplitudes sys = resolve_state(state_arg, label);

  const nlm::SnapshotDistribution pre_ideal = nlm::pre_erasure_snapshot(sys);
  const nlm::SnapshotDistribution pre_noisy =
      nlm::apply_noise_snapshot(pre_ideal, config.noise);
  const auto pre_counts = nlm::sample_snapshot_counts(pre_noisy, config.shots, config.seed);

  const nlm::ProtocolOutcome outcome = nlm::run_protocol(sys);
  const nlm::CellProbabilities post_cells = nlm::apply_noise(outcome, config.noise);
  nlm::CountsTable post;
  post.rows.push_back(nlm::CountsTable::Row{
      label, nlm::sample_counts(post_cells, config.shots, config.seed ^ 1ull),
      config.shots});

  if (config.format == "csv") {
    write_text(config.output_dir / "erasure_pre.csv",
               nlm::snapshot_counts_to_csv(label, pre_counts));
    write_text(config.output_dir / "erasure_post.csv", nlm::counts_table_to_csv(post));
  } else {
    write_json(config.output_dir / "erasure_pre.json",
               nlm::snapshot_counts_to_json(label, pre_counts));
    write_json(config.output_dir / "erasure_post.json", nlm::counts_table_to_json(post));
  }
  write_json(config.output_dir / "erasure_branches.json", nlm::outcome_to_json(outcome));

  std::cout << "p_success " << nlm::format_double(outcome.success_probability)
            << ", p_even " << nlm::format_double(outcome.even.probability) << ", p_odd "
            << nlm::format_double(outcome.odd.probability) << "\n";
  std::cout << "wrote erasure_pre/erasure_post." << config.format
            << " and erasure_branches.json in " << config.output_dir.string() << "\n";
  return 0;
}

int run_bell(const RunConfig& config) {
  nlm::CountsTable counts;
  json matrix_rows = json::array();
  std::string matrix_csv = "input,label,probability,count\n";

  for (std::size_t k = 0; k < nlm::kBellLabels.size(); ++k) {
    const nlm::BellLabel input = nlm::kBellLabels[k];
    const std::string input_name(nlm::bell_label_name(input));
    const nlm::ProtocolOutcome outcome = nlm::run_protocol(nlm::bell_state(input));
    const nlm::CellProbabilities cells = nlm::bell_cells(outcome, config.noise);
    const nlm::CellCounts sampled = nlm::sample_counts(cells, config.shots, config.seed ^ k);
    counts.rows.push_back(nlm::CountsTable::Row{input_name, sampled, config.shots});

    // Aggregate (channel, sigma_x product) cells into label probabilities:
    // product +1 <-> strings ++ and --, product -1 <-> +- and -+.
    const std::array<double, 4> label_p = {
        cells.p[nlm::kChannelL][0] + cells.p[nlm::kChannelL][3],
        cells.p[nlm::kChannelL][1] + cells.p[nlm::kChannelL][2],
        cells.p[nlm::kChannelR][0] + cells.p[nlm::kChannelR][3],
        cells.p[nlm::kChannelR][1] + cells.p[nlm::kChannelR][2]};
    const std::array<std::uint64_t, 4> label_n = {
        sampled[nlm::kChannelL][0] + sampled[nlm::kChannelL][3],
        sampled[nlm::kChannelL][1] + sampled[nlm::kChannelL][2],
        sampled[nlm::kChannelR][0] + sampled[nlm::kChannelR][3],
        sampled[nlm::kChannelR][1] + sampled[nlm::kChannelR][2]};
    for (std::size_t j = 0; j < 4; ++j) {
      const std::string label_name(nlm::bell_label_name(nlm::kBellLabels[j]));
      matrix_csv += input_name + "," + label_name + "," + nlm::format_double(label_p[j]) +
                    "," + std::to_string(label_n[j]) + "\n";
      matrix_rows.push_back(json{{"input", input_name},
                                 {"label", label_name},
                                 {"probability", label_p[j]},
                                 {"count", label_n[j]}});
    }
  }

  if (config.format == "csv") {
    write_text(config.output_dir / "bell_counts.csv",
               nlm::counts_table_to_csv(counts, nlm::kDiagonalBasisNames));
    write_text(config.output_dir / "bell_matrix.csv", matrix_csv);
  } else {
    write_json(config.output_dir / "bell_counts.json",
               nlm::counts_table_to_json(counts, nlm::kDiagonalBasisNames));
    write_json(config.output_dir / "bell_matrix.json", json{{"cells", matrix_rows}});
  }
  std::cout << "wrote bell_counts." << config.format << " and bell_matrix." << config.format
            << " in " << config.output_dir.string() << "\n";
  return 0;
}

nlm::DensityMatrix resolve_target(const std::string& text) {
  const auto it = named_states().find(text);
  if (it != named_states().end()) {
    const nlm::SystemAmplitudes s = it->second;
    return nlm::DensityMatrix::pure(Eigen::Vector4cd(s.alpha, s.beta, s.gamma, s.eta));
  }
  if (fs::exists(text)) {
    const json j = load_json_file(text);
    return nlm::density_from_json(j.contains("rho") ? j["rho"] : j);
  }
  const nlm::SystemAmplitudes s = nlm::parse_amplitude_list(text);
  return nlm::DensityMatrix::pure(Eigen::Vector4cd(s.alpha, s.beta, s.gamma, s.eta));
}

int run_tomo(const RunConfig& config, bool simulate, const std::string& input_csv,
             const std::string& target_arg, int bootstrap) {
  std::optional<nlm::DensityMatrix> target;
  if (!target_arg.empty()) {
    target = resolve_target(target_arg);
  }

  nlm::TomographyRecord record;
  if (simulate) {
    if (!target) {
      throw nlm::Error("tomo --simulate needs --target to know the true state");
    }
    record = nlm::simulate_tomography(*target, config.shots, config.seed);
    write_text(config.output_dir / "tomo_record.csv", nlm::tomography_record_to_csv(record));
  } else {
    if (input_csv.empty()) {
      throw nlm::Error("tomo needs --simulate or an --input record CSV");
    }
    std::ifstream in(input_csv);
    if (!in.good()) {
      throw nlm::Error("cannot open '" + input_csv + "'");
    }
    record = nlm::tomography_record_from_csv(in);
  }

  const nlm::MleResult result = nlm::mle_reconstruct(record);
  json out{{"rho", nlm::density_to_json(result.rho)},
           {"converged", result.converged},
           {"iterations", result.iterations},
           {"log_likelihood", result.log_likelihood}};
  if (target) {
    out["fidelity"] = nlm::fidelity(result.rho, *target);
    if (bootstrap >= 2) {
      out["fidelity_std"] =
          nlm::bootstrap_fidelity_std(record, *target, bootstrap, config.seed ^ 0xb00ull);
    }
  }
  write_json(config.output_dir / "tomo_mle.json", out);

  if (target) {
    std::cout << "fidelity " << nlm::format_double(out["fidelity"].get<double>());
    if (out.contains("fidelity_std")) {
      std::cout << " +/- " << nlm::format_double(out["fidelity_std"].get<double>());
    }
    std::cout << "\n";
  }
  std::cout << "wrote tomo_mle.json in " << config.output_dir.string() << "\n";
  return 0;
}

int run_circuit(const RunConfig& config, const std::string& circuit_path,
                const std::string& prepare_arg) {
  std::ifstream in(circuit_path);
  if (!in.good()) {
    throw nlm::Error("cannot open '" + circuit_path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  nlm::CircuitProgram program = nlm::parse(buffer.str());
  if (!prepare_arg.empty()) {
    program.instructions[0].op = nlm::PrepareInstr{nlm::parse_amplitude_list(prepare_arg)};
  }

  const nlm::ExecutionTrace trace = nlm::execute(program);
  write_json(config.output_dir / "trace.json", nlm::trace_to_json(trace));

  std::cout << "cumulative probability " << nlm::format_double(trace.cumulative_probability)
            << "\n";
  if (trace.readout && trace.readout->kind == nlm::ReadoutKind::Parity) {
    std::cout << "p_even " << nlm::format_double(trace.readout->parity.p_even) << ", p_odd "
              << nlm::format_double(trace.readout->parity.p_odd) << "\n";
  }
  std::cout << "wrote trace.json in " << config.output_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"erasure-based nonlocal parity and Bell measurement simulator"};
  app.require_subcommand(1);

  RunConfig parity_cfg, erasure_cfg, bell_cfg, tomo_cfg, run_cfg;
  std::vector<std::string> parity_states;
  std::string erasure_state = "dr";
  bool tomo_simulate = false;
  std::string tomo_input, tomo_target;
  int tomo_bootstrap = 100;
  std::string circuit_path, prepare_arg;

  CLI::App* parity = app.add_subcommand("parity", "coincidence counts per parity channel");
  CommonFlags parity_flags = add_common_flags(parity, parity_cfg);
  parity->add_option("--state", parity_states,
                     "input state (name or \"a b c d\"); repeatable; default: the four "
                     "polarization basis states");

  CLI::App* erasure =
      app.add_subcommand("erasure", "which-path record before and after the eraser");
  CommonFlags erasure_flags = add_common_flags(erasure, erasure_cfg);
  erasure->add_option("--state", erasure_state, "input state (default: dr)");

  CLI::App* bell = app.add_subcommand("bell", "label-vs-input matrix for the Bell states");
  CommonFlags bell_flags = add_common_flags(bell, bell_cfg);

  CLI::App* tomo = app.add_subcommand("tomo", "two-qubit tomography with MLE");
  CommonFlags tomo_flags = add_common_flags(tomo, tomo_cfg);
  tomo->add_flag("--simulate", tomo_simulate, "draw the record from --target");
  tomo->add_option("--input", tomo_input, "record CSV (setting_a,setting_b,count,shots)");
  tomo->add_option("--target", tomo_target, "reference state name, amplitudes or rho JSON");
  tomo->add_option("--bootstrap", tomo_bootstrap,
                   "parametric bootstrap resamples for the fidelity spread (0 disables)");

  CLI::App* run = app.add_subcommand("run", "execute a .qec circuit file");
  CommonFlags run_flags = add_common_flags(run, run_cfg);
  run->add_option("circuit", circuit_path, "circuit file")->required();
  run->add_option("--prepare", prepare_arg, "override the prepare amplitudes \"a b c d\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (parity->parsed()) {
      return run_parity(finalize_config(parity_flags, parity_cfg), parity_states);
    }
    if (erasure->parsed()) {
      return run_erasure(finalize_config(erasure_flags, erasure_cfg), erasure_state);
    }
    if (bell->parsed()) {
      return run_bell(finalize_config(bell_flags, bell_cfg));
    }
    if (tomo->parsed()) {
      return run_tomo(finalize_config(tomo_flags, tomo_cfg), tomo_simulate, tomo_input,
                      tomo_target, tomo_bootstrap);
    }
    if (run->parsed()) {
      return run_circuit(finalize_config(run_flags, run_cfg), circuit_path, prepare_arg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
