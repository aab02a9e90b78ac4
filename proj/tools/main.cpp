// Command-line front end: denoise files, simulate sources and run the
// experiment harnesses.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdude/context_index.hpp"
#include "sdude/core_model.hpp"
#include "sdude/dude.hpp"
#include "sdude/evalkit.hpp"
#include "sdude/sequence_io.hpp"
#include "sdude/shifting.hpp"
#include "sdude/sources.hpp"

namespace {

using namespace sdude;

struct DenoiseArgs {
  std::string input;
  std::string output;
  std::string format = "raw";
  std::string channel = "bsc:0.1";
  std::string h_matrix;
  std::string loss = "hamming";
  std::size_t k = 0;
  std::size_t m = 0;
  std::string emit_schedule;
  std::string algorithm = "sdude";
  std::string boundary = "auto";
};

BoundaryPolicy parse_boundary(const std::string& text) {
  if (text == "auto") return {};
  if (text == "copy") return {BoundaryRule::kCopyNoisy, 0};
  if (text.starts_with("fixed:")) {
    return {BoundaryRule::kFixed, static_cast<Symbol>(std::stoul(text.substr(6)))};
  }
  throw ValidationError("boundary must be auto, copy or fixed:<symbol>");
}

nlohmann::json schedule_json(const SwitchingSchedule& schedule, const ContextPartition& partition) {
  nlohmann::json contexts = nlohmann::json::array();
  for (ContextId id : partition.contexts()) {
    const auto occ = partition.occurrences(id);
    nlohmann::json segments = nlohmann::json::array();
    std::optional<std::uint32_t> current;
    for (std::size_t t : occ) {
      const std::uint32_t s = schedule.denoiser_at(t);
      if (!current || *current != s) {
        segments.push_back({{"start", t}, {"denoiser", s}});
        current = s;
      }
    }
    const auto [left, right] = partition.decode(id);
    contexts.push_back({{"context", id},
                        {"left", left},
                        {"right", right},
                        {"occurrences", occ.size()},
                        {"switches", schedule.per_context_switches.at(id)},
                        {"segments", segments}});
  }
  return {{"k", schedule.k}, {"m", schedule.m}, {"contexts", contexts}};
}

int run_denoise(const DenoiseArgs& args) {
  const SequenceFormat format = parse_format(args.format);
  ChannelModel channel = channel_from_descriptor(args.channel);
  if (!args.h_matrix.empty()) channel = build_channel(channel.pi(), read_matrix_file(args.h_matrix));
  const LossMatrix loss = loss_from_descriptor(args.loss);
  const BoundaryPolicy boundary = parse_boundary(args.boundary);
  if (args.algorithm != "sdude" && args.algorithm != "dude") {
    throw ValidationError("algorithm must be sdude or dude");
  }

  LoadedSequence loaded = read_sequence(args.input, format);
  const SymbolSequence z(std::move(loaded.symbols), channel.noisy_size());

  std::string output_bytes;
  std::string schedule_bytes;
  if (args.algorithm == "dude") {
    if (!args.emit_schedule.empty()) throw ValidationError("--emit-schedule needs --algorithm sdude");
    output_bytes = encode_sequence(dude_denoise(z, args.k, channel, loss, boundary).symbols(),
                                   format, loaded.pbm);
  } else {
    const ShiftingResult result = sdude_denoise(z, args.k, args.m, channel, loss, boundary);
    output_bytes = encode_sequence(result.output.symbols(), format, loaded.pbm);
    if (!args.emit_schedule.empty()) {
      schedule_bytes = schedule_json(result.schedule, build_partition(z, args.k)).dump(2) + "\n";
    }
  }
  // Everything is computed before anything is written.
  write_file_atomic(args.output, output_bytes);
  if (!schedule_bytes.empty()) write_file_atomic(args.emit_schedule, schedule_bytes);
  return 0;
}

struct SimulateArgs {
  std::string spec;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "raw";
};

int run_simulate(const SimulateArgs& args) {
  const SequenceFormat format = parse_format(args.format);
  if (format == SequenceFormat::kPbm) throw ValidationError("simulate writes raw or text");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(args.spec));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("cannot parse source spec: ") + e.what());
  }
  const PiecewiseSourceSpec spec = spec_from_json(j, args.n);
  const SymbolSequence x = sample_piecewise(spec, args.n, args.seed);
  write_file_atomic(args.output, encode_sequence(x.symbols(), format));
  return 0;
}

struct CorruptArgs {
  std::string input;
  std::string output;
  std::string format = "raw";
  std::string channel = "bsc:0.1";
  std::uint64_t seed = 1;
};

int run_corrupt(const CorruptArgs& args) {
  const SequenceFormat format = parse_format(args.format);
  const ChannelModel channel = channel_from_descriptor(args.channel);
  LoadedSequence loaded = read_sequence(args.input, format);
  const SymbolSequence x(std::move(loaded.symbols), channel.clean_size());
  const SymbolSequence z = corrupt(x, channel, args.seed);
  write_file_atomic(args.output, encode_sequence(z.symbols(), format, loaded.pbm));
  return 0;
}

void write_report(const std::string& out, const std::string& json, const std::string& csv) {
  if (out.empty()) {
    std::cout << json;
    return;
  }
  write_file_atomic(out, json);
  write_file_atomic(out + ".csv", csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shifting discrete universal denoiser"};
  app.require_subcommand(1);

  DenoiseArgs denoise;
  auto* cmd_denoise = app.add_subcommand("denoise", "Denoise a sequence file");
  cmd_denoise->add_option("--input", denoise.input, "Noisy input file")->required();
  cmd_denoise->add_option("--output", denoise.output, "Output file")->required();
  cmd_denoise->add_option("--format", denoise.format, "raw | text | pbm")
      ->check(CLI::IsMember({"raw", "text", "pbm"}));
  cmd_denoise->add_option("--channel", denoise.channel, "bsc:<delta> | identity[:q] | FILE");
  cmd_denoise->add_option("--h-matrix", denoise.h_matrix, "Explicit right inverse H (FILE)");
  cmd_denoise->add_option("--loss", denoise.loss, "hamming[:q] | FILE");
  cmd_denoise->add_option("--k", denoise.k, "Context half-width");
  cmd_denoise->add_option("--m", denoise.m, "Switches allowed per context");
  cmd_denoise->add_option("--emit-schedule", denoise.emit_schedule, "Write the schedule as JSON");
  cmd_denoise->add_option("--algorithm", denoise.algorithm, "sdude | dude")
      ->check(CLI::IsMember({"sdude", "dude"}));
  cmd_denoise->add_option("--boundary", denoise.boundary, "auto | copy | fixed:<symbol>");

  SimulateArgs simulate;
  auto* cmd_simulate = app.add_subcommand("simulate", "Sample a piecewise stationary source");
  cmd_simulate->add_option("--spec", simulate.spec, "Source spec JSON")->required();
  cmd_simulate->add_option("--n", simulate.n, "Sequence length")->required();
  cmd_simulate->add_option("--seed", simulate.seed, "Random seed");
  cmd_simulate->add_option("--output", simulate.output, "Output file")->required();
  cmd_simulate->add_option("--format", simulate.format, "raw | text")
      ->check(CLI::IsMember({"raw", "text"}));

  CorruptArgs corrupt_args;
  auto* cmd_corrupt = app.add_subcommand("corrupt", "Pass a clean sequence through a channel");
  cmd_corrupt->add_option("--input", corrupt_args.input, "Clean input file")->required();
  cmd_corrupt->add_option("--output", corrupt_args.output, "Output file")->required();
  cmd_corrupt->add_option("--format", corrupt_args.format, "raw | text | pbm")
      ->check(CLI::IsMember({"raw", "text", "pbm"}));
  cmd_corrupt->add_option("--channel", corrupt_args.channel, "bsc:<delta> | identity[:q] | FILE");
  cmd_corrupt->add_option("--seed", corrupt_args.seed, "Random seed");

  auto* cmd_experiment = app.add_subcommand("experiment", "Run an experiment harness");
  cmd_experiment->require_subcommand(1);
  std::string out;
  std::uint64_t seed = 1;

  std::size_t tb_n = 160000;
  double tb_delta = 0.1;
  std::size_t tb_k = 0;
  std::size_t tb_m = 1;
  std::size_t tb_seeds = 1;
  auto* exp_two_block = cmd_experiment->add_subcommand("two-block", "Two-block binary source");
  exp_two_block->add_option("--n", tb_n, "Sequence length");
  exp_two_block->add_option("--delta", tb_delta, "BSC crossover probability");
  exp_two_block->add_option("--k", tb_k, "Context half-width");
  exp_two_block->add_option("--m", tb_m, "Switch budget");
  exp_two_block->add_option("--seed", seed, "First seed");
  exp_two_block->add_option("--seeds", tb_seeds, "Number of consecutive seeds");
  exp_two_block->add_option("--out", out, "Report path (JSON; CSV written alongside)");

  HmmExperimentConfig hmm;
  auto* exp_hmm = cmd_experiment->add_subcommand("switching-hmm", "Switching binary hidden Markov process");
  exp_hmm->add_option("--n", hmm.n, "Sequence length");
  exp_hmm->add_option("--delta", hmm.delta, "BSC crossover probability");
  exp_hmm->add_option("--p1", hmm.p1, "Flip probability before the switch");
  exp_hmm->add_option("--p2", hmm.p2, "Flip probability after the switch");
  exp_hmm->add_option("--switch-at", hmm.switch_at, "Symbols before the switch");
  exp_hmm->add_option("--k", hmm.k_list, "Context half-widths")->delimiter(',');
  exp_hmm->add_option("--m", hmm.m_list, "Switch budgets")->delimiter(',');
  exp_hmm->add_option("--seed", seed, "Seed");
  bool no_genie = false;
  exp_hmm->add_flag("--no-genie", no_genie, "Skip the genie D_{k,m} columns");
  exp_hmm->add_option("--out", out, "Report path (JSON; CSV written alongside)");

  std::string conc_source = "two-block";
  std::string conc_channel = "bsc:0.1";
  std::string conc_loss = "hamming";
  std::size_t conc_k = 0;
  std::size_t conc_m = 1;
  std::vector<std::size_t> conc_n = {1000, 10000, 100000};
  std::size_t conc_trials = 50;
  std::uint64_t conc_source_seed = 0;
  auto* exp_conc = cmd_experiment->add_subcommand("concentration", "Gap to the genie versus n");
  exp_conc->add_option("--source", conc_source, "two-block | spec JSON (switch_fractions)");
  exp_conc->add_option("--source-seed", conc_source_seed, "Seed for sampling the clean source");
  exp_conc->add_option("--channel", conc_channel, "bsc:<delta> | identity[:q] | FILE");
  exp_conc->add_option("--loss", conc_loss, "hamming[:q] | FILE");
  exp_conc->add_option("--k", conc_k, "Context half-width");
  exp_conc->add_option("--m", conc_m, "Switch budget");
  exp_conc->add_option("--n", conc_n, "Sequence lengths")->delimiter(',');
  exp_conc->add_option("--trials", conc_trials, "Channel realizations per length");
  exp_conc->add_option("--seed", seed, "Seed");
  exp_conc->add_option("--out", out, "Report path (JSON; CSV written alongside)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_denoise->parsed()) return run_denoise(denoise);
    if (cmd_simulate->parsed()) return run_simulate(simulate);
    if (cmd_corrupt->parsed()) return run_corrupt(corrupt_args);
    if (exp_two_block->parsed()) {
      std::vector<std::uint64_t> seeds;
      for (std::size_t i = 0; i < tb_seeds; ++i) seeds.push_back(seed + i);
      const EvalReport report = run_two_block_experiment(tb_n, tb_delta, tb_k, tb_m, seeds);
      write_report(out, report.to_json().dump(2) + "\n", report.to_csv());
      return 0;
    }
    if (exp_hmm->parsed()) {
      hmm.seed = seed;
      hmm.with_genie = !no_genie;
      const EvalReport report = run_switching_hmm_experiment(hmm);
      write_report(out, report.to_json().dump(2) + "\n", report.to_csv());
      return 0;
    }
    if (exp_conc->parsed()) {
      const ChannelModel channel = channel_from_descriptor(conc_channel);
      const LossMatrix loss = loss_from_descriptor(conc_loss);
      CleanSource source;
      if (conc_source == "two-block") {
        source = [](std::size_t n) { return sample_piecewise(two_block_spec(n), n, 0); };
      } else {
        const nlohmann::json spec_json = nlohmann::json::parse(read_file(conc_source));
        source = [spec_json, conc_source_seed](std::size_t n) {
          return sample_piecewise(spec_from_json(spec_json, n), n, conc_source_seed);
        };
      }
      const ConcentrationTable table =
          concentration_sweep(source, channel, loss, conc_k, conc_m, conc_n, conc_trials, seed);
      write_report(out, table.to_json().dump(2) + "\n", table.to_csv());
      return 0;
    }
  } catch (const sdude::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
