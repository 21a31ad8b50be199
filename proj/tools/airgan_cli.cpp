// airgan: encode measured AIRs, train one GAN per room, generate and decode
// artificial AIRs, and compare parameter distributions.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "airgan/augment/pipeline.hpp"
#include "airgan/augment/run_config.hpp"
#include "airgan/core/error.hpp"
#include "airgan/core/wav.hpp"
#include "airgan/estimation/excitation_bank.hpp"
#include "airgan/synthesis/synthesis.hpp"

using namespace airgan;
using namespace airgan::augment;

namespace {

// Flag values override the config file, which overrides the defaults.
struct Overrides {
  std::string config;
  std::optional<std::string> manifest, out, mix_mode;
  std::vector<std::string> rooms;
  std::optional<std::size_t> count, jobs;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs, max_retries;
  std::optional<Eigen::Index> hidden, batch_size;
  std::optional<double> length_s;
  bool force = false;

  void add_to(CLI::App* app, bool needs_manifest) {
    app->add_option("--config", config, "key = value run config file")->check(CLI::ExistingFile);
    auto* m = app->add_option("--manifest", manifest, "manifest.csv (path,room,meta)");
    if (needs_manifest) m->check(CLI::ExistingFile);
    app->add_option("--out", out, "output directory");
    app->add_option("--rooms", rooms, "rooms to process (default: all)")->delimiter(',');
    app->add_option("--count", count, "generated AIRs per room");
    app->add_option("--seed", seed, "run seed");
    app->add_option("--epochs", epochs, "GAN training epochs");
    app->add_option("--hidden", hidden, "GAN hidden layer width");
    app->add_option("--batch-size", batch_size, "GAN minibatch size");
    app->add_option("--mix-mode", mix_mode, "tail cross-fade: continuous or verbatim");
    app->add_option("--jobs", jobs, "rooms processed in parallel (0: all cores)");
    app->add_option("--length-s", length_s, "decoded AIR length in seconds");
    app->add_option("--max-retries", max_retries, "re-draws per invalid generated sample");
    app->add_flag("--force", force, "retrain rooms whose checkpoint is current");
  }

  RunConfig resolve(std::vector<Stage> stages) const {
    RunConfig cfg;
    if (!config.empty()) cfg.read_into(config);
    if (manifest) cfg.manifest = *manifest;
    if (out) cfg.out = *out;
    if (!rooms.empty()) cfg.rooms = rooms;
    if (count) cfg.count = *count;
    if (seed) cfg.seed = *seed;
    if (epochs) cfg.gan.epochs = *epochs;
    if (hidden) cfg.gan.hidden = *hidden;
    if (batch_size) cfg.gan.batch_size = *batch_size;
    if (mix_mode) cfg.set("mix_mode", *mix_mode);
    if (jobs) cfg.jobs = *jobs;
    if (length_s) cfg.set("length_s", std::to_string(*length_s));
    if (max_retries) cfg.max_retries = *max_retries;
    if (force) cfg.force = true;
    if (!stages.empty()) cfg.stages = std::move(stages);
    return cfg;
  }
};

int summarize(const std::vector<StageReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << to_string(r.stage) << ": " << r.rooms.size() << " rooms, " << r.files_written
              << " files, " << r.failures.size() << " failures\n";
    for (const auto& f : r.failures) std::cout << "  " << f << '\n';
    ok = ok && r.ok();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-dimensional AIR codec and per-room GAN augmentation"};
  app.require_subcommand(1);

  Overrides encode_o, train_o, generate_o, stats_o, pipeline_o;
  auto* encode_cmd = app.add_subcommand("encode", "AIRs -> reps and excitation banks");
  encode_o.add_to(encode_cmd, true);
  auto* train_cmd = app.add_subcommand("train", "reps -> one GAN checkpoint per room");
  train_o.add_to(train_cmd, false);
  auto* generate_cmd = app.add_subcommand("generate", "checkpoints -> generated reps and WAVs");
  generate_o.add_to(generate_cmd, false);
  auto* stats_cmd = app.add_subcommand("stats", "real vs generated distribution reports");
  stats_o.add_to(stats_cmd, false);
  auto* pipeline_cmd = app.add_subcommand("pipeline", "encode, train, generate and stats");
  pipeline_o.add_to(pipeline_cmd, true);

  std::string rep_path, bank_path, wav_path, decode_mix = "continuous";
  std::uint64_t decode_seed = 0;
  auto* decode_cmd = app.add_subcommand("decode", "one rep file -> WAV");
  decode_cmd->add_option("--rep", rep_path, "input .rep.csv")->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("--bank", bank_path, "excitation bank")->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("--wav", wav_path, "output WAV")->required();
  decode_cmd->add_option("--seed", decode_seed, "tail noise and excitation seed");
  decode_cmd->add_option("--mix-mode", decode_mix, "continuous or verbatim");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*decode_cmd) {
      SynthesisConfig sc;
      sc.seed = decode_seed;
      sc.mix_mode = parse_mix_mode(decode_mix);
      const auto rep = read_rep(rep_path);
      if (const auto v = rep.violations(); !v.empty()) throw PreconditionError("invalid rep: " + v.front());
      save_air(decode(rep, ExcitationBank::read(bank_path), sc), wav_path);
      return 0;
    }
    if (*encode_cmd) return summarize({run_encode(encode_o.resolve({Stage::kEncode}))});
    if (*train_cmd) return summarize({run_train(train_o.resolve({Stage::kTrain}))});
    if (*generate_cmd) return summarize({run_generate(generate_o.resolve({Stage::kGenerate}))});
    if (*stats_cmd) return summarize({run_stats(stats_o.resolve({Stage::kStats}))});
    return summarize(run_pipeline(pipeline_o.resolve({})));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
