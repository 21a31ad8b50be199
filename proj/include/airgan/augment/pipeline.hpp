#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "airgan/augment/run_config.hpp"
#include "airgan/core/manifest.hpp"
#include "airgan/estimation/low_dim_rep.hpp"

namespace airgan::augment {

/// Outcome of one stage over all requested rooms. `failures` holds one
/// line per failed file or room; the stage succeeded when it is empty.
struct StageReport {
  Stage stage = Stage::kEncode;
  std::vector<std::string> rooms;
  std::vector<std::string> failures;
  std::size_t files_written = 0;

  bool ok() const noexcept { return failures.empty(); }
};

/// Thread-safe line logger; lines go to stderr unless a sink is installed.
class Log {
 public:
  using Sink = std::function<void(const std::string&)>;
  static void set_sink(Sink sink);
  static void line(const std::string& text);

 private:
  static std::mutex mutex_;
  static Sink sink_;
};

/// Output tree under RunConfig::out.
struct Layout {
  std::filesystem::path root;

  std::filesystem::path reps(const std::string& room) const { return root / "reps" / room; }
  std::filesystem::path bank(const std::string& room) const {
    return root / "banks" / (room + ".bank");
  }
  std::filesystem::path model(const std::string& room) const { return root / "models" / room; }
  std::filesystem::path generated(const std::string& room) const {
    return root / "generated" / room;
  }
  std::filesystem::path stats(const std::string& room) const { return root / "stats" / room; }
  std::filesystem::path encode_summary() const { return root / "encode_summary.csv"; }
  std::filesystem::path generate_summary() const { return root / "generate_summary.csv"; }
  std::filesystem::path stats_summary() const { return root / "stats" / "summary.csv"; }
  std::filesystem::path effective_config() const { return root / "run_config.txt"; }
};

/// Rooms the run covers: cfg.rooms if given (each must be in the
/// manifest), otherwise every manifest room.
std::vector<std::string> select_rooms(const RunConfig& cfg, const DatasetManifest& manifest);

/// Every `*.rep.csv` in `dir`, sorted by file name.
std::vector<std::filesystem::path> rep_files(const std::filesystem::path& dir);
LowDimRep read_rep(const std::filesystem::path& path);
void write_rep(const std::filesystem::path& path, const LowDimRep& rep);

/// Runs `task(i)` for i in [0, n) on up to `jobs` threads (0: hardware).
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task);

/// Manifest AIRs -> reps/<room>/*.rep.csv, banks/<room>.bank and the
/// encode summary. An empty manifest throws before anything is written.
StageReport run_encode(const RunConfig& cfg);
/// reps -> models/<room>.{gen.nn,disc.nn,json,history.csv}. A room whose
/// checkpoint already holds a finished run with the same config is skipped
/// unless cfg.force is set.
StageReport run_train(const RunConfig& cfg);
/// models + banks -> generated/<room>/gen_<i>.{rep.csv,wav}, each read
/// back and revalidated.
StageReport run_generate(const RunConfig& cfg);
/// reps + generated reps -> stats/<room>.{csv,json} and stats/summary.csv.
StageReport run_stats(const RunConfig& cfg);

/// The stages listed in cfg.stages, in order, stopping after the first
/// stage that reports a failure.
std::vector<StageReport> run_pipeline(const RunConfig& cfg);

}  // namespace airgan::augment
