#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "airgan/gan/gan.hpp"
#include "airgan/synthesis/synthesis.hpp"

namespace airgan::augment {

enum class Stage { kEncode, kTrain, kGenerate, kStats };

Stage parse_stage(std::string_view name);
std::string_view to_string(Stage stage);

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path out;
  std::vector<std::string> rooms;  ///< empty: every room in the manifest
  std::size_t count = 100;         ///< generated AIRs per room
  std::uint64_t seed = 0;
  std::size_t jobs = 1;            ///< 0: one per hardware thread
  int max_retries = 20;            ///< re-draws per generated sample
  bool force = false;              ///< retrain rooms whose checkpoint matches
  SynthesisConfig synthesis;
  gan::GanConfig gan;
  std::vector<Stage> stages{Stage::kEncode, Stage::kTrain, Stage::kGenerate, Stage::kStats};

  /// Throws PreconditionError naming the first bad field. Paths are only
  /// checked when a stage needs them.
  void validate() const;

  /// Sets one field from its config-file key. Throws PreconditionError on
  /// an unknown key or unparsable value.
  void set(std::string_view key, std::string_view value);

  /// `key = value` lines; `#` starts a comment.
  static RunConfig read(const std::filesystem::path& path);
  void read_into(const std::filesystem::path& path);
  std::string to_text() const;
  void write(const std::filesystem::path& path) const;
};

/// Seed for one room: the run seed mixed with an FNV-1a hash of the label.
std::uint64_t room_seed(std::uint64_t run_seed, std::string_view room);

/// SplitMix64 finaliser of `seed` and `index`; used to give every
/// generated sample and retry its own seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace airgan::augment
