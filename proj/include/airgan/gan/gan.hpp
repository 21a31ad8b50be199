#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "airgan/core/error.hpp"
#include "airgan/estimation/low_dim_rep.hpp"
#include "airgan/gan/normalizer.hpp"
#include "airgan/nn/adam.hpp"
#include "airgan/nn/network.hpp"

namespace airgan::gan {

/// Tap count of the FIR-domain network variant.
inline constexpr Eigen::Index kFirTaps = 33248;

struct GanConfig {
  Eigen::Index latent_dim = 20;
  Eigen::Index hidden = 256;
  int epochs = 6000;
  Eigen::Index batch_size = 32;
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double instance_noise_sigma = 0.1;
  std::uint64_t seed = 0;
  /// When false only the discriminator is updated.
  bool train_generator = true;

  nn::AdamConfig adam() const { return {lr, beta1, beta2, 1e-8}; }

  friend bool operator==(const GanConfig&, const GanConfig&) = default;
};

struct EpochStats {
  double d_loss = 0.0;
  double g_loss = 0.0;
  double d_accuracy = 0.0;  ///< real and generated samples, threshold 0.5
};

struct GanModel {
  nn::Network generator;
  nn::Network discriminator;
  MinMaxNormalizer normalizer;
  std::string room_label;
  GanConfig config;
  std::vector<EpochStats> history;
};

/// A non-finite loss during training.
class TrainingError : public Error {
 public:
  TrainingError(int epoch, const std::string& what)
      : Error("epoch " + std::to_string(epoch) + ": " + what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// Generator: latent -> [Dense, LeakyReLU, BatchNorm] x 3 -> Dense(dim) ->
/// Sigmoid. Discriminator: dim -> [Dense, LeakyReLU] x 2 -> Dense(1) ->
/// Sigmoid. Glorot-initialised from cfg.seed.
GanModel build_gan(const GanConfig& cfg, Eigen::Index data_dim);
GanModel build_lowdim_gan(const GanConfig& cfg);
GanModel build_fir_gan(const GanConfig& cfg, Eigen::Index taps = kFirTaps);

/// Adversarial training on the rows of `data` (raw scale). Fits the
/// normaliser, appends one history entry per epoch, and finally rounds the
/// weights to float precision. Deterministic in cfg.seed.
void train(GanModel& model, const Eigen::MatrixXd& data, const GanConfig& cfg);
void train(GanModel& model, std::span<const LowDimRep> reps, const GanConfig& cfg);

/// n generator outputs (inference mode) mapped back to the raw scale.
Eigen::MatrixXd sample(GanModel& model, Eigen::Index n, std::uint64_t seed);

/// Counts of repairs applied while turning raw samples into valid reps.
struct RepairCounts {
  std::size_t clamped_scalars = 0;   ///< T60/eta values raised to the training minimum
  std::size_t reordered_toas = 0;    ///< vectors whose reflections needed re-sorting/packing
  std::size_t dropped_reflections = 0;
  std::size_t stabilized_filters = 0;
  std::size_t invalid = 0;           ///< vectors still failing validation after repair

  RepairCounts& operator+=(const RepairCounts& o);
};

/// TOA entries below this many samples are treated as empty padding.
inline constexpr double kMinGeneratedToa = 0.5;

/// Post-processing of one raw 170-value vector: scalar clamping, reflection
/// packing (TOA-sorted, padding first), clamping to the early window, and
/// pole stabilisation.
LowDimRep repair_rep(std::span<const double> raw, const MinMaxNormalizer& normalizer,
                     int sample_rate, RepairCounts& counts);

struct Generated {
  std::vector<LowDimRep> reps;
  RepairCounts repairs;
};

/// n repaired reps from a low-dimensional model.
Generated generate(GanModel& model, std::size_t n, std::uint64_t seed, int sample_rate = 16000);

/// Drops denominator poles outside the unit circle (numerator untouched).
LowDimRep stabilize_poles(const LowDimRep& rep, bool* changed = nullptr);

}  // namespace airgan::gan
