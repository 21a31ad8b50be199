#include "airgan/gan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "airgan/estimation/poles.hpp"
#include "airgan/estimation/reverb_time.hpp"
#include "airgan/nn/loss.hpp"

namespace airgan::gan {

namespace {

// Independent generator streams derived from one seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum Stream : std::uint64_t { kInit = 0, kShuffle = 1, kLatent = 2, kNoise = 3 };

nn::Matrix gaussian(Eigen::Index rows, Eigen::Index cols, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  nn::Matrix m(rows, cols);
  // Filled row by row so a sample's values do not depend on the batch size.
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = sigma * n(rng);
  }
  return m;
}

nn::Network build_generator(const GanConfig& cfg, Eigen::Index dim) {
  nn::Network g(cfg.latent_dim);
  Eigen::Index width = cfg.latent_dim;
  for (int i = 0; i < 3; ++i) {
    g.add(nn::Dense(width, cfg.hidden)).add(nn::LeakyReLU{}).add(nn::BatchNorm(cfg.hidden));
    width = cfg.hidden;
  }
  g.add(nn::Dense(width, dim)).add(nn::Sigmoid{});
  return g;
}

nn::Network build_discriminator(const GanConfig& cfg, Eigen::Index dim) {
  nn::Network d(dim);
  d.add(nn::Dense(dim, cfg.hidden)).add(nn::LeakyReLU{});
  d.add(nn::Dense(cfg.hidden, cfg.hidden)).add(nn::LeakyReLU{});
  d.add(nn::Dense(cfg.hidden, 1)).add(nn::Sigmoid{});
  return d;
}

}  // namespace

GanModel build_gan(const GanConfig& cfg, Eigen::Index data_dim) {
  if (cfg.latent_dim <= 0 || cfg.hidden <= 0 || data_dim <= 0) {
    throw PreconditionError("build_gan: widths must be positive");
  }
  if (!(cfg.instance_noise_sigma >= 0.0)) throw PreconditionError("build_gan: negative noise sigma");
  GanModel m{build_generator(cfg, data_dim), build_discriminator(cfg, data_dim), {}, {}, cfg, {}};
  std::mt19937_64 rng(stream_seed(cfg.seed, kInit));
  m.generator.glorot_init(rng);
  m.discriminator.glorot_init(rng);
  return m;
}

GanModel build_lowdim_gan(const GanConfig& cfg) {
  return build_gan(cfg, static_cast<Eigen::Index>(kRepLength));
}

GanModel build_fir_gan(const GanConfig& cfg, Eigen::Index taps) { return build_gan(cfg, taps); }

void train(GanModel& model, const Eigen::MatrixXd& data, const GanConfig& cfg) {
  const Eigen::Index dim = model.discriminator.input_width();
  if (data.cols() != dim) {
    throw PreconditionError("train: data width " + std::to_string(data.cols()) +
                            " does not match the model width " + std::to_string(dim));
  }
  if (cfg.batch_size < 2) throw PreconditionError("train: batch size must be at least 2");
  if (data.rows() < cfg.batch_size) {
    throw PreconditionError("train: " + std::to_string(data.rows()) +
                            " training vectors, need at least the batch size " +
                            std::to_string(cfg.batch_size));
  }
  if (cfg.epochs < 0) throw PreconditionError("train: negative epoch count");

  model.config = cfg;
  model.normalizer = MinMaxNormalizer::fit(data);
  const nn::Matrix real_all = model.normalizer.normalize(data);

  std::mt19937_64 shuffle_rng(stream_seed(cfg.seed, kShuffle));
  std::mt19937_64 latent_rng(stream_seed(cfg.seed, kLatent));
  std::mt19937_64 noise_rng(stream_seed(cfg.seed, kNoise));
  nn::Adam opt_g(model.generator, cfg.adam());
  nn::Adam opt_d(model.discriminator, cfg.adam());
  auto& g = model.generator;
  auto& d = model.discriminator;
  g.set_mode(nn::Mode::kTrain);
  d.set_mode(nn::Mode::kTrain);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const double sigma = cfg.instance_noise_sigma;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double d_loss = 0.0, g_loss = 0.0;
    std::size_t correct = 0, judged = 0, batches = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const auto b = static_cast<Eigen::Index>(stop - start);
      if (b < 2) break;

      nn::Matrix real(b, dim);
      for (Eigen::Index r = 0; r < b; ++r) real.row(r) = real_all.row(order[start + static_cast<std::size_t>(r)]);
      const nn::Matrix fake = g.forward(gaussian(b, cfg.latent_dim, 1.0, latent_rng));

      // Discriminator: real labelled 1, generated labelled 0.
      nn::Matrix d_in(2 * b, dim);
      d_in.topRows(b) = real + gaussian(b, dim, sigma, noise_rng);
      d_in.bottomRows(b) = fake + gaussian(b, dim, sigma, noise_rng);
      nn::Matrix labels(2 * b, 1);
      labels.topRows(b).setOnes();
      labels.bottomRows(b).setZero();
      const nn::Matrix p = d.forward(d_in);
      const auto dl = nn::bce_loss(p, labels);
      d.zero_grad();
      d.backward_from_logits(dl.grad_logits);
      opt_d.step();
      for (Eigen::Index r = 0; r < 2 * b; ++r) {
        correct += (p(r, 0) >= 0.5) == (labels(r, 0) == 1.0) ? 1 : 0;
      }
      judged += static_cast<std::size_t>(2 * b);

      // Generator: make the discriminator call fresh samples real.
      const nn::Matrix fresh = g.forward(gaussian(b, cfg.latent_dim, 1.0, latent_rng));
      const nn::Matrix q = d.forward(fresh + gaussian(b, dim, sigma, noise_rng));
      const auto gl = nn::bce_loss(q, nn::Matrix::Ones(b, 1));
      if (cfg.train_generator) {
        d.zero_grad();
        const nn::Matrix grad_fake = d.backward_from_logits(gl.grad_logits);
        g.zero_grad();
        g.backward(grad_fake);
        opt_g.step();
      }

      if (!std::isfinite(dl.loss) || !std::isfinite(gl.loss)) {
        throw TrainingError(epoch, "non-finite loss");
      }
      d_loss += dl.loss;
      g_loss += gl.loss;
      ++batches;
    }
    const double nb = static_cast<double>(std::max<std::size_t>(batches, 1));
    model.history.push_back({d_loss / nb, g_loss / nb,
                             judged ? static_cast<double>(correct) / static_cast<double>(judged) : 0.0});
  }
  g.round_to_float();
  d.round_to_float();
}

void train(GanModel& model, std::span<const LowDimRep> reps, const GanConfig& cfg) {
  Eigen::MatrixXd data(static_cast<Eigen::Index>(reps.size()), static_cast<Eigen::Index>(kRepLength));
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto v = reps[i].values();
    for (std::size_t j = 0; j < kRepLength; ++j) {
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[j];
    }
  }
  train(model, data, cfg);
}

Eigen::MatrixXd sample(GanModel& model, Eigen::Index n, std::uint64_t seed) {
  if (model.normalizer.dim() != model.generator.output_width()) {
    throw PreconditionError("sample: model has no fitted normaliser (train or load it first)");
  }
  if (n <= 0) return Eigen::MatrixXd(0, model.generator.output_width());
  std::mt19937_64 rng(stream_seed(seed, kLatent));
  model.generator.set_mode(nn::Mode::kInference);
  const nn::Matrix out = model.generator.forward(gaussian(n, model.config.latent_dim, 1.0, rng));
  model.generator.set_mode(nn::Mode::kTrain);
  return model.normalizer.denormalize(out);
}

RepairCounts& RepairCounts::operator+=(const RepairCounts& o) {
  clamped_scalars += o.clamped_scalars;
  reordered_toas += o.reordered_toas;
  dropped_reflections += o.dropped_reflections;
  stabilized_filters += o.stabilized_filters;
  invalid += o.invalid;
  return *this;
}

LowDimRep repair_rep(std::span<const double> raw, const MinMaxNormalizer& normalizer,
                     int sample_rate, RepairCounts& counts) {
  if (raw.size() != kRepLength) throw PreconditionError("repair_rep: expected 170 values");
  auto rep = LowDimRep::from_values(raw);
  auto v = rep.mutable_values();
  if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
    ++counts.invalid;
    return rep;
  }

  for (std::size_t i : {layout::kT60, layout::kEta1, layout::kEta2}) {
    const double floor = normalizer.dim() == static_cast<Eigen::Index>(kRepLength) &&
                                 normalizer.min()(static_cast<Eigen::Index>(i)) > 0.0
                             ? normalizer.min()(static_cast<Eigen::Index>(i))
                             : 1e-6;
    if (!(v[i] > 0.0)) {
      v[i] = floor;
      ++counts.clamped_scalars;
    }
  }
  if (v[layout::kT60] > kMaxT60) {
    v[layout::kT60] = kMaxT60;
    ++counts.clamped_scalars;
  }

  // Reflections: every TOA slot at or above the threshold is a reflection.
  const double max_toa = kEarlyWindowSeconds * sample_rate;
  std::vector<std::pair<double, double>> found;
  bool moved = false;
  for (std::size_t j = 0; j < kMaxReflections; ++j) {
    double k = v[layout::kToas + j];
    const double b = v[layout::kScales + j];
    if (k < kMinGeneratedToa) continue;
    if (k > max_toa) {
      k = max_toa;
      moved = true;
    }
    found.emplace_back(k, b);
  }
  if (!std::is_sorted(found.begin(), found.end())) moved = true;
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<double, double>> kept;
  for (const auto& f : found) {
    if (!kept.empty() && !(f.first > kept.back().first)) {
      ++counts.dropped_reflections;
      continue;
    }
    kept.push_back(f);
  }
  const std::size_t pad = kMaxReflections - kept.size();
  std::vector<double> toa_block(kMaxReflections, 0.0), scale_block(kMaxReflections, 0.0);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    toa_block[pad + j] = kept[j].first;
    scale_block[pad + j] = kept[j].second;
  }
  for (std::size_t j = 0; j < kMaxReflections; ++j) {
    if (v[layout::kToas + j] >= kMinGeneratedToa && v[layout::kToas + j] != toa_block[j]) moved = true;
    v[layout::kToas + j] = toa_block[j];
    v[layout::kScales + j] = scale_block[j];
  }
  if (moved) ++counts.reordered_toas;

  bool changed = false;
  rep = stabilize_poles(rep, &changed);
  if (changed) ++counts.stabilized_filters;
  if (!rep.valid(sample_rate)) ++counts.invalid;
  return rep;
}

Generated generate(GanModel& model, std::size_t n, std::uint64_t seed, int sample_rate) {
  if (model.generator.output_width() != static_cast<Eigen::Index>(kRepLength)) {
    throw PreconditionError("generate: model does not produce 170-value reps");
  }
  Generated out;
  const Eigen::MatrixXd raw = sample(model, static_cast<Eigen::Index>(n), seed);
  std::vector<double> row(kRepLength);
  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    for (std::size_t j = 0; j < kRepLength; ++j) row[j] = raw(r, static_cast<Eigen::Index>(j));
    out.reps.push_back(repair_rep(row, model.normalizer, sample_rate, out.repairs));
  }
  return out;
}

LowDimRep stabilize_poles(const LowDimRep& rep, bool* changed) {
  const auto a = rep.a();
  const auto st = stabilize_denominator(a);
  if (changed) *changed = st.failed || st.removed > 0;
  return rep.with_denominator(st.a);
}

}  // namespace airgan::gan
