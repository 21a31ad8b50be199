#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "airgan/estimation/poles.hpp"
#include "airgan/gan/checkpoint.hpp"
#include "airgan/gan/distribution.hpp"
#include "airgan/gan/gan.hpp"
#include "doctest.h"
#include "json.hpp"
#include "temp_dir.hpp"

using namespace airgan;
using namespace airgan::gan;
using airgan::testing::TempDir;

namespace {

Eigen::MatrixXd toy_data(Eigen::Index rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> a(0.3, 0.05), b(0.7, 0.08);
  Eigen::MatrixXd x(rows, 2);
  for (Eigen::Index r = 0; r < rows; ++r) {
    x(r, 0) = a(rng);
    x(r, 1) = b(rng);
  }
  return x;
}

LowDimRep simple_rep(double t60, double eta1, double eta2, std::vector<double> toas,
                     std::vector<double> scales, Numerator b = {1, 0, 0, 0, 0, 0}) {
  return LowDimRep::compose(t60, eta1, eta2, Denominator{}, b, toas, scales);
}

}  // namespace

TEST_CASE("low-dimensional GAN per-layer parameter counts") {
  const auto m = build_lowdim_gan(GanConfig{});
  const auto g = m.generator.summary();
  const auto d = m.discriminator.summary();
  std::vector<std::size_t> g_counts, d_counts;
  for (const auto& row : g) {
    if (row.kind == "Dense" || row.kind == "BatchNorm") g_counts.push_back(row.parameters);
  }
  for (const auto& row : d) {
    if (row.kind == "Dense") d_counts.push_back(row.parameters);
  }
  CHECK(g_counts == std::vector<std::size_t>{5376, 1024, 65792, 1024, 65792, 1024, 43690});
  CHECK(d_counts == std::vector<std::size_t>{43776, 65792, 257});
  CHECK(m.generator.parameter_count().total == 183722);
  CHECK(m.discriminator.parameter_count().total == 109825);
  CHECK(m.generator.parameter_count().total + m.discriminator.parameter_count().total == 293547);
  CHECK(m.generator.output_width() == 170);
  CHECK(m.discriminator.input_width() == 170);
}

TEST_CASE("FIR GAN parameter counts") {
  const auto m = build_fir_gan(GanConfig{});
  CHECK(m.generator.parameter_count().total + m.discriminator.parameter_count().total == 17262561);
  CHECK(m.generator.summary()[9].parameters == 8544736);
  CHECK(m.discriminator.summary()[0].parameters == 8511744);
}

TEST_CASE("discriminator output is a probability") {
  auto m = build_lowdim_gan(GanConfig{});
  m.discriminator.set_mode(nn::Mode::kInference);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 50.0);
  nn::Matrix x(16, 170);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  const nn::Matrix p = m.discriminator.forward(x);
  CHECK(p.minCoeff() >= 0.0);
  CHECK(p.maxCoeff() <= 1.0);
}

TEST_CASE("normaliser round trip and constant dimensions") {
  Eigen::MatrixXd x(3, 3);
  x << 1.0, 5.0, -2.0, 3.0, 5.0, 4.0, 2.0, 5.0, 1.0;
  const auto n = MinMaxNormalizer::fit(x);
  CHECK(n.constant(1));
  CHECK_FALSE(n.constant(0));
  const Eigen::MatrixXd z = n.normalize(x);
  CHECK(z.minCoeff() >= 0.0);
  CHECK(z.maxCoeff() <= 1.0);
  const Eigen::MatrixXd back = n.denormalize(z);
  CHECK((back - x).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(n.denormalize(Eigen::MatrixXd::Constant(1, 3, 0.37))(0, 1) == 5.0);
}

TEST_CASE("training is deterministic in the seed") {
  GanConfig cfg;
  cfg.hidden = 16;
  cfg.epochs = 5;
  cfg.batch_size = 8;
  cfg.seed = 3;
  const auto data = toy_data(40, 1);
  auto a = build_gan(cfg, 2);
  auto b = build_gan(cfg, 2);
  train(a, data, cfg);
  train(b, data, cfg);
  REQUIRE(a.history.size() == 5);
  for (std::size_t e = 0; e < 5; ++e) {
    CHECK(a.history[e].d_loss == b.history[e].d_loss);
    CHECK(a.history[e].g_loss == b.history[e].g_loss);
    CHECK(a.history[e].d_accuracy == b.history[e].d_accuracy);
  }
  CHECK(sample(a, 7, 11) == sample(b, 7, 11));

  auto short_data = build_gan(cfg, 2);
  CHECK_THROWS_AS(train(short_data, toy_data(5, 1), cfg), PreconditionError);
  CHECK_THROWS_AS(train(short_data, Eigen::MatrixXd::Zero(40, 3), cfg), PreconditionError);
}

TEST_CASE("a frozen generator is easily told apart") {
  GanConfig cfg;
  cfg.hidden = 64;
  cfg.epochs = 200;
  cfg.instance_noise_sigma = 0.0;
  cfg.train_generator = false;
  cfg.seed = 5;
  // Two tight clusters in opposite corners of the normalised square; the
  // untrained generator's outputs spread around the centre.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> jitter(0.0, 0.01);
  Eigen::MatrixXd data(94, 2);
  for (Eigen::Index r = 0; r < 94; ++r) {
    const double side = r % 2 == 0 ? 0.0 : 1.0;
    data(r, 0) = side + jitter(rng);
    data(r, 1) = 1.0 - side + jitter(rng);
  }
  auto m = build_gan(cfg, 2);
  train(m, data, cfg);
  CHECK(m.history.back().d_accuracy > 0.9);
}

TEST_CASE("toy GAN reproduces a 2-D Gaussian") {
  GanConfig cfg;
  cfg.epochs = 2000;
  cfg.hidden = 64;
  cfg.seed = 8;
  const auto data = toy_data(94, 3);
  auto m = build_gan(cfg, 2);
  train(m, data, cfg);
  const Eigen::MatrixXd s = sample(m, 1000, 4);
  for (Eigen::Index c = 0; c < 2; ++c) {
    const double dm = data.col(c).mean(), sm = s.col(c).mean();
    const double ds = std::sqrt((data.col(c).array() - dm).square().mean());
    const double ss = std::sqrt((s.col(c).array() - sm).square().mean());
    CHECK(std::abs(sm - dm) < 0.05);
    CHECK(std::abs(ss - ds) < 0.5 * ds);
  }
  std::vector<double> real(data.col(0).data(), data.col(0).data() + data.rows());
  std::vector<double> gen(s.col(0).data(), s.col(0).data() + s.rows());
  CHECK(ks_statistic(real, gen) < 0.25);
}

TEST_CASE("stabilize_poles") {
  const auto stable = LowDimRep::compose(0.5, 1, 1, Denominator{-0.5, 0.06, 0, 0, 0},
                                         Numerator{1, 0.2, 0, 0, 0, 0}, {}, {});
  bool changed = true;
  CHECK(stabilize_poles(stable, &changed) == stable);
  CHECK_FALSE(changed);

  const auto unstable = LowDimRep::compose(0.5, 1, 1, Denominator{-1.7, 0.6, 0, 0, 0},
                                           Numerator{1, 0.2, 0, 0, 0, 0}, {}, {});
  const auto fixed = stabilize_poles(unstable, &changed);
  CHECK(changed);
  CHECK(fixed.a()[0] == doctest::Approx(-0.5));
  CHECK(fixed.b() == unstable.b());

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    Denominator a;
    for (double& v : a) v = u(rng);
    const auto r = stabilize_poles(stable.with_denominator(a));
    CHECK(max_pole_radius(r.a()) <= kStablePoleRadius);
  }
}

TEST_CASE("repair packs reflections and clamps scalars") {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(170), hi = Eigen::VectorXd::Ones(170);
  lo(0) = 0.2;
  lo(1) = 0.5;
  lo(2) = 3.0;
  const MinMaxNormalizer norm(lo, hi * 400.0);
  std::vector<double> raw(170, 0.0);
  raw[layout::kT60] = -0.1;
  raw[layout::kEta1] = 2.0;
  raw[layout::kEta2] = 0.0;
  raw[layout::kToas + 3] = 40.0;   // out of place and out of order
  raw[layout::kToas + 10] = 0.2;   // below the threshold: padding
  raw[layout::kToas + 76] = 12.0;
  raw[layout::kToas + 77] = 500.0;  // beyond the early window
  raw[layout::kScales + 3] = 0.4;
  raw[layout::kScales + 10] = 0.9;
  raw[layout::kScales + 76] = -0.2;
  raw[layout::kScales + 77] = 0.1;
  raw[layout::kDenominator] = -1.7;
  raw[layout::kDenominator + 1] = 0.6;
  RepairCounts counts;
  const auto rep = repair_rep(raw, norm, 16000, counts);
  CHECK(rep.valid());
  CHECK(rep.t60() == 0.2);
  CHECK(rep.eta2() == 3.0);
  CHECK(rep.toas() == std::vector<double>{12.0, 40.0, 384.0});
  CHECK(rep.scales() == std::vector<double>{-0.2, 0.4, 0.1});
  CHECK(counts.clamped_scalars == 2);
  CHECK(counts.reordered_toas == 1);
  CHECK(counts.stabilized_filters == 1);
  CHECK(counts.invalid == 0);
}

TEST_CASE("generate yields valid reps deterministically") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LowDimRep> reps;
  for (int i = 0; i < 40; ++i) {
    std::vector<double> toas, scales;
    double t = 3.0 + 5.0 * u(rng);
    for (int k = 0; k < 4; ++k, t += 10.0 + 60.0 * u(rng)) {
      toas.push_back(t);
      scales.push_back(u(rng) - 0.5);
    }
    reps.push_back(LowDimRep::compose(0.3 + 0.4 * u(rng), 1.0 + u(rng), 5.0 + 10.0 * u(rng),
                                      Denominator{-0.5 * u(rng), 0, 0, 0, 0},
                                      Numerator{1, 0.3 * u(rng), 0, 0, 0, 0}, toas, scales));
  }
  GanConfig cfg;
  cfg.hidden = 32;
  cfg.epochs = 20;
  cfg.batch_size = 16;
  auto m = build_lowdim_gan(cfg);
  train(m, reps, cfg);
  const auto a = generate(m, 100, 9);
  const auto b = generate(m, 100, 9);
  REQUIRE(a.reps.size() == 100);
  CHECK(a.reps == b.reps);
  double lo = 1e9, hi = -1e9;
  for (const auto& r : reps) {
    lo = std::min(lo, r.t60());
    hi = std::max(hi, r.t60());
  }
  for (const auto& r : a.reps) {
    CHECK(r.valid());
    CHECK(r.t60() >= lo);
    CHECK(r.t60() <= hi);
  }
  CHECK(a.repairs.invalid == 0);
}

TEST_CASE("gan checkpoint round trip") {
  GanConfig cfg;
  cfg.hidden = 16;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  auto m = build_gan(cfg, 2);
  m.room_label = "office";
  train(m, toy_data(30, 6), cfg);
  TempDir dir;
  save_gan(dir / "office", m);
  write_history_csv(dir / "office.history.csv", m);
  auto back = load_gan(dir / "office");
  CHECK(back.room_label == "office");
  CHECK(back.config.epochs == 3);
  CHECK(back.normalizer.min() == m.normalizer.min());
  CHECK(back.normalizer.max() == m.normalizer.max());
  CHECK(sample(back, 5, 2) == sample(m, 5, 2));
  REQUIRE(back.history.size() == 1);
  CHECK(back.history[0].g_loss == m.history.back().g_loss);

  std::ifstream hist(dir / "office.history.csv");
  std::string line;
  int lines = 0;
  while (std::getline(hist, line)) ++lines;
  CHECK(lines == 4);
  CHECK_THROWS_AS(load_gan(dir / "missing"), PreconditionError);
}

TEST_CASE("ks statistic and histograms") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({1, 2, 3}, {4, 5, 6}) == 1.0);
  CHECK(ks_statistic({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));

  const std::vector<double> r{0.0, 0.1, 0.5, 1.0}, g{0.2, 2.0};
  const auto h = shared_histogram(r, g, 4);
  CHECK(h.edges.front() == 0.0);
  CHECK(h.edges.back() == 2.0);
  CHECK(h.real == std::vector<std::size_t>{2, 1, 1, 0});
  CHECK(h.generated == std::vector<std::size_t>{1, 0, 0, 1});
}

TEST_CASE("zero frequencies") {
  // Zeros at e^{+-j pi/4}: 1 - sqrt(2) z^-1 + z^-2.
  const auto rep = simple_rep(0.5, 1, 1, {}, {}, Numerator{1, -std::numbers::sqrt2, 1, 0, 0, 0});
  const auto hz = zero_frequencies(rep, 16000);
  int near_2k = 0;
  for (double f : hz) {
    if (std::abs(f - 2000.0) < 1e-6) ++near_2k;
  }
  CHECK(near_2k == 1);
  for (double f : hz) CHECK(f >= 0.0);
}

TEST_CASE("evaluate_distribution of identical sets") {
  std::vector<LowDimRep> reps;
  for (int i = 0; i < 10; ++i) {
    reps.push_back(simple_rep(0.2 + 0.05 * i, 1.0 + i, 2.0 + 0.5 * i, {5.0 + i}, {0.3},
                              Numerator{1, 0.1 * i, 0.2, 0, 0, 0}));
  }
  const auto report = evaluate_distribution(reps, reps);
  for (const auto& p : report.parameters) {
    CHECK(p.ks == 0.0);
    CHECK(p.histogram.real == p.histogram.generated);
  }
  CHECK(report.get("t60").real_mean == doctest::Approx(0.425));

  TempDir dir;
  report.write_csv(dir / "stats.csv");
  report.write_json(dir / "stats.json");
  std::ifstream js(dir / "stats.json");
  const auto j = nlohmann::json::parse(js);
  CHECK(j["parameters"]["t60"]["ks"].get<double>() == 0.0);
  CHECK(j["real_count"].get<int>() == 10);
  CHECK_THROWS_AS(evaluate_distribution(reps, std::vector<LowDimRep>{}), PreconditionError);
}
