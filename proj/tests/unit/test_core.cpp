#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "airgan/core/air_signal.hpp"
#include "airgan/core/error.hpp"
#include "airgan/core/fractional_delay.hpp"
#include "airgan/core/manifest.hpp"
#include "airgan/core/wav.hpp"
#include "doctest.h"
#include "temp_dir.hpp"

using namespace airgan;
using airgan::testing::TempDir;

namespace {

void write_raw_wav(const std::filesystem::path& path, std::uint16_t format, std::uint16_t channels,
                   std::uint16_t bits, std::uint32_t rate, const std::vector<unsigned char>& data) {
  std::vector<unsigned char> b;
  auto u16 = [&](std::uint16_t v) { b.push_back(v & 0xFF); b.push_back(v >> 8); };
  auto u32 = [&](std::uint32_t v) { for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xFF); };
  auto tag = [&](const char* t) { b.insert(b.end(), t, t + 4); };
  tag("RIFF");
  u32(36 + static_cast<std::uint32_t>(data.size()));
  tag("WAVE");
  tag("fmt ");
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  tag("data");
  u32(static_cast<std::uint32_t>(data.size()));
  b.insert(b.end(), data.begin(), data.end());
  std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(b.data()),
                                              static_cast<std::streamsize>(b.size()));
}

WavErrorKind load_error_kind(const std::filesystem::path& path) {
  try {
    load_air(path);
  } catch (const WavError& e) {
    return e.kind();
  }
  FAIL("load_air did not throw");
  return WavErrorKind::kMalformed;
}

}  // namespace

TEST_CASE("AirSignal rejects empty, non-finite and rate-less input") {
  CHECK_THROWS_AS(AirSignal({}, 16000), PreconditionError);
  CHECK_THROWS_AS(AirSignal({1.0, std::nan("")}, 16000), PreconditionError);
  CHECK_THROWS_AS(AirSignal({1.0, INFINITY}, 16000), PreconditionError);
  CHECK_THROWS_AS(AirSignal({1.0}, 0), PreconditionError);
}

TEST_CASE("load_air scales PCM16 by 1/32768") {
  TempDir dir;
  save_air_pcm16(AirSignal({0.5, -0.5}, 16000), dir / "pcm.wav");
  const auto air = load_air(dir / "pcm.wav");
  REQUIRE(air.size() == 2);
  CHECK(air[0] == 0.5);
  CHECK(air[1] == -0.5);
  CHECK(air.sample_rate() == 16000);
}

TEST_CASE("float WAV loads identically with its sample rate") {
  TempDir dir;
  save_air(AirSignal({1.0, 0.0, 0.25}, 48000), dir / "f.wav");
  const auto air = load_air(dir / "f.wav");
  CHECK(std::vector<double>(air.taps().begin(), air.taps().end()) == std::vector<double>{1.0, 0.0, 0.25});
  CHECK(air.sample_rate() == 48000);
}

TEST_CASE("load_air reports each failure distinctly") {
  TempDir dir;
  write_raw_wav(dir / "stereo.wav", 1, 2, 16, 16000, {0, 0, 0, 0});
  write_raw_wav(dir / "pcm24.wav", 1, 1, 24, 16000, {0, 0, 0});
  write_raw_wav(dir / "f64.wav", 3, 1, 64, 16000, std::vector<unsigned char>(8, 0));
  std::ofstream(dir / "junk.wav") << "definitely not audio";

  CHECK(load_error_kind(dir / "missing.wav") == WavErrorKind::kUnreadable);
  CHECK(load_error_kind(dir / "stereo.wav") == WavErrorKind::kMultiChannel);
  CHECK(load_error_kind(dir / "pcm24.wav") == WavErrorKind::kUnsupportedEncoding);
  CHECK(load_error_kind(dir / "f64.wav") == WavErrorKind::kUnsupportedEncoding);
  CHECK(load_error_kind(dir / "junk.wav") == WavErrorKind::kMalformed);

  try {
    load_air(dir / "stereo.wav");
  } catch (const WavError& e) {
    CHECK(std::string(e.what()).find("multi-channel unsupported") != std::string::npos);
  }
}

TEST_CASE("save_air to an unwritable path fails") {
  CHECK_THROWS_AS(save_air(AirSignal({1.0}, 16000), "/nonexistent-dir/x/y.wav"), WavError);
}

TEST_CASE("float WAV round-trip is exact for float-representable taps") {
  TempDir dir;
  std::mt19937 rng(7);
  std::uniform_real_distribution<float> value(-2.0f, 2.0f);
  std::uniform_int_distribution<int> length(1, 5000);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> taps(static_cast<std::size_t>(length(rng)));
    for (double& t : taps) t = value(rng);
    const AirSignal air(taps, 8000 + 1000 * trial);
    save_air(air, dir / "rt.wav");
    const auto back = load_air(dir / "rt.wav");
    REQUIRE(back.size() == taps.size());
    CHECK(back.sample_rate() == air.sample_rate());
    CHECK(std::equal(taps.begin(), taps.end(), back.taps().begin()));
  }
}

TEST_CASE("pad_to appends zeros and rejects shrinking") {
  const AirSignal air({1.0, 2.0}, 16000);
  const auto padded = pad_to(air, 4);
  CHECK(std::vector<double>(padded.taps().begin(), padded.taps().end()) == std::vector<double>{1, 2, 0, 0});
  CHECK(pad_to(air, 2).size() == 2);
  CHECK_THROWS_AS(pad_to(air, 1), PreconditionError);
}

TEST_CASE("resample is the identity at equal rates and refuses to upsample") {
  const AirSignal air({0.1, -0.2, 0.3}, 16000);
  const auto same = resample(air, 16000);
  CHECK(std::equal(air.taps().begin(), air.taps().end(), same.taps().begin()));
  CHECK_THROWS_AS(resample(air, 96000), PreconditionError);
}

TEST_CASE("resampling a 1 kHz sine from 48 kHz to 16 kHz") {
  constexpr double f = 1000.0;
  std::vector<double> x(48000);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::sin(2.0 * std::numbers::pi * f * n / 48000.0);
  const auto y = resample(AirSignal(x, 48000), 16000);
  REQUIRE(y.size() == 16000);
  CHECK(y.sample_rate() == 16000);

  // Compare with the analytic 16 kHz sine away from the edges.
  double max_err = 0.0, power_in = 0.0, power_out = 0.0;
  for (std::size_t n = 200; n < 15800; ++n) {
    const double ref = std::sin(2.0 * std::numbers::pi * f * n / 16000.0);
    max_err = std::max(max_err, std::abs(y[n] - ref));
    power_out += y[n] * y[n];
    power_in += ref * ref;
  }
  CHECK(max_err < 1e-2);
  CHECK(std::abs(power_out / power_in - 1.0) < 0.01);

  // Frequency from interpolated upward zero crossings.
  std::vector<double> crossings;
  for (std::size_t n = 200; n + 1 < 15800; ++n) {
    if (y[n] < 0.0 && y[n + 1] >= 0.0) crossings.push_back(n + y[n] / (y[n] - y[n + 1]));
  }
  REQUIRE(crossings.size() > 10);
  const double period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  const double measured = 16000.0 / period;
  CHECK(std::abs(measured - f) / f < 1e-3);
}

TEST_CASE("resample output length is round(len * target / source)") {
  for (std::size_t len : {1u, 2u, 10u, 4801u, 10000u}) {
    const auto y = resample(AirSignal(std::vector<double>(len, 0.5), 44100), 16000);
    CHECK(y.size() == std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(len * 16000.0 / 44100.0))));
  }
}

TEST_CASE("fractional delay: integer shifts are exact, kernel has unit DC gain") {
  std::vector<double> out(16, 0.0);
  const std::vector<double> e{1.0, -0.5};
  add_delayed(out, e, 5.0, 2.0);
  CHECK(out[5] == 2.0);
  CHECK(out[6] == -1.0);
  double rest = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) if (i != 5 && i != 6) rest += std::abs(out[i]);
  CHECK(rest == 0.0);

  std::vector<double> wide(200, 0.0);
  const std::vector<double> one{1.0};
  add_delayed(wide, one, 100.3, 1.0);
  double sum = 0.0;
  for (double v : wide) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> sine(400);
  for (std::size_t n = 0; n < sine.size(); ++n) sine[n] = std::sin(0.2 * static_cast<double>(n));
  for (double pos : {150.25, 200.5, 233.8}) {
    CHECK(sinc_interpolate(sine, pos) == doctest::Approx(std::sin(0.2 * pos)).epsilon(1e-3));
  }
}

TEST_CASE("manifest parsing") {
  TempDir dir;
  {
    std::ofstream os(dir / "manifest.csv");
    os << "path,room,meta\n"
       << "a.wav,office,\"array=chromebook, pos=1\"\n"
       << "sub/b.wav,lab,\n"
       << "c.wav,office,x\n";
  }
  const auto m = DatasetManifest::read(dir / "manifest.csv");
  REQUIRE(m.entries().size() == 3);
  CHECK(m.entries()[0].meta == "array=chromebook, pos=1");
  CHECK(m.entries()[1].path == (dir.path() / "sub/b.wav").lexically_normal());
  CHECK(m.rooms() == std::vector<std::string>{"office", "lab"});
  CHECK(m.entries_for("office").size() == 2);

  m.write(dir / "copy.csv");
  const auto again = DatasetManifest::read(dir / "copy.csv");
  CHECK(again.entries()[0].path == m.entries()[0].path);
  CHECK(again.entries()[0].meta == m.entries()[0].meta);

  {
    std::ofstream os(dir / "dup.csv");
    os << "path,room,meta\na.wav,r1,\n./a.wav,r2,\n";
  }
  CHECK_THROWS_AS(DatasetManifest::read(dir / "dup.csv"), PreconditionError);
  {
    std::ofstream os(dir / "bad.csv");
    os << "file,label\n";
  }
  CHECK_THROWS_AS(DatasetManifest::read(dir / "bad.csv"), PreconditionError);
}

TEST_CASE("dataset loading normalises to 16 kHz and 2.1 s") {
  TempDir dir;
  std::vector<double> taps(20000, 0.0);
  taps[100] = 0.9;
  save_air(AirSignal(taps, 48000), dir / "a.wav");
  save_air_pcm16(AirSignal(std::vector<double>(1000, 0.01), 16000), dir / "b.wav");
  const DatasetManifest m({{dir / "a.wav", "r", ""}, {dir / "b.wav", "r", ""}});
  for (const auto& e : m.entries()) {
    const auto air = load_dataset_air(e);
    CHECK(air.sample_rate() == kDatasetSampleRate);
    CHECK(air.size() == kDatasetLength);
    CHECK(air.room_label() == std::optional<std::string>("r"));
  }
}
