#include "airgan/core/wav.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <vector>

namespace airgan {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

void write_bytes(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw WavError(WavErrorKind::kUnwritable, "cannot open for writing: " + path.string());
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw WavError(WavErrorKind::kUnwritable, "write failed: " + path.string());
}

std::vector<unsigned char> header(std::uint16_t format_tag, std::uint16_t bits, int sample_rate,
                                  std::uint32_t n_samples) {
  const std::uint32_t block_align = bits / 8;
  const std::uint32_t data_bytes = n_samples * block_align;
  const bool is_float = format_tag == kFormatFloat;
  const std::uint32_t fmt_size = is_float ? 18 : 16;
  const std::uint32_t fact_size = is_float ? 12 : 0;
  std::vector<unsigned char> out;
  out.reserve(64 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 4 + (8 + fmt_size) + fact_size + (8 + data_bytes));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, fmt_size);
  put_u16(out, format_tag);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate) * block_align);
  put_u16(out, static_cast<std::uint16_t>(block_align));
  put_u16(out, bits);
  if (is_float) {
    put_u16(out, 0);  // cbSize
    put_tag(out, "fact");
    put_u32(out, 4);
    put_u32(out, n_samples);
  }
  put_tag(out, "data");
  put_u32(out, data_bytes);
  return out;
}

}  // namespace

AirSignal load_air(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw WavError(WavErrorKind::kUnreadable, "cannot open: " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                         std::istreambuf_iterator<char>());
  const auto malformed = [&](const std::string& why) {
    return WavError(WavErrorKind::kMalformed, path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw malformed("not a RIFF/WAVE file");
  }

  std::optional<Format> fmt;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || available < 16) throw malformed("short fmt chunk");
      const unsigned char* f = bytes.data() + body;
      Format parsed{read_u16(f), read_u16(f + 2), read_u32(f + 4), read_u16(f + 14)};
      if (parsed.tag == kFormatExtensible) {
        if (size < 40 || available < 40) throw malformed("short WAVE_FORMAT_EXTENSIBLE chunk");
        parsed.tag = read_u16(f + 24);  // first two bytes of the sub-format GUID
      }
      fmt = parsed;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min<std::size_t>(size, available);
      break;
    }
    pos = body + size + (size & 1U);
  }
  if (!fmt) throw malformed("missing fmt chunk");
  if (data == nullptr) throw malformed("missing data chunk");
  if (fmt->channels != 1) {
    throw WavError(WavErrorKind::kMultiChannel,
                   path.string() + ": multi-channel unsupported (" +
                       std::to_string(fmt->channels) + " channels)");
  }
  if (fmt->sample_rate == 0) throw malformed("zero sample rate");

  std::vector<double> taps;
  if (fmt->tag == kFormatPcm && fmt->bits == 16) {
    taps.resize(data_size / 2);
    for (std::size_t i = 0; i < taps.size(); ++i) {
      const auto raw = static_cast<std::int16_t>(read_u16(data + 2 * i));
      taps[i] = static_cast<double>(raw) / 32768.0;
    }
  } else if (fmt->tag == kFormatFloat && fmt->bits == 32) {
    taps.resize(data_size / 4);
    for (std::size_t i = 0; i < taps.size(); ++i) {
      taps[i] = static_cast<double>(std::bit_cast<float>(read_u32(data + 4 * i)));
    }
  } else {
    throw WavError(WavErrorKind::kUnsupportedEncoding,
                   path.string() + ": unsupported encoding (format " + std::to_string(fmt->tag) +
                       ", " + std::to_string(fmt->bits) + " bits)");
  }
  if (taps.empty()) throw malformed("no samples");
  for (double v : taps) {
    if (!std::isfinite(v)) throw malformed("non-finite sample");
  }
  return AirSignal(std::move(taps), static_cast<int>(fmt->sample_rate), std::nullopt,
                   path.stem().string());
}

void save_air(const AirSignal& air, const std::filesystem::path& path) {
  const auto n = static_cast<std::uint32_t>(air.size());
  auto out = header(kFormatFloat, 32, air.sample_rate(), n);
  for (double v : air.taps()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  write_bytes(out, path);
}

void save_air_pcm16(const AirSignal& air, const std::filesystem::path& path) {
  const auto n = static_cast<std::uint32_t>(air.size());
  auto out = header(kFormatPcm, 16, air.sample_rate(), n);
  for (double v : air.taps()) {
    const double scaled = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  write_bytes(out, path);
}

}  // namespace airgan
