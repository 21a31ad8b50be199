#include "airgan/augment/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "airgan/core/error.hpp"

namespace airgan::augment {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw PreconditionError("config key '" + std::string(key) + "': cannot parse '" +
                            std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw PreconditionError("config key '" + std::string(key) + "': expected true or false");
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

template <typename Range>
std::string join(const Range& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ',';
    out += item;
  }
  return out;
}

// Shortest text that reads back to the same double.
std::string exact(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

Stage parse_stage(std::string_view name) {
  if (name == "encode") return Stage::kEncode;
  if (name == "train") return Stage::kTrain;
  if (name == "generate") return Stage::kGenerate;
  if (name == "stats") return Stage::kStats;
  throw PreconditionError("unknown stage '" + std::string(name) + "'");
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kEncode: return "encode";
    case Stage::kTrain: return "train";
    case Stage::kGenerate: return "generate";
    case Stage::kStats: return "stats";
  }
  return "?";
}

void RunConfig::validate() const {
  if (out.empty()) throw PreconditionError("output directory is not set");
  if (count == 0) throw PreconditionError("count must be positive");
  if (max_retries < 0) throw PreconditionError("max_retries must be non-negative");
  if (synthesis.length == 0) throw PreconditionError("synthesis length must be positive");
  if (gan.epochs <= 0) throw PreconditionError("epochs must be positive");
  if (gan.hidden <= 0 || gan.latent_dim <= 0) throw PreconditionError("network widths must be positive");
  if (gan.batch_size < 2) throw PreconditionError("batch_size must be at least 2");
  if (!(gan.lr > 0.0)) throw PreconditionError("lr must be positive");
  if (!(gan.instance_noise_sigma >= 0.0)) throw PreconditionError("noise_sigma must be non-negative");
  if (stages.empty()) throw PreconditionError("no stages requested");
  for (Stage s : stages) {
    if (s == Stage::kEncode) {
      if (manifest.empty()) throw PreconditionError("manifest is not set");
      if (!std::filesystem::is_regular_file(manifest)) {
        throw PreconditionError("manifest not found: " + manifest.string());
      }
    }
  }
}

void RunConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "manifest") {
    manifest = std::string(value);
  } else if (key == "out") {
    out = std::string(value);
  } else if (key == "rooms") {
    rooms = split_list(value);
  } else if (key == "count") {
    count = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "jobs") {
    jobs = parse_number<std::size_t>(key, value);
  } else if (key == "max_retries") {
    max_retries = parse_number<int>(key, value);
  } else if (key == "force") {
    force = parse_bool(key, value);
  } else if (key == "mix_mode") {
    synthesis.mix_mode = parse_mix_mode(value);
  } else if (key == "length_s") {
    const double s = parse_number<double>(key, value);
    if (!(s > 0.0)) throw PreconditionError("length_s must be positive");
    synthesis.length = static_cast<std::size_t>(std::lround(s * synthesis.sample_rate));
  } else if (key == "epochs") {
    gan.epochs = parse_number<int>(key, value);
  } else if (key == "latent_dim") {
    gan.latent_dim = parse_number<Eigen::Index>(key, value);
  } else if (key == "hidden") {
    gan.hidden = parse_number<Eigen::Index>(key, value);
  } else if (key == "batch_size") {
    gan.batch_size = parse_number<Eigen::Index>(key, value);
  } else if (key == "lr") {
    gan.lr = parse_number<double>(key, value);
  } else if (key == "beta1") {
    gan.beta1 = parse_number<double>(key, value);
  } else if (key == "beta2") {
    gan.beta2 = parse_number<double>(key, value);
  } else if (key == "noise_sigma") {
    gan.instance_noise_sigma = parse_number<double>(key, value);
  } else if (key == "stages") {
    stages.clear();
    for (const auto& s : split_list(value)) stages.push_back(parse_stage(s));
  } else {
    throw PreconditionError("unknown config key '" + std::string(key) + "'");
  }
}

RunConfig RunConfig::read(const std::filesystem::path& path) {
  RunConfig cfg;
  cfg.read_into(path);
  return cfg;
}

void RunConfig::read_into(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config " + path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw PreconditionError(path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    set(trim(view.substr(0, eq)), view.substr(eq + 1));
  }
}

std::string RunConfig::to_text() const {
  std::vector<std::string> stage_names;
  for (Stage s : stages) stage_names.emplace_back(to_string(s));
  std::ostringstream s;
  s << "manifest = " << manifest.string() << '\n'
    << "out = " << out.string() << '\n'
    << "rooms = " << join(rooms) << '\n'
    << "stages = " << join(stage_names) << '\n'
    << "count = " << count << '\n'
    << "seed = " << seed << '\n'
    << "jobs = " << jobs << '\n'
    << "max_retries = " << max_retries << '\n'
    << "force = " << (force ? "true" : "false") << '\n'
    << "mix_mode = " << to_string(synthesis.mix_mode) << '\n'
    << "length_s = " << exact(static_cast<double>(synthesis.length) / synthesis.sample_rate) << '\n'
    << "epochs = " << gan.epochs << '\n'
    << "latent_dim = " << gan.latent_dim << '\n'
    << "hidden = " << gan.hidden << '\n'
    << "batch_size = " << gan.batch_size << '\n'
    << "lr = " << exact(gan.lr) << '\n'
    << "beta1 = " << exact(gan.beta1) << '\n'
    << "beta2 = " << exact(gan.beta2) << '\n'
    << "noise_sigma = " << exact(gan.instance_noise_sigma) << '\n';
  return s.str();
}

void RunConfig::write(const std::filesystem::path& path) const {
  std::ofstream out_file(path);
  if (!out_file) throw PreconditionError("cannot write " + path.string());
  out_file << to_text();
}

std::uint64_t room_seed(std::uint64_t run_seed, std::string_view room) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : room) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix_seed(run_seed, h);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace airgan::augment
