#include "airgan/core/manifest.hpp"

#include <fstream>
#include <set>

#include "airgan/core/error.hpp"
#include "airgan/core/wav.hpp"

namespace airgan {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

DatasetManifest::DatasetManifest(std::vector<ManifestEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen_paths;
  std::set<std::string> seen_rooms;
  for (const auto& e : entries_) {
    if (e.room.empty()) throw PreconditionError("manifest: empty room label for " + e.path.string());
    if (!seen_paths.insert(e.path.lexically_normal().string()).second) {
      throw PreconditionError("manifest: duplicate path " + e.path.string());
    }
    if (seen_rooms.insert(e.room).second) rooms_.push_back(e.room);
  }
}

DatasetManifest DatasetManifest::read(const std::filesystem::path& csv_path) {
  std::ifstream is(csv_path);
  if (!is) throw PreconditionError("manifest: cannot open " + csv_path.string());
  std::string line;
  if (!std::getline(is, line)) throw PreconditionError("manifest: empty file " + csv_path.string());
  const auto head = split_csv_line(line);
  if (head.size() < 2 || head[0] != "path" || head[1] != "room") {
    throw PreconditionError("manifest: expected header 'path,room,meta'");
  }
  const auto base = csv_path.parent_path();
  std::vector<ManifestEntry> entries;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() < 2) {
      throw PreconditionError("manifest: line " + std::to_string(line_no) + " has too few fields");
    }
    std::filesystem::path p = fields[0];
    if (p.is_relative()) p = base / p;
    entries.push_back({p.lexically_normal(), fields[1], fields.size() > 2 ? fields[2] : ""});
  }
  return DatasetManifest(std::move(entries));
}

void DatasetManifest::write(const std::filesystem::path& csv_path) const {
  std::ofstream os(csv_path);
  if (!os) throw PreconditionError("manifest: cannot write " + csv_path.string());
  os << "path,room,meta\n";
  const auto base = csv_path.parent_path();
  for (const auto& e : entries_) {
    auto rel = e.path.lexically_relative(base);
    if (rel.empty()) rel = e.path;
    os << quote_csv(rel.generic_string()) << ',' << quote_csv(e.room) << ',' << quote_csv(e.meta)
       << '\n';
  }
}

std::vector<ManifestEntry> DatasetManifest::entries_for(const std::string& room) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries_) {
    if (e.room == room) out.push_back(e);
  }
  return out;
}

AirSignal load_dataset_air(const ManifestEntry& entry) {
  auto air = resample(load_air(entry.path), kDatasetSampleRate);
  air = pad_to(air, kDatasetLength);
  return air.with_labels(entry.room, entry.path.stem().string());
}

}  // namespace airgan
