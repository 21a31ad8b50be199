#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "airgan/core/air_signal.hpp"

namespace airgan {

struct ManifestEntry {
  std::filesystem::path path;
  std::string room;
  std::string meta;
};

/// Parsed `manifest.csv` (header `path,room,meta`). Relative paths are
/// resolved against the manifest's directory.
class DatasetManifest {
 public:
  DatasetManifest() = default;
  /// Throws PreconditionError on duplicate paths.
  explicit DatasetManifest(std::vector<ManifestEntry> entries);

  static DatasetManifest read(const std::filesystem::path& csv_path);
  void write(const std::filesystem::path& csv_path) const;

  const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }
  /// Distinct room labels in first-appearance order.
  const std::vector<std::string>& rooms() const noexcept { return rooms_; }
  std::vector<ManifestEntry> entries_for(const std::string& room) const;
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::vector<ManifestEntry> entries_;
  std::vector<std::string> rooms_;
};

/// load_air + resample to 16 kHz + pad to 2.1 s, labelled with the entry's room.
AirSignal load_dataset_air(const ManifestEntry& entry);

/// Splits one CSV line honouring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace airgan
