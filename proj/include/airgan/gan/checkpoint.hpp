#pragma once

#include <filesystem>

#include "airgan/gan/gan.hpp"

namespace airgan::gan {

/// Writes `<stem>.gen.nn`, `<stem>.disc.nn` and a JSON sidecar
/// `<stem>.json` (normaliser, config, room label, final history entry).
void save_gan(const std::filesystem::path& stem, const GanModel& model);
GanModel load_gan(const std::filesystem::path& stem);

/// One line per epoch: epoch,d_loss,g_loss,d_accuracy.
void write_history_csv(const std::filesystem::path& path, const GanModel& model);

}  // namespace airgan::gan
