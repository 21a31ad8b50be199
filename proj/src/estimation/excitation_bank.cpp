#include "airgan/estimation/excitation_bank.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "airgan/core/error.hpp"
#include "airgan/core/fractional_delay.hpp"
#include "airgan/estimation/direct_path.hpp"
#include "airgan/estimation/pca.hpp"

namespace airgan {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                              static_cast<unsigned char>((v >> 8) & 0xFF),
                              static_cast<unsigned char>((v >> 16) & 0xFF),
                              static_cast<unsigned char>((v >> 24) & 0xFF)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw PreconditionError("excitation bank: truncated file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void ExcitationBank::write(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw PreconditionError("excitation bank: cannot write " + path.string());
  put_u32(os, static_cast<std::uint32_t>(excitations.size()));
  put_u32(os, static_cast<std::uint32_t>(window_len));
  put_u32(os, static_cast<std::uint32_t>(n_components));
  for (const auto& e : excitations) {
    for (double v : e) put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  if (!os) throw PreconditionError("excitation bank: write failed for " + path.string());
}

ExcitationBank ExcitationBank::read(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw PreconditionError("excitation bank: cannot open " + path.string());
  ExcitationBank bank;
  const std::uint32_t count = get_u32(is);
  bank.window_len = get_u32(is);
  bank.n_components = get_u32(is);
  if (bank.window_len == 0 || count > (1U << 24) || bank.window_len > (1U << 20)) {
    throw PreconditionError("excitation bank: implausible header in " + path.string());
  }
  bank.excitations.assign(count, std::vector<double>(bank.window_len));
  for (auto& e : bank.excitations) {
    for (double& v : e) v = static_cast<double>(std::bit_cast<float>(get_u32(is)));
  }
  return bank;
}

std::size_t direct_window_length(int sample_rate) {
  return 2 * direct_half_width(sample_rate) + 1;
}

std::vector<double> extract_window(const AirSignal& air, double center, std::size_t len) {
  const double first = center - static_cast<double>((len - 1) / 2);
  std::vector<double> w(len);
  for (std::size_t i = 0; i < len; ++i) {
    w[i] = sinc_interpolate(air.taps(), first + static_cast<double>(i));
  }
  return w;
}

ExcitationBank build_excitation_bank(std::span<const AirSignal> airs) {
  if (airs.empty()) throw PreconditionError("build_excitation_bank: no AIRs");
  return build_excitation_bank(airs, direct_window_length(airs.front().sample_rate()));
}

ExcitationBank build_excitation_bank(std::span<const AirSignal> airs, std::size_t window_len) {
  if (airs.size() < 2) throw PreconditionError("build_excitation_bank: need at least 2 AIRs");
  if (window_len == 0) throw PreconditionError("build_excitation_bank: empty window");

  Eigen::MatrixXd windows(static_cast<long>(airs.size()), static_cast<long>(window_len));
  for (std::size_t r = 0; r < airs.size(); ++r) {
    const auto direct = detect_direct_path(airs[r]);
    const auto w = extract_window(airs[r], direct.toa, window_len);
    for (std::size_t c = 0; c < window_len; ++c) windows(static_cast<long>(r), static_cast<long>(c)) = w[c];
  }
  const auto pca = fit_pca(windows, kBankVarianceFraction);

  ExcitationBank bank;
  bank.window_len = window_len;
  bank.n_components = pca.n_components;
  const auto center = static_cast<long>((window_len - 1) / 2);
  for (long r = 0; r < pca.reconstructions.rows(); ++r) {
    const Eigen::VectorXd rec = pca.reconstructions.row(r).transpose();
    const double peak = rec.cwiseAbs().maxCoeff();
    if (!(peak > 0.0)) throw DegenerateInputError("build_excitation_bank: zero reconstruction");
    const double sign = rec(center) < 0.0 ? -1.0 : 1.0;
    std::vector<double> e(window_len);
    // Rounded to float so the in-memory bank equals its on-disk form.
    for (std::size_t c = 0; c < window_len; ++c) {
      e[c] = static_cast<double>(static_cast<float>(sign * rec(static_cast<long>(c)) / peak));
    }
    bank.excitations.push_back(std::move(e));
  }
  return bank;
}

}  // namespace airgan
