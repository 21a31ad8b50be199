#include "airgan/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "airgan/core/error.hpp"

namespace airgan::nn {

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

constexpr std::array<char, 4> kMagic{'A', 'G', 'N', 'N'};

enum class Kind : std::uint32_t { kDense = 1, kBatchNorm = 2, kLeakyReLU = 3, kSigmoid = 4 };

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw PreconditionError("checkpoint: truncated file");
  }
  return v;
}

// Eigen storage is column-major; blocks are written row-major.
void put_block(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put(out, static_cast<float>(m(r, c)));
  }
}

void put_block(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) put(out, static_cast<float>(v(i)));
}

void get_block(std::istream& in, Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = get<float>(in);
  }
}

void get_block(std::istream& in, Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = get<float>(in);
}

}  // namespace

void write_network(std::ostream& out, const Network& network) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(network.input_width()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(network.layers().size()));
  const auto rows = network.summary();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& layer = network.layers()[i];
    Kind kind = Kind::kSigmoid;
    double h0 = 0.0, h1 = 0.0;
    if (std::holds_alternative<Dense>(layer)) {
      kind = Kind::kDense;
    } else if (const auto* bn = std::get_if<BatchNorm>(&layer)) {
      kind = Kind::kBatchNorm;
      h0 = bn->epsilon;
      h1 = bn->momentum;
    } else if (const auto* a = std::get_if<LeakyReLU>(&layer)) {
      kind = Kind::kLeakyReLU;
      h0 = a->slope;
    }
    put<std::uint32_t>(out, static_cast<std::uint32_t>(kind));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(rows[i].input_dim));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(rows[i].output_dim));
    put<double>(out, h0);
    put<double>(out, h1);
  }
  for (const auto& layer : network.layers()) {
    if (const auto* d = std::get_if<Dense>(&layer)) {
      put_block(out, d->weights);
      put_block(out, d->bias);
    } else if (const auto* bn = std::get_if<BatchNorm>(&layer)) {
      put_block(out, bn->gamma);
      put_block(out, bn->beta);
      put_block(out, bn->running_mean);
      put_block(out, bn->running_var);
    }
  }
  if (!out) throw PreconditionError("checkpoint: write failed");
}

Network read_network(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw PreconditionError("checkpoint: bad magic");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw PreconditionError("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto input = get<std::uint32_t>(in);
  const auto count = get<std::uint32_t>(in);
  if (input == 0 || count > 4096) throw PreconditionError("checkpoint: implausible header");
  Network net(static_cast<Eigen::Index>(input));
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto kind = static_cast<Kind>(get<std::uint32_t>(in));
    const auto w_in = static_cast<Eigen::Index>(get<std::uint32_t>(in));
    const auto w_out = static_cast<Eigen::Index>(get<std::uint32_t>(in));
    const double h0 = get<double>(in);
    const double h1 = get<double>(in);
    switch (kind) {
      case Kind::kDense:
        net.add(Dense(w_in, w_out));
        break;
      case Kind::kBatchNorm: {
        BatchNorm bn(w_in);
        bn.epsilon = h0;
        bn.momentum = h1;
        net.add(std::move(bn));
        break;
      }
      case Kind::kLeakyReLU:
        net.add(LeakyReLU{h0, {}});
        break;
      case Kind::kSigmoid:
        net.add(Sigmoid{});
        break;
      default:
        throw PreconditionError("checkpoint: unknown layer kind");
    }
  }
  for (auto& layer : net.layers()) {
    if (auto* d = std::get_if<Dense>(&layer)) {
      get_block(in, d->weights);
      get_block(in, d->bias);
    } else if (auto* bn = std::get_if<BatchNorm>(&layer)) {
      get_block(in, bn->gamma);
      get_block(in, bn->beta);
      get_block(in, bn->running_mean);
      get_block(in, bn->running_var);
    }
  }
  return net;
}

void save_network(const std::filesystem::path& path, const Network& network) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("checkpoint: cannot open " + path.string() + " for writing");
  write_network(out, network);
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("checkpoint: cannot open " + path.string());
  return read_network(in);
}

}  // namespace airgan::nn
