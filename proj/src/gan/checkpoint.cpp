#include "airgan/gan/checkpoint.hpp"

#include <fstream>

#include "airgan/core/error.hpp"
#include "airgan/nn/checkpoint.hpp"
#include "json.hpp"

namespace airgan::gan {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return stem.string() + suffix;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void save_gan(const std::filesystem::path& stem, const GanModel& model) {
  nn::save_network(with_suffix(stem, ".gen.nn"), model.generator);
  nn::save_network(with_suffix(stem, ".disc.nn"), model.discriminator);

  const auto& c = model.config;
  nlohmann::json j;
  j["room"] = model.room_label;
  j["config"] = {{"latent_dim", c.latent_dim},   {"hidden", c.hidden},
                 {"epochs", c.epochs},           {"batch_size", c.batch_size},
                 {"lr", c.lr},                   {"beta1", c.beta1},
                 {"beta2", c.beta2},             {"instance_noise_sigma", c.instance_noise_sigma},
                 {"seed", c.seed},               {"train_generator", c.train_generator}};
  j["normalizer"] = {{"min", to_vector(model.normalizer.min())},
                     {"max", to_vector(model.normalizer.max())}};
  j["epochs_trained"] = model.history.size();
  if (!model.history.empty()) {
    const auto& h = model.history.back();
    j["final"] = {{"d_loss", h.d_loss}, {"g_loss", h.g_loss}, {"d_accuracy", h.d_accuracy}};
  }
  std::ofstream out(with_suffix(stem, ".json"));
  if (!out) throw PreconditionError("cannot write " + with_suffix(stem, ".json").string());
  out << j.dump(2) << '\n';
}

GanModel load_gan(const std::filesystem::path& stem) {
  const auto json_path = with_suffix(stem, ".json");
  std::ifstream in(json_path);
  if (!in) throw PreconditionError("cannot open " + json_path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(json_path.string() + ": " + e.what());
  }
  try {
    GanConfig c;
    const auto& jc = j.at("config");
    c.latent_dim = jc.at("latent_dim").get<Eigen::Index>();
    c.hidden = jc.at("hidden").get<Eigen::Index>();
    c.epochs = jc.at("epochs").get<int>();
    c.batch_size = jc.at("batch_size").get<Eigen::Index>();
    c.lr = jc.at("lr").get<double>();
    c.beta1 = jc.at("beta1").get<double>();
    c.beta2 = jc.at("beta2").get<double>();
    c.instance_noise_sigma = jc.at("instance_noise_sigma").get<double>();
    c.seed = jc.at("seed").get<std::uint64_t>();
    c.train_generator = jc.at("train_generator").get<bool>();

    GanModel m{nn::load_network(with_suffix(stem, ".gen.nn")),
               nn::load_network(with_suffix(stem, ".disc.nn")),
               MinMaxNormalizer(from_vector(j.at("normalizer").at("min").get<std::vector<double>>()),
                                from_vector(j.at("normalizer").at("max").get<std::vector<double>>())),
               j.at("room").get<std::string>(),
               c,
               {}};
    if (j.contains("final")) {
      const auto& f = j["final"];
      m.history.push_back({f.at("d_loss").get<double>(), f.at("g_loss").get<double>(),
                           f.at("d_accuracy").get<double>()});
    }
    if (m.normalizer.dim() != m.generator.output_width()) {
      throw PreconditionError("normaliser width does not match the generator");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(json_path.string() + ": " + e.what());
  }
}

void write_history_csv(const std::filesystem::path& path, const GanModel& model) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out.precision(10);
  out << "epoch,d_loss,g_loss,d_accuracy\n";
  for (std::size_t e = 0; e < model.history.size(); ++e) {
    const auto& h = model.history[e];
    out << e + 1 << ',' << h.d_loss << ',' << h.g_loss << ',' << h.d_accuracy << '\n';
  }
}

}  // namespace airgan::gan
