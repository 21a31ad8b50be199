#include "airgan/nn/network.hpp"

#include <type_traits>

#include "airgan/core/error.hpp"

namespace airgan::nn {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Matrix forward_layer(Dense& d, const Matrix& x, Mode) {
  d.input = x;
  Matrix y = x * d.weights.transpose();
  y.rowwise() += d.bias.transpose();
  return y;
}

Matrix forward_layer(BatchNorm& bn, const Matrix& x, Mode mode) {
  bn.cached_mode = mode;
  Vector mean, var;
  if (mode == Mode::kTrain) {
    if (x.rows() < 2) throw PreconditionError("batch norm in train mode needs a batch of at least 2");
    mean = x.colwise().mean().transpose();
    var = (x.rowwise() - mean.transpose()).array().square().colwise().mean().transpose();
    bn.running_mean = bn.momentum * bn.running_mean + (1.0 - bn.momentum) * mean;
    bn.running_var = bn.momentum * bn.running_var + (1.0 - bn.momentum) * var;
  } else {
    mean = bn.running_mean;
    var = bn.running_var;
  }
  bn.inv_std = (var.array() + bn.epsilon).rsqrt().matrix();
  bn.normalized = ((x.rowwise() - mean.transpose()).array().rowwise() * bn.inv_std.transpose().array()).matrix();
  Matrix y = (bn.normalized.array().rowwise() * bn.gamma.transpose().array()).matrix();
  y.rowwise() += bn.beta.transpose();
  return y;
}

Matrix forward_layer(LeakyReLU& a, const Matrix& x, Mode) {
  a.input = x;
  const double s = a.slope;
  return x.unaryExpr([s](double v) { return leaky_relu(v, s); });
}

Matrix forward_layer(Sigmoid& a, const Matrix& x, Mode) {
  a.output = x.unaryExpr([](double v) { return sigmoid(v); });
  return a.output;
}

Matrix backward_layer(Dense& d, const Matrix& g) {
  d.grad_weights += g.transpose() * d.input;
  d.grad_bias += g.colwise().sum().transpose();
  return g * d.weights;
}

Matrix backward_layer(BatchNorm& bn, const Matrix& g) {
  const Matrix& xhat = bn.normalized;
  bn.grad_gamma += (g.array() * xhat.array()).colwise().sum().transpose().matrix();
  bn.grad_beta += g.colwise().sum().transpose();
  const Matrix dxhat = (g.array().rowwise() * bn.gamma.transpose().array()).matrix();
  if (bn.cached_mode == Mode::kInference) {
    return (dxhat.array().rowwise() * bn.inv_std.transpose().array()).matrix();
  }
  const double b = static_cast<double>(g.rows());
  const Eigen::RowVectorXd sum_d = dxhat.colwise().sum();
  const Eigen::RowVectorXd sum_dx = (dxhat.array() * xhat.array()).colwise().sum();
  Matrix dx = b * dxhat;
  dx.rowwise() -= sum_d;
  dx -= (xhat.array().rowwise() * sum_dx.array()).matrix();
  return ((dx.array().rowwise() * bn.inv_std.transpose().array()) / b).matrix();
}

Matrix backward_layer(LeakyReLU& a, const Matrix& g) {
  const double s = a.slope;
  return g.binaryExpr(a.input, [s](double gv, double xv) { return xv >= 0.0 ? gv : s * gv; });
}

Matrix backward_layer(Sigmoid& a, const Matrix& g) {
  return (g.array() * a.output.array() * (1.0 - a.output.array())).matrix();
}

// Width a layer expects, or -1 when it accepts any width.
Eigen::Index layer_input(const Layer& layer) {
  return std::visit(Overloaded{[](const Dense& d) { return d.in(); },
                               [](const BatchNorm& bn) { return bn.features(); },
                               [](const auto&) { return Eigen::Index{-1}; }},
                    layer);
}

Eigen::Index layer_output(const Layer& layer, Eigen::Index in) {
  return std::visit(Overloaded{[](const Dense& d) { return d.out(); },
                               [in](const auto&) { return in; }},
                    layer);
}

const char* layer_kind(const Layer& layer) {
  return std::visit(Overloaded{[](const Dense&) { return "Dense"; },
                               [](const BatchNorm&) { return "BatchNorm"; },
                               [](const LeakyReLU&) { return "LeakyReLU"; },
                               [](const Sigmoid&) { return "Sigmoid"; }},
                    layer);
}

}  // namespace

ParameterCount parameter_count(const Layer& layer) {
  return std::visit(
      Overloaded{[](const Dense& d) {
                   const auto n = static_cast<std::size_t>(d.weights.size() + d.bias.size());
                   return ParameterCount{n, n};
                 },
                 [](const BatchNorm& bn) {
                   const auto f = static_cast<std::size_t>(bn.features());
                   return ParameterCount{2 * f, 4 * f};
                 },
                 [](const auto&) { return ParameterCount{}; }},
      layer);
}

Network::Network(Eigen::Index input_width) : input_width_(input_width), output_width_(input_width) {
  if (input_width <= 0) throw PreconditionError("network input width must be positive");
}

Network& Network::add(Layer layer) {
  const Eigen::Index expects = layer_input(layer);
  if (expects >= 0 && expects != output_width_) {
    throw PreconditionError(std::string(layer_kind(layer)) + " expects width " +
                            std::to_string(expects) + " but the network provides " +
                            std::to_string(output_width_));
  }
  output_width_ = layer_output(layer, output_width_);
  layers_.push_back(std::move(layer));
  has_forward_ = false;
  return *this;
}

void Network::glorot_init(std::mt19937_64& rng) {
  for (auto& layer : layers_) {
    if (auto* d = std::get_if<Dense>(&layer)) d->glorot_init(rng);
  }
}

Matrix Network::forward(const Matrix& batch) {
  if (batch.cols() != input_width_) {
    throw PreconditionError("network input has width " + std::to_string(batch.cols()) +
                            ", expected " + std::to_string(input_width_));
  }
  if (batch.rows() == 0) throw PreconditionError("empty batch");
  Matrix x = batch;
  for (auto& layer : layers_) {
    x = std::visit([&](auto& l) { return forward_layer(l, x, mode_); }, layer);
  }
  has_forward_ = true;
  return x;
}

Matrix Network::backward_from(std::size_t end, const Matrix& grad) {
  if (!has_forward_) throw PreconditionError("backward called without a cached forward pass");
  Matrix g = grad;
  for (std::size_t i = end; i-- > 0;) {
    g = std::visit([&](auto& l) { return backward_layer(l, g); }, layers_[i]);
  }
  return g;
}

Matrix Network::backward(const Matrix& grad_output) {
  if (grad_output.cols() != output_width_) {
    throw PreconditionError("gradient width does not match the network output");
  }
  return backward_from(layers_.size(), grad_output);
}

Matrix Network::backward_from_logits(const Matrix& grad_logits) {
  if (layers_.empty() || !std::holds_alternative<Sigmoid>(layers_.back())) {
    throw PreconditionError("backward_from_logits needs a final Sigmoid layer");
  }
  if (grad_logits.cols() != output_width_) {
    throw PreconditionError("gradient width does not match the network output");
  }
  return backward_from(layers_.size() - 1, grad_logits);
}

void Network::zero_grad() {
  for (auto& layer : layers_) {
    if (auto* d = std::get_if<Dense>(&layer)) {
      d->grad_weights.setZero();
      d->grad_bias.setZero();
    } else if (auto* bn = std::get_if<BatchNorm>(&layer)) {
      bn->grad_gamma.setZero();
      bn->grad_beta.setZero();
    }
  }
}

std::vector<ParamBlock> Network::parameters() {
  std::vector<ParamBlock> blocks;
  auto add_block = [&](auto& value, auto& grad) {
    const auto n = static_cast<std::size_t>(value.size());
    blocks.push_back({{value.data(), n}, {grad.data(), n}});
  };
  for (auto& layer : layers_) {
    if (auto* d = std::get_if<Dense>(&layer)) {
      add_block(d->weights, d->grad_weights);
      add_block(d->bias, d->grad_bias);
    } else if (auto* bn = std::get_if<BatchNorm>(&layer)) {
      add_block(bn->gamma, bn->grad_gamma);
      add_block(bn->beta, bn->grad_beta);
    }
  }
  return blocks;
}

ParameterCount Network::parameter_count() const {
  ParameterCount total;
  for (const auto& layer : layers_) {
    const auto c = nn::parameter_count(layer);
    total.trainable += c.trainable;
    total.total += c.total;
  }
  return total;
}

std::vector<LayerSummary> Network::summary() const {
  std::vector<LayerSummary> rows;
  Eigen::Index width = input_width_;
  for (const auto& layer : layers_) {
    const Eigen::Index out = layer_output(layer, width);
    rows.push_back({layer_kind(layer), width, out, nn::parameter_count(layer).total});
    width = out;
  }
  return rows;
}

void Network::round_to_float() {
  auto round = [](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
    }
  };
  for (auto& layer : layers_) {
    if (auto* d = std::get_if<Dense>(&layer)) {
      round(d->weights);
      round(d->bias);
    } else if (auto* bn = std::get_if<BatchNorm>(&layer)) {
      round(bn->gamma);
      round(bn->beta);
      round(bn->running_mean);
      round(bn->running_var);
    }
  }
}

}  // namespace airgan::nn
