#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "airgan/nn/layers.hpp"

namespace airgan::nn {

struct ParameterCount {
  std::size_t trainable = 0;
  std::size_t total = 0;  ///< includes batch-norm running statistics
};

/// One row of a layer table: kind, widths and parameter count.
struct LayerSummary {
  std::string kind;
  Eigen::Index input_dim = 0;
  Eigen::Index output_dim = 0;
  std::size_t parameters = 0;
};

/// A trainable array and its gradient, viewed as flat storage.
struct ParamBlock {
  std::span<double> value;
  std::span<double> grad;
};

ParameterCount parameter_count(const Layer& layer);

/// Feed-forward stack of layers. Owns cached activations, so a network must
/// not be shared between threads during forward/backward.
class Network {
 public:
  explicit Network(Eigen::Index input_width);

  /// Appends a layer; throws PreconditionError if its width does not chain.
  Network& add(Layer layer);

  Eigen::Index input_width() const noexcept { return input_width_; }
  Eigen::Index output_width() const noexcept { return output_width_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<Layer>& layers() noexcept { return layers_; }

  Mode mode() const noexcept { return mode_; }
  void set_mode(Mode mode) noexcept { mode_ = mode; }

  void glorot_init(std::mt19937_64& rng);

  Matrix forward(const Matrix& batch);

  /// Backpropagates `grad_output` (d loss / d output) through every layer,
  /// adding into the parameter gradients. Returns d loss / d input.
  Matrix backward(const Matrix& grad_output);

  /// As backward(), but `grad_logits` is taken w.r.t. the input of the final
  /// Sigmoid layer, which is skipped.
  Matrix backward_from_logits(const Matrix& grad_logits);

  void zero_grad();
  std::vector<ParamBlock> parameters();

  ParameterCount parameter_count() const;
  std::vector<LayerSummary> summary() const;

  /// Rounds every stored value to float precision (the checkpoint format).
  void round_to_float();

 private:
  Matrix backward_from(std::size_t end, const Matrix& grad);

  Eigen::Index input_width_;
  Eigen::Index output_width_;
  std::vector<Layer> layers_;
  Mode mode_ = Mode::kTrain;
  bool has_forward_ = false;
};

}  // namespace airgan::nn
