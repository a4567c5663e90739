#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rivergraph/adjacency.hpp"
#include "rivergraph/matrix.hpp"

namespace rivergraph {

// Multi-step forecast shape: `history` past hours of `features` channels per
// node in, `horizon` future discharge values per node out.
struct ForecastTask {
  std::size_t history = 24;
  std::size_t horizon = 24;
  std::size_t features = 1;
};

enum class Activation { relu, identity };

struct ModelConfig {
  ForecastTask task;
  std::size_t latent = 32;
  std::size_t layers = 3;
  Activation activation = Activation::relu;
};

struct Parameter {
  std::string name;
  Matrix value;
  bool trainable = true;
  Matrix mask;  // non-empty: entries where mask == 0 are pinned at 0
};

// Intermediate values of one forward pass, kept for backpropagation.
struct ForwardCache {
  Matrix input;
  Matrix encoded_pre;             // X W_in + b_in
  std::vector<Matrix> hidden;     // H_0 .. H_L
  std::vector<Matrix> propagated; // A H_{l-1}, l = 1..L
  std::vector<Matrix> pre;        // A H_{l-1} W_l + b_l
  Matrix output;
};

// GCN-style forecaster over a fixed node set:
//
//   H_0 = act(X W_in + b_in)
//   H_l = H_{l-1} + act(A H_{l-1} W_l + b_l)      l = 1..L
//   Y   = H_L W_out + b_out
//
// X is N x (history * features), column a * features + c holding channel c
// at history step a (oldest first). A is the propagation operator derived
// from the adjacency kind: identity for isolated, D^-1/2 (S + I) D^-1/2 with
// S = W + W^T for topology, W itself for dense, and a trainable copy of W
// (restricted to its support) for learned.
class ForecastModel {
 public:
  ForecastModel(const ModelConfig& config, const AdjacencyMatrix& adjacency, std::uint64_t seed);

  // All weights and biases zero (propagation unchanged).
  static ForecastModel zeros(const ModelConfig& config, const AdjacencyMatrix& adjacency);

  const ModelConfig& config() const noexcept { return config_; }
  AdjacencyKind kind() const noexcept { return kind_; }
  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t input_width() const noexcept { return config_.task.history * config_.task.features; }

  // Effective propagation matrix A.
  const Matrix& propagation() const;

  std::vector<Parameter>& parameters() noexcept { return params_; }
  const std::vector<Parameter>& parameters() const noexcept { return params_; }

  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, ForwardCache& cache) const;

  // Backpropagates dL/dY. When `grads` is non-null it must hold one matrix per
  // parameter (see make_gradients) and receives accumulated gradients.
  // Returns dL/dX.
  Matrix backward(const ForwardCache& cache, const Matrix& dy, std::vector<Matrix>* grads) const;

  std::vector<Matrix> make_gradients() const;

  // Re-applies masks and keeps learned adjacency weights nonnegative.
  void project();

 private:
  ModelConfig config_;
  AdjacencyKind kind_ = AdjacencyKind::isolated;
  std::size_t nodes_ = 0;
  Matrix fixed_propagation_;
  std::size_t adjacency_param_ = static_cast<std::size_t>(-1);
  std::vector<Parameter> params_;

  ForecastModel(const ModelConfig& config, const AdjacencyMatrix& adjacency);
  void activate(const Matrix& pre, Matrix& out) const;
  void activation_grad(const Matrix& pre, Matrix& grad) const;
};

// Propagation operator for a fixed adjacency kind (learned uses W as is).
Matrix propagation_matrix(const AdjacencyMatrix& adjacency);

// Stacks `history` per-step N x C matrices into the model input layout.
Matrix history_input(const std::vector<Matrix>& steps);

// Analytic Jacobian block dY_u / dX_v (horizon x input_width) at input x.
Matrix jacobian_block(const ForecastModel& model, const Matrix& x, std::size_t u, std::size_t v);

// Frobenius norm of jacobian_block.
double sensitivity(const ForecastModel& model, const Matrix& x, std::size_t u, std::size_t v);

}  // namespace rivergraph
