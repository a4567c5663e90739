#include "rivergraph/forecast.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rivergraph/error.hpp"
#include "rivergraph/simd/kernels.hpp"

namespace rivergraph {
namespace {

void glorot(Matrix& m, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : m.values()) v = dist(rng);
}

}  // namespace

Matrix propagation_matrix(const AdjacencyMatrix& adjacency) {
  const std::size_t n = adjacency.size();
  switch (adjacency.kind) {
    case AdjacencyKind::isolated:
      return Matrix::identity(n);
    case AdjacencyKind::topology: {
      Matrix s(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = adjacency.w(i, j) + adjacency.w(j, i) + (i == j ? 1.0 : 0.0);
      std::vector<double> inv_sqrt(n);
      for (std::size_t i = 0; i < n; ++i) {
        double degree = 0.0;
        for (std::size_t j = 0; j < n; ++j) degree += s(i, j);
        inv_sqrt[i] = 1.0 / std::sqrt(degree);
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) *= inv_sqrt[i] * inv_sqrt[j];
      return s;
    }
    case AdjacencyKind::dense:
    case AdjacencyKind::learned:
      return adjacency.w;
  }
  return Matrix::identity(n);
}

ForecastModel::ForecastModel(const ModelConfig& config, const AdjacencyMatrix& adjacency)
    : config_(config), kind_(adjacency.kind), nodes_(adjacency.size()) {
  const ForecastTask& task = config.task;
  if (task.history < 1 || task.horizon < 1 || task.features < 1 || config.latent < 1)
    throw Error(Errc::invalid_argument, "history, horizon, features and latent width must all be at least 1");
  if (adjacency.w.rows() != adjacency.w.cols()) throw Error(Errc::shape_mismatch, "adjacency is not square");

  const std::size_t width = input_width();
  const std::size_t h = config.latent;
  params_.push_back({"encoder.weight", Matrix(width, h), true, {}});
  params_.push_back({"encoder.bias", Matrix(1, h), true, {}});
  for (std::size_t l = 0; l < config.layers; ++l) {
    params_.push_back({"layer" + std::to_string(l) + ".weight", Matrix(h, h), true, {}});
    params_.push_back({"layer" + std::to_string(l) + ".bias", Matrix(1, h), true, {}});
  }
  params_.push_back({"decoder.weight", Matrix(h, task.horizon), true, {}});
  params_.push_back({"decoder.bias", Matrix(1, task.horizon), true, {}});

  if (kind_ == AdjacencyKind::learned) {
    Parameter adj{"adjacency", adjacency.w, adjacency.trainable, Matrix(nodes_, nodes_)};
    for (std::size_t i = 0; i < adj.value.size(); ++i) adj.mask.data()[i] = adjacency.w.data()[i] != 0.0 ? 1.0 : 0.0;
    adjacency_param_ = params_.size();
    params_.push_back(std::move(adj));
  } else {
    fixed_propagation_ = propagation_matrix(adjacency);
  }
}

ForecastModel::ForecastModel(const ModelConfig& config, const AdjacencyMatrix& adjacency, std::uint64_t seed)
    : ForecastModel(config, adjacency) {
  std::mt19937_64 rng(seed);
  for (Parameter& p : params_)
    if (p.name.ends_with(".weight")) glorot(p.value, rng);
}

ForecastModel ForecastModel::zeros(const ModelConfig& config, const AdjacencyMatrix& adjacency) {
  return ForecastModel(config, adjacency);
}

const Matrix& ForecastModel::propagation() const {
  return adjacency_param_ < params_.size() ? params_[adjacency_param_].value : fixed_propagation_;
}

void ForecastModel::activate(const Matrix& pre, Matrix& out) const {
  out = pre;
  if (config_.activation == Activation::relu) simd::active().relu(pre.data(), out.data(), pre.size());
}

void ForecastModel::activation_grad(const Matrix& pre, Matrix& grad) const {
  if (config_.activation == Activation::relu) simd::active().relu_mask(pre.data(), grad.data(), grad.size());
}

Matrix ForecastModel::forward(const Matrix& x) const {
  ForwardCache cache;
  return forward(x, cache);
}

Matrix ForecastModel::forward(const Matrix& x, ForwardCache& cache) const {
  if (x.rows() != nodes_ || x.cols() != input_width())
    throw Error(Errc::shape_mismatch, "input is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                                          ", model expects " + std::to_string(nodes_) + "x" + std::to_string(input_width()));
  const auto& k = simd::active();
  const Matrix& a = propagation();
  const std::size_t layers = config_.layers;

  cache.input = x;
  gemm(x, params_[0].value, cache.encoded_pre);
  add_row_vector(cache.encoded_pre, params_[1].value.row(0));
  cache.hidden.resize(layers + 1);
  cache.propagated.resize(layers);
  cache.pre.resize(layers);
  activate(cache.encoded_pre, cache.hidden[0]);

  Matrix update;
  for (std::size_t l = 0; l < layers; ++l) {
    gemm(a, cache.hidden[l], cache.propagated[l]);
    gemm(cache.propagated[l], params_[2 + 2 * l].value, cache.pre[l]);
    add_row_vector(cache.pre[l], params_[3 + 2 * l].value.row(0));
    activate(cache.pre[l], update);
    cache.hidden[l + 1] = cache.hidden[l];
    k.axpy(1.0, update.data(), cache.hidden[l + 1].data(), update.size());
  }

  const std::size_t out_w = 2 + 2 * layers;
  gemm(cache.hidden[layers], params_[out_w].value, cache.output);
  add_row_vector(cache.output, params_[out_w + 1].value.row(0));
  return cache.output;
}

std::vector<Matrix> ForecastModel::make_gradients() const {
  std::vector<Matrix> grads;
  grads.reserve(params_.size());
  for (const Parameter& p : params_) grads.emplace_back(p.value.rows(), p.value.cols());
  return grads;
}

Matrix ForecastModel::backward(const ForwardCache& cache, const Matrix& dy, std::vector<Matrix>* grads) const {
  if (dy.rows() != nodes_ || dy.cols() != config_.task.horizon) throw Error(Errc::shape_mismatch, "output gradient has wrong shape");
  if (grads != nullptr && grads->size() != params_.size()) throw Error(Errc::shape_mismatch, "gradient list does not match parameters");
  const std::size_t layers = config_.layers;
  const Matrix& a = propagation();
  const std::size_t out_w = 2 + 2 * layers;

  if (grads != nullptr) {
    gemm_tn(cache.hidden[layers], dy, (*grads)[out_w], true);
    accumulate_column_sums(dy, (*grads)[out_w + 1].row(0));
  }
  Matrix dh;
  gemm_nt(dy, params_[out_w].value, dh);

  Matrix dz, dp;
  for (std::size_t l = layers; l-- > 0;) {
    dz = dh;
    activation_grad(cache.pre[l], dz);
    if (grads != nullptr) {
      gemm_tn(cache.propagated[l], dz, (*grads)[2 + 2 * l], true);
      accumulate_column_sums(dz, (*grads)[3 + 2 * l].row(0));
    }
    gemm_nt(dz, params_[2 + 2 * l].value, dp);
    // Residual path keeps dh; the message path adds A^T dP.
    gemm_tn(a, dp, dh, true);
    if (grads != nullptr && adjacency_param_ < params_.size() && params_[adjacency_param_].trainable) {
      Matrix ga;
      gemm_nt(dp, cache.hidden[l], ga);
      Matrix& target = (*grads)[adjacency_param_];
      const Matrix& mask = params_[adjacency_param_].mask;
      for (std::size_t i = 0; i < ga.size(); ++i) target.data()[i] += mask.data()[i] * ga.data()[i];
    }
  }

  dz = dh;
  activation_grad(cache.encoded_pre, dz);
  if (grads != nullptr) {
    gemm_tn(cache.input, dz, (*grads)[0], true);
    accumulate_column_sums(dz, (*grads)[1].row(0));
  }
  Matrix dx;
  gemm_nt(dz, params_[0].value, dx);
  return dx;
}

void ForecastModel::project() {
  for (Parameter& p : params_) {
    if (p.mask.empty()) continue;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      double& v = p.value.data()[i];
      v = p.mask.data()[i] == 0.0 ? 0.0 : std::max(v, 0.0);
    }
  }
}

Matrix history_input(const std::vector<Matrix>& steps) {
  if (steps.empty()) throw Error(Errc::shape_mismatch, "history is empty");
  const std::size_t n = steps[0].rows(), c = steps[0].cols();
  Matrix x(n, steps.size() * c);
  for (std::size_t a = 0; a < steps.size(); ++a) {
    if (steps[a].rows() != n || steps[a].cols() != c) throw Error(Errc::shape_mismatch, "history steps differ in shape");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t ch = 0; ch < c; ++ch) x(i, a * c + ch) = steps[a](i, ch);
  }
  return x;
}

Matrix jacobian_block(const ForecastModel& model, const Matrix& x, std::size_t u, std::size_t v) {
  if (u >= model.nodes() || v >= model.nodes()) throw Error(Errc::invalid_argument, "node index out of range");
  ForwardCache cache;
  model.forward(x, cache);
  const std::size_t horizon = model.config().task.horizon;
  Matrix jac(horizon, model.input_width());
  Matrix seed(model.nodes(), horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    seed.fill(0.0);
    seed(u, k) = 1.0;
    const Matrix dx = model.backward(cache, seed, nullptr);
    for (std::size_t f = 0; f < dx.cols(); ++f) jac(k, f) = dx(v, f);
  }
  return jac;
}

double sensitivity(const ForecastModel& model, const Matrix& x, std::size_t u, std::size_t v) {
  return frobenius_norm(jacobian_block(model, x, u, v));
}

}  // namespace rivergraph
