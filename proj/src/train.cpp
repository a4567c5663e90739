#include "rivergraph/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "rivergraph/error.hpp"
#include "rivergraph/metrics.hpp"
#include "rivergraph/simd/kernels.hpp"

namespace rivergraph {

Matrix ForecastDataset::input(std::size_t start) const {
  const std::size_t n = nodes(), c = task.features;
  Matrix x(n, task.history * c);
  for (std::size_t a = 0; a < task.history; ++a) {
    const Matrix& step = steps[start - task.history + a];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t ch = 0; ch < c; ++ch) x(i, a * c + ch) = step(i, ch);
  }
  return x;
}

Matrix ForecastDataset::target(std::size_t start) const {
  Matrix y(nodes(), task.horizon);
  for (std::size_t h = 0; h < task.horizon; ++h)
    for (std::size_t i = 0; i < nodes(); ++i) y(i, h) = steps[start + h](i, 0);
  return y;
}

ForecastDataset make_dataset(const std::vector<Matrix>& raw_steps, const ForecastTask& task, std::size_t split,
                             std::size_t stride) {
  if (raw_steps.empty()) throw Error(Errc::invalid_argument, "no time steps");
  if (stride == 0) throw Error(Errc::invalid_argument, "window stride must be positive");
  const std::size_t n = raw_steps[0].rows(), c = raw_steps[0].cols();
  if (c != task.features) throw Error(Errc::shape_mismatch, "step width differs from the task's feature count");
  for (const Matrix& s : raw_steps)
    if (s.rows() != n || s.cols() != c) throw Error(Errc::shape_mismatch, "time steps differ in shape");
  if (split <= task.history || split >= raw_steps.size())
    throw Error(Errc::invalid_argument, "split leaves no room for a training or test window");

  std::vector<std::vector<double>> train_cols(c);
  for (std::size_t t = 0; t < split; ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t ch = 0; ch < c; ++ch) train_cols[ch].push_back(raw_steps[t](i, ch));
  std::vector<std::string> names{"discharge"};
  for (std::size_t ch = 1; ch < c; ++ch) names.push_back("channel" + std::to_string(ch));

  ForecastDataset data;
  data.task = task;
  data.split = split;
  data.stats = fit_zscore(train_cols, std::nullopt, names);
  data.steps = raw_steps;
  for (Matrix& s : data.steps)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t ch = 0; ch < c; ++ch) s(i, ch) = data.stats.normalize(ch, s(i, ch));

  for (std::size_t t = task.history; t + task.horizon <= split; t += stride) data.train_starts.push_back(t);
  for (std::size_t t = split; t + task.horizon <= raw_steps.size(); t += stride) data.test_starts.push_back(t);
  if (data.train_starts.empty() || data.test_starts.empty())
    throw Error(Errc::invalid_argument, "record too short for the requested history, horizon and split");
  return data;
}

ForecastDataset basin_dataset(const SyntheticBasin& basin, std::size_t history, std::size_t horizon,
                              double train_fraction, std::size_t stride) {
  const std::size_t hours = basin.discharge.rows(), n = basin.discharge.cols();
  std::vector<Matrix> steps(hours, Matrix(n, 2));
  for (std::size_t t = 0; t < hours; ++t)
    for (std::size_t i = 0; i < n; ++i) {
      steps[t](i, 0) = basin.discharge(t, i);
      steps[t](i, 1) = basin.rainfall(t, i);
    }
  const auto split = static_cast<std::size_t>(train_fraction * static_cast<double>(hours));
  return make_dataset(steps, ForecastTask{history, horizon, 2}, split, stride);
}

AlignedRecord align_hourly(const std::vector<GaugeSeries>& series, const std::vector<StationId>& stations,
                           const std::vector<std::string>& features) {
  constexpr std::chrono::seconds hour{3600};
  std::vector<const GaugeSeries*> picked;
  for (StationId id : stations) {
    auto it = std::find_if(series.begin(), series.end(), [&](const GaugeSeries& s) { return s.station == id; });
    if (it == series.end()) throw Error(Errc::unknown_station, "no gauge record for station " + std::to_string(id));
    if (it->timestamps.empty()) throw Error(Errc::invalid_argument, "gauge record for station " + std::to_string(id) + " is empty");
    for (const std::string& f : features)
      if (!it->features.contains(f))
        throw Error(Errc::shape_mismatch, "station " + std::to_string(id) + " has no '" + f + "' column");
    picked.push_back(&*it);
  }
  if (picked.empty()) throw Error(Errc::invalid_argument, "no stations to align");

  Timestamp first = picked[0]->timestamps.front(), last = first;
  for (const GaugeSeries* s : picked) {
    first = std::min(first, *std::min_element(s->timestamps.begin(), s->timestamps.end()));
    last = std::max(last, *std::max_element(s->timestamps.begin(), s->timestamps.end()));
  }
  const auto hours = static_cast<std::size_t>((last - first) / hour) + 1;
  const std::size_t channels = 1 + features.size();
  AlignedRecord record{first, std::vector<Matrix>(hours, Matrix(picked.size(), channels))};

  for (std::size_t i = 0; i < picked.size(); ++i) {
    const GaugeSeries& s = *picked[i];
    std::vector<std::optional<std::size_t>> sample_at(hours);
    for (std::size_t k = 0; k < s.timestamps.size(); ++k) {
      const auto offset = s.timestamps[k] - first;
      if (offset % hour == std::chrono::seconds{0}) sample_at[static_cast<std::size_t>(offset / hour)] = k;
    }
    std::optional<std::size_t> current;
    for (std::size_t t = 0; t < hours && !current; ++t) current = sample_at[t];
    if (!current) throw Error(Errc::invalid_argument, "station " + std::to_string(s.station) + " has no on-grid samples");
    for (std::size_t t = 0; t < hours; ++t) {
      if (sample_at[t]) current = sample_at[t];
      record.steps[t](i, 0) = s.discharge[*current];
      for (std::size_t f = 0; f < features.size(); ++f) record.steps[t](i, 1 + f) = s.features.at(features[f])[*current];
    }
  }
  return record;
}

std::string_view optimizer_name(Optimizer opt) noexcept { return opt == Optimizer::adam ? "adam" : "sgd"; }

std::optional<Optimizer> parse_optimizer(std::string_view name) noexcept {
  if (name == "adam") return Optimizer::adam;
  if (name == "sgd") return Optimizer::sgd;
  return std::nullopt;
}

double scheduled_lr(const TrainConfig& config, int epoch) {
  double lr = config.lr;
  for (int milestone : config.lr_halving_epochs)
    if (milestone <= epoch) lr *= 0.5;
  return lr;
}

namespace {

void validate(const TrainConfig& c) {
  if (!(c.lr > 0.0) || !(c.weight_decay >= 0.0) || !(c.clip_norm > 0.0) || c.epochs < 1 || c.batch_size < 1)
    throw Error(Errc::invalid_argument, "training config needs positive lr, clip norm, epochs and batch size");
}

// MAE of one window and, when grads is given, its gradient scaled by `weight`.
double window_loss(const ForecastModel& model, const ForecastDataset& data, std::size_t start, double weight,
                   std::vector<Matrix>* grads, ForwardCache& cache) {
  const Matrix y = model.forward(data.input(start), cache);
  const Matrix target = data.target(start);
  const double count = static_cast<double>(y.size());
  double loss = 0.0;
  Matrix dy(y.rows(), y.cols());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double diff = y.data()[i] - target.data()[i];
    loss += std::abs(diff);
    dy.data()[i] = diff > 0.0 ? weight / count : (diff < 0.0 ? -weight / count : 0.0);
  }
  if (grads != nullptr) model.backward(cache, dy, grads);
  return loss / count;
}

}  // namespace

double evaluate_mae(const ForecastModel& model, const ForecastDataset& data, std::span<const std::size_t> starts) {
  if (starts.empty()) return 0.0;
  ForwardCache cache;
  double total = 0.0;
  for (std::size_t s : starts) total += window_loss(model, data, s, 0.0, nullptr, cache);
  return total / static_cast<double>(starts.size());
}

TrainResult train(ForecastModel& model, const ForecastDataset& data, const TrainConfig& config) {
  validate(config);
  if (data.nodes() != model.nodes()) throw Error(Errc::shape_mismatch, "dataset node count differs from the model");
  if (data.task.history != model.config().task.history || data.task.horizon != model.config().task.horizon ||
      data.task.features != model.config().task.features)
    throw Error(Errc::shape_mismatch, "dataset task differs from the model task");

  const auto& k = simd::active();
  std::vector<Parameter>& params = model.parameters();
  std::vector<Matrix> grads = model.make_gradients();
  std::vector<Matrix> m1 = model.make_gradients(), m2 = model.make_gradients();
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order = data.train_starts;
  ForwardCache cache;
  long step = 0;

  TrainResult result;
  result.initial_loss = evaluate_mae(model, data, data.train_starts);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = scheduled_lr(config, epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const double weight = 1.0 / static_cast<double>(end - begin);
      for (Matrix& g : grads) g.fill(0.0);
      double batch_loss = 0.0;
      for (std::size_t b = begin; b < end; ++b) batch_loss += weight * window_loss(model, data, order[b], weight, &grads, cache);
      if (!std::isfinite(batch_loss))
        throw Error(Errc::nonfinite_loss, "loss became " + std::to_string(batch_loss) + " at epoch " + std::to_string(epoch) +
                                              ", batch " + std::to_string(batches) + " (lr " + std::to_string(lr) + ")");

      double norm_sq = 0.0;
      for (std::size_t p = 0; p < params.size(); ++p)
        if (params[p].trainable) norm_sq += k.dot(grads[p].data(), grads[p].data(), grads[p].size());
      const double norm = std::sqrt(norm_sq);
      if (norm > config.clip_norm) {
        const double factor = config.clip_norm / (norm + 1e-6);
        for (Matrix& g : grads) k.scale(factor, g.data(), g.size());
      }

      ++step;
      const double bias1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(step));
      const double bias2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(step));
      for (std::size_t p = 0; p < params.size(); ++p) {
        if (!params[p].trainable) continue;
        double* w = params[p].value.data();
        double* g = grads[p].data();
        const std::size_t count = params[p].value.size();
        if (config.optimizer == Optimizer::adam) {
          double* m = m1[p].data();
          double* v = m2[p].data();
          for (std::size_t i = 0; i < count; ++i) {
            const double gi = g[i] + config.weight_decay * w[i];
            m[i] = config.adam_beta1 * m[i] + (1.0 - config.adam_beta1) * gi;
            v[i] = config.adam_beta2 * v[i] + (1.0 - config.adam_beta2) * gi * gi;
            w[i] -= lr * (m[i] / bias1) / (std::sqrt(v[i] / bias2) + config.adam_eps);
          }
        } else {
          k.scale(1.0 - lr * config.weight_decay, w, count);
          k.axpy(-lr, g, w, count);
        }
      }
      model.project();
      epoch_loss += batch_loss;
      ++batches;
    }
    result.loss_curve.push_back(batches > 0 ? epoch_loss / static_cast<double>(batches) : 0.0);
  }
  result.final_loss = evaluate_mae(model, data, data.train_starts);
  return result;
}

std::vector<HorizonScore> evaluate_nse(const ForecastModel& model, const ForecastDataset& data) {
  const std::size_t n = data.nodes(), horizon = data.task.horizon, windows = data.test_starts.size();
  // predicted[h][i] / observed[h][i] hold one value per test window.
  std::vector<std::vector<std::vector<double>>> predicted(horizon, std::vector<std::vector<double>>(n)), observed = predicted;
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t s = data.test_starts[w];
    const Matrix y = model.forward(data.input(s));
    const Matrix target = data.target(s);
    for (std::size_t h = 0; h < horizon; ++h)
      for (std::size_t i = 0; i < n; ++i) {
        predicted[h][i].push_back(y(i, h));
        observed[h][i].push_back(target(i, h));
      }
  }

  std::vector<HorizonScore> scores;
  for (std::size_t h = 0; h < horizon; ++h) {
    HorizonScore score;
    score.horizon = h + 1;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      try {
        total += nse(predicted[h][i], observed[h][i]);
        ++score.nodes_scored;
      } catch (const Error& e) {
        if (e.code() != Errc::constant_observed) throw;
      }
    }
    score.nse = score.nodes_scored > 0 ? total / static_cast<double>(score.nodes_scored) : 0.0;
    scores.push_back(score);
  }
  return scores;
}

}  // namespace rivergraph
