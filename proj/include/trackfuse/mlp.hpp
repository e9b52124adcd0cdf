#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "trackfuse/core.hpp"
#include "trackfuse/lbfgs.hpp"
#include "trackfuse/random.hpp"
#include "trackfuse/standardizer.hpp"

namespace trackfuse {

/// Fully connected classifier: rectifier hidden layers, softmax output.
///
/// Parameters are stored flat, layer by layer; each layer holds its weight matrix
/// (row-major, out x in) followed by its bias vector.
struct MlpModel {
  std::vector<std::size_t> layer_sizes;
  std::vector<double> params;
  std::uint64_t seed = 0;

  std::size_t n_inputs() const { return layer_sizes.front(); }
  std::size_t n_classes() const { return layer_sizes.back(); }

  static std::size_t param_count(std::span<const std::size_t> sizes) {
    std::size_t n = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l) n += sizes[l] * sizes[l - 1] + sizes[l];
    return n;
  }

  void validate() const {
    if (layer_sizes.size() < 2) throw std::invalid_argument("MlpModel: need at least input and output layers");
    for (auto s : layer_sizes) {
      if (s == 0) throw std::invalid_argument("MlpModel: empty layer");
    }
    if (params.size() != param_count(layer_sizes)) throw std::invalid_argument("MlpModel: parameter count mismatch");
    for (double p : params) {
      if (!std::isfinite(p)) throw std::invalid_argument("MlpModel: non-finite parameter");
    }
  }

  /// Class probabilities for an already standardized input.
  std::vector<double> probabilities(std::span<const double> z) const;

  /// Most probable class, lowest index on ties.
  int predict(std::span<const double> z) const {
    const auto p = probabilities(z);
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  }

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

namespace detail {

inline void softmax_inplace(std::vector<double>& a) {
  const double top = *std::max_element(a.begin(), a.end());
  double sum = 0.0;
  for (auto& v : a) {
    v = std::exp(v - top);
    sum += v;
  }
  for (auto& v : a) v /= sum;
}

// Per-sample activations; acts[0] is the input, acts.back() the softmax output.
inline void mlp_forward(std::span<const std::size_t> sizes, std::span<const double> params, std::span<const double> x,
                        std::vector<std::vector<double>>& acts) {
  acts.resize(sizes.size());
  acts[0].assign(x.begin(), x.end());
  std::size_t off = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    const std::size_t in = sizes[l - 1];
    const std::size_t out = sizes[l];
    const double* w = params.data() + off;
    const double* b = w + out * in;
    auto& a = acts[l];
    a.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double s = b[o];
      for (std::size_t i = 0; i < in; ++i) s += w[o * in + i] * acts[l - 1][i];
      a[o] = (l + 1 < sizes.size()) ? std::max(s, 0.0) : s;
    }
    off += out * in + out;
  }
  softmax_inplace(acts.back());
}

}  // namespace detail

inline std::vector<double> MlpModel::probabilities(std::span<const double> z) const {
  if (z.size() != n_inputs()) throw std::invalid_argument("MlpModel: input dimension mismatch");
  for (double v : z) {
    if (!std::isfinite(v)) throw std::invalid_argument("MlpModel: non-finite input");
  }
  std::vector<std::vector<double>> acts;
  detail::mlp_forward(layer_sizes, params, z, acts);
  return acts.back();
}

/// Mean cross-entropy over a standardized batch; writes the gradient w.r.t. all parameters.
inline double mlp_loss_and_grad(std::span<const std::size_t> sizes, std::span<const double> params,
                                std::span<const std::vector<double>> inputs, std::span<const int> labels,
                                std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev_delta;
  double loss = 0.0;
  const std::size_t layers = sizes.size();

  std::vector<std::size_t> offsets(layers, 0);
  for (std::size_t l = 1; l + 1 < layers; ++l) offsets[l + 1] = offsets[l] + sizes[l] * sizes[l - 1] + sizes[l];

  for (std::size_t s = 0; s < inputs.size(); ++s) {
    detail::mlp_forward(sizes, params, inputs[s], acts);
    const auto& p = acts.back();
    const auto y = static_cast<std::size_t>(labels[s]);
    loss -= std::log(std::max(p[y], std::numeric_limits<double>::min()));

    // Softmax + cross-entropy: dL/dlogits = p - onehot(y).
    delta = p;
    delta[y] -= 1.0;
    for (std::size_t l = layers - 1; l >= 1; --l) {
      const std::size_t in = sizes[l - 1];
      const std::size_t out = sizes[l];
      const double* w = params.data() + offsets[l];
      double* gw = grad.data() + offsets[l];
      double* gb = gw + out * in;
      for (std::size_t o = 0; o < out; ++o) {
        gb[o] += delta[o];
        for (std::size_t i = 0; i < in; ++i) gw[o * in + i] += delta[o] * acts[l - 1][i];
      }
      if (l == 1) break;
      prev_delta.assign(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        if (acts[l - 1][i] <= 0.0) continue;  // rectifier gate
        double sum = 0.0;
        for (std::size_t o = 0; o < out; ++o) sum += w[o * in + i] * delta[o];
        prev_delta[i] = sum;
      }
      delta.swap(prev_delta);
    }
  }
  const auto n = static_cast<double>(inputs.size());
  for (auto& v : grad) v /= n;
  return loss / n;
}

/// Uniform initialization in +-sqrt(6 / (fan_in + fan_out)) for weights and biases.
inline MlpModel mlp_init(std::vector<std::size_t> layer_sizes, std::uint64_t seed) {
  MlpModel m{std::move(layer_sizes), {}, seed};
  Rng rng(seed);
  for (std::size_t l = 1; l < m.layer_sizes.size(); ++l) {
    const double fan_in = static_cast<double>(m.layer_sizes[l - 1]);
    const double fan_out = static_cast<double>(m.layer_sizes[l]);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    const std::size_t count = m.layer_sizes[l] * m.layer_sizes[l - 1] + m.layer_sizes[l];
    for (std::size_t i = 0; i < count; ++i) m.params.push_back(rng.uniform(-bound, bound));
  }
  return m;
}

struct MlpTrainResult {
  Standardizer standardizer;
  MlpModel model;
  LbfgsResult optimizer;  // winning restart; x holds the final parameters as well
  std::vector<double> restart_losses;  // final loss of each restart, in order
};

/// Hidden layer widths used by default: 3 then 2 rectifier units.
inline const std::vector<std::size_t>& default_hidden_layers() {
  static const std::vector<std::size_t> hidden{3, 2};
  return hidden;
}

/// Seed of the k-th restart; restart 0 uses the caller's seed unchanged.
inline std::uint64_t restart_seed(std::uint64_t seed, std::size_t k) {
  return seed + static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ULL;
}

/// Fits the standardizer on the training scores and minimizes the mean cross-entropy of
/// an [N, hidden..., N+1] network with L-BFGS from `restarts` initializations, keeping
/// the lowest final loss (earliest restart on ties). Narrow ReLU layers can start dead,
/// which parks L-BFGS on the constant-predictor plateau.
/// Deterministic in (data, seed, options, restarts).
inline MlpTrainResult mlp_train(std::span<const LabeledSample> samples, const LbfgsOptions& opts, std::uint64_t seed,
                                const std::vector<std::size_t>& hidden = default_hidden_layers(),
                                std::size_t restarts = 5) {
  if (restarts == 0) throw std::invalid_argument("mlp_train: need at least one restart");
  if (samples.empty()) throw std::invalid_argument("mlp_train: no samples");
  const std::size_t n = samples.front().scores.size();
  if (n == 0) throw std::invalid_argument("mlp_train: empty score vectors");
  if (samples.size() < n + 1) throw std::invalid_argument("mlp_train: need at least N+1 samples");
  std::set<int> classes;
  std::vector<std::vector<double>> raw;
  std::vector<int> labels;
  raw.reserve(samples.size());
  labels.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.scores.size() != n) throw std::invalid_argument("mlp_train: inconsistent score dimension");
    if (s.label < 0 || s.label > static_cast<int>(n)) throw std::invalid_argument("mlp_train: label out of range");
    for (double v : s.scores) {
      if (!std::isfinite(v)) throw std::invalid_argument("mlp_train: non-finite score");
    }
    classes.insert(s.label);
    raw.push_back(s.scores);
    labels.push_back(s.label);
  }
  if (classes.size() < 2) throw std::invalid_argument("mlp_train: training data holds a single class");

  MlpTrainResult out;
  out.standardizer = fit_standardizer(raw);
  std::vector<std::vector<double>> inputs;
  inputs.reserve(raw.size());
  for (const auto& x : raw) inputs.push_back(out.standardizer.transform(x));

  std::vector<std::size_t> sizes{n};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(n + 1);
  auto objective = [&](std::span<const double> p, std::span<double> g) {
    return mlp_loss_and_grad(sizes, p, inputs, labels, g);
  };
  for (std::size_t k = 0; k < restarts; ++k) {
    MlpModel model = mlp_init(sizes, restart_seed(seed, k));
    auto result = lbfgs_minimize(objective, model.params, opts);
    out.restart_losses.push_back(result.f);
    if (k == 0 || result.f < out.optimizer.f) {
      model.params = result.x;
      out.model = std::move(model);
      out.optimizer = std::move(result);
    }
  }
  return out;
}

inline int mlp_predict(const MlpModel& model, const Standardizer& standardizer, std::span<const double> scores) {
  for (double v : scores) {
    if (!std::isfinite(v)) throw std::invalid_argument("mlp_predict: non-finite score");
  }
  return model.predict(standardizer.transform(scores));
}

/// Largest relative disagreement between the analytic gradient and central finite
/// differences over all parameters, on a standardized batch.
inline double gradient_check(const MlpModel& model, std::span<const std::vector<double>> inputs,
                             std::span<const int> labels, double step = 1e-5) {
  model.validate();
  const std::size_t np = model.params.size();
  std::vector<double> analytic(np), scratch(np);
  mlp_loss_and_grad(model.layer_sizes, model.params, inputs, labels, analytic);
  std::vector<double> p = model.params;
  double worst = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    const double keep = p[i];
    p[i] = keep + step;
    const double up = mlp_loss_and_grad(model.layer_sizes, p, inputs, labels, scratch);
    p[i] = keep - step;
    const double down = mlp_loss_and_grad(model.layer_sizes, p, inputs, labels, scratch);
    p[i] = keep;
    const double numeric = (up - down) / (2.0 * step);
    const double scale = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-4});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
  }
  return worst;
}

}  // namespace trackfuse
