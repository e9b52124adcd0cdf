#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "trackfuse/core.hpp"
#include "trackfuse/random.hpp"
#include "trackfuse/standardizer.hpp"

namespace trackfuse {

struct FcmOptions {
  std::size_t clusters = 3;
  double fuzziness = 2.0;
  double tol = 1e-6;  // on the largest center displacement
  int max_iter = 300;
  std::uint64_t seed = 0;
  friend bool operator==(const FcmOptions&, const FcmOptions&) = default;
};

struct FcmFit {
  std::vector<std::vector<double>> centers;
  std::vector<std::vector<double>> membership;  // [point][cluster]
  std::vector<double> objective;                // J after each membership update
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace detail

/// Membership of `x` in each cluster: u_k = 1 / sum_j (d_k / d_j)^(2/(m-1)).
/// A point sitting on a center belongs to that center (the first one, if several coincide).
inline std::vector<double> fcm_membership(std::span<const std::vector<double>> centers, std::span<const double> x,
                                          double m) {
  const std::size_t c = centers.size();
  std::vector<double> u(c, 0.0);
  std::vector<double> d2(c);
  for (std::size_t k = 0; k < c; ++k) {
    d2[k] = detail::squared_distance(centers[k], x);
    if (d2[k] == 0.0) {
      u[k] = 1.0;
      return u;
    }
  }
  const double expo = 1.0 / (m - 1.0);
  // Work with ratios to the nearest center so the powers stay bounded.
  const double dmin = *std::min_element(d2.begin(), d2.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    u[k] = std::pow(dmin / d2[k], expo);
    sum += u[k];
  }
  for (auto& v : u) v /= sum;
  return u;
}

inline double fcm_objective(std::span<const std::vector<double>> points, std::span<const std::vector<double>> centers,
                            std::span<const std::vector<double>> membership, double m) {
  double j = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < centers.size(); ++k) {
      j += std::pow(membership[i][k], m) * detail::squared_distance(points[i], centers[k]);
    }
  }
  return j;
}

/// Fuzzy c-means by alternating membership and center updates, seeded by picking
/// `clusters` distinct data points at random.
inline FcmFit fcm_fit(std::span<const std::vector<double>> points, const FcmOptions& opts) {
  if (opts.clusters == 0) throw std::invalid_argument("fcm_fit: need at least one cluster");
  if (!(opts.fuzziness > 1.0)) throw std::invalid_argument("fcm_fit: fuzziness must exceed 1");
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw std::invalid_argument("fcm_fit: invalid stopping rule");
  if (points.size() < opts.clusters) throw std::invalid_argument("fcm_fit: fewer points than clusters");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("fcm_fit: inconsistent point dimension");
  }
  const std::set<std::vector<double>> distinct(points.begin(), points.end());
  if (distinct.size() < opts.clusters) throw std::invalid_argument("fcm_fit: fewer distinct points than clusters");

  const std::size_t n = points.size();
  const std::size_t c = opts.clusters;
  const double m = opts.fuzziness;

  // Partial Fisher-Yates shuffle until c distinct points are drawn.
  Rng rng(opts.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  FcmFit fit;
  std::set<std::vector<double>> chosen;
  for (std::size_t i = 0; i < n && fit.centers.size() < c; ++i) {
    const std::size_t pick = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[pick]);
    if (chosen.insert(points[order[i]]).second) fit.centers.push_back(points[order[i]]);
  }

  auto update_membership = [&] {
    fit.membership.resize(n);
    for (std::size_t i = 0; i < n; ++i) fit.membership[i] = fcm_membership(fit.centers, points[i], m);
    fit.objective.push_back(fcm_objective(points, fit.centers, fit.membership, m));
  };

  update_membership();
  std::vector<double> weight(c);
  for (int it = 0; it < opts.max_iter; ++it) {
    std::vector<std::vector<double>> next(c, std::vector<double>(dim, 0.0));
    std::fill(weight.begin(), weight.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < c; ++k) {
        const double w = std::pow(fit.membership[i][k], m);
        weight[k] += w;
        for (std::size_t d = 0; d < dim; ++d) next[k][d] += w * points[i][d];
      }
    }
    double shift = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      if (weight[k] > 0.0) {
        for (auto& v : next[k]) v /= weight[k];
      } else {
        next[k] = fit.centers[k];
      }
      shift = std::max(shift, std::sqrt(detail::squared_distance(next[k], fit.centers[k])));
    }
    fit.centers = std::move(next);
    fit.iterations = it + 1;
    update_membership();
    if (shift < opts.tol) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

/// Per-point argmax membership, lowest cluster index on ties.
inline std::vector<std::size_t> fcm_hard_assign(std::span<const std::vector<double>> membership) {
  std::vector<std::size_t> out;
  out.reserve(membership.size());
  for (const auto& row : membership) {
    out.push_back(static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin()));
  }
  return out;
}

struct ClusterMapping {
  std::vector<int> cluster_to_class;
  double accuracy = 0.0;
};

/// Exhaustive search over bijections cluster -> class maximizing label accuracy;
/// ties go to the lexicographically smallest map.
inline ClusterMapping map_clusters_to_classes(std::span<const std::size_t> assignments, std::span<const int> labels,
                                              std::size_t n_classes) {
  if (assignments.size() != labels.size()) throw std::invalid_argument("map_clusters_to_classes: length mismatch");
  std::size_t k = n_classes;
  for (auto a : assignments) k = std::max(k, a + 1);
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("map_clusters_to_classes: negative label");
    k = std::max(k, static_cast<std::size_t>(l) + 1);
  }
  // Contingency table: hits[cluster][class].
  std::vector<std::vector<std::size_t>> hits(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < labels.size(); ++i) ++hits[assignments[i]][static_cast<std::size_t>(labels[i])];

  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  ClusterMapping best{perm, -1.0};
  std::size_t best_hits = 0;
  bool first = true;
  do {
    std::size_t total = 0;
    for (std::size_t c = 0; c < k; ++c) total += hits[c][static_cast<std::size_t>(perm[c])];
    if (first || total > best_hits) {
      best_hits = total;
      best.cluster_to_class = perm;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.accuracy = labels.empty() ? 0.0 : static_cast<double>(best_hits) / static_cast<double>(labels.size());
  return best;
}

/// Trained clustering learner: centers live in standardized score space.
struct FcmModel {
  std::vector<std::vector<double>> centers;
  double fuzziness = 2.0;
  std::vector<int> cluster_to_class;
  double tol = 1e-6;
  int max_iter = 300;
  std::uint64_t seed = 0;

  std::size_t n_inputs() const { return centers.empty() ? 0 : centers.front().size(); }

  int predict(std::span<const double> z) const {
    if (z.size() != n_inputs()) throw std::invalid_argument("FcmModel: input dimension mismatch");
    for (double v : z) {
      if (!std::isfinite(v)) throw std::invalid_argument("FcmModel: non-finite input");
    }
    const auto u = fcm_membership(centers, z, fuzziness);
    const auto cluster = static_cast<std::size_t>(std::max_element(u.begin(), u.end()) - u.begin());
    return cluster_to_class[cluster];
  }

  void validate() const {
    if (centers.empty()) throw std::invalid_argument("FcmModel: no centers");
    if (cluster_to_class.size() != centers.size()) throw std::invalid_argument("FcmModel: map size mismatch");
    std::vector<int> sorted = cluster_to_class;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != static_cast<int>(i)) throw std::invalid_argument("FcmModel: cluster map is not a bijection");
    }
    if (!(fuzziness > 1.0)) throw std::invalid_argument("FcmModel: fuzziness must exceed 1");
  }

  friend bool operator==(const FcmModel&, const FcmModel&) = default;
};

struct FcmTrainResult {
  Standardizer standardizer;
  FcmModel model;
  FcmFit fit;
  double train_accuracy = 0.0;
};

/// Unsupervised fit on standardized scores with c = N + 1 clusters, then the supervised
/// post-hoc cluster -> class map that maximizes training accuracy.
inline FcmTrainResult fcm_train(std::span<const LabeledSample> samples, FcmOptions opts) {
  if (samples.empty()) throw std::invalid_argument("fcm_train: no samples");
  const std::size_t n = samples.front().scores.size();
  std::vector<std::vector<double>> raw;
  std::vector<int> labels;
  for (const auto& s : samples) {
    if (s.scores.size() != n) throw std::invalid_argument("fcm_train: inconsistent score dimension");
    if (s.label < 0 || s.label > static_cast<int>(n)) throw std::invalid_argument("fcm_train: label out of range");
    raw.push_back(s.scores);
    labels.push_back(s.label);
  }
  opts.clusters = n + 1;
  FcmTrainResult out;
  out.standardizer = fit_standardizer(raw);
  std::vector<std::vector<double>> z;
  z.reserve(raw.size());
  for (const auto& x : raw) z.push_back(out.standardizer.transform(x));
  out.fit = fcm_fit(z, opts);
  const auto assign = fcm_hard_assign(out.fit.membership);
  const auto mapping = map_clusters_to_classes(assign, labels, n + 1);
  out.train_accuracy = mapping.accuracy;
  out.model = FcmModel{out.fit.centers, opts.fuzziness, mapping.cluster_to_class, opts.tol, opts.max_iter, opts.seed};
  return out;
}

}  // namespace trackfuse
