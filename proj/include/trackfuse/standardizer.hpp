#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace trackfuse {

/// Per-feature mean/variance scaling fitted on training scores and reused unchanged at test time.
struct Standardizer {
  static constexpr double std_floor = 1e-12;

  std::vector<double> mean;
  std::vector<double> std;

  std::size_t dim() const noexcept { return mean.size(); }

  std::vector<double> transform(std::span<const double> x) const {
    check_dim(x.size());
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean[i]) / std[i];
    return out;
  }

  std::vector<double> inverse_transform(std::span<const double> z) const {
    check_dim(z.size());
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] * std[i] + mean[i];
    return out;
  }

  /// Identity scaling of the given dimension.
  static Standardizer identity(std::size_t dim) { return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)}; }

  friend bool operator==(const Standardizer&, const Standardizer&) = default;

 private:
  void check_dim(std::size_t n) const {
    if (n != mean.size()) {
      throw std::invalid_argument("Standardizer: expected " + std::to_string(mean.size()) + " features, got " +
                                  std::to_string(n));
    }
  }
};

/// Population mean and standard deviation per feature, std floored at 1e-12.
inline Standardizer fit_standardizer(std::span<const std::vector<double>> samples) {
  if (samples.empty()) throw std::invalid_argument("fit_standardizer: no samples");
  const std::size_t d = samples.front().size();
  if (d == 0) throw std::invalid_argument("fit_standardizer: zero-dimensional samples");
  Standardizer s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (const auto& x : samples) {
    if (x.size() != d) throw std::invalid_argument("fit_standardizer: inconsistent sample dimension");
    for (std::size_t i = 0; i < d; ++i) s.mean[i] += x[i];
  }
  const auto n = static_cast<double>(samples.size());
  for (auto& m : s.mean) m /= n;
  for (const auto& x : samples) {
    for (std::size_t i = 0; i < d; ++i) {
      const double c = x[i] - s.mean[i];
      s.std[i] += c * c;
    }
  }
  for (auto& v : s.std) v = std::max(std::sqrt(v / n), Standardizer::std_floor);
  return s;
}

}  // namespace trackfuse
