#include "icin/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icin/logsumexp.hpp"

namespace icin {

namespace {
constexpr double kLogRoot2Pi = 0.9189385332046727;  // log sqrt(2 pi)
}

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
  require(values.size() == weights.size() && !values.empty(), errc::invalid_argument,
          "values/weights size mismatch");
  double sw = 0, sx = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(weights[i] > 0, errc::invalid_argument, "weights must be positive");
    sw += weights[i];
    sx += weights[i] * values[i];
  }
  return sx / sw;
}

double weighted_sd(std::span<const double> values, std::span<const double> weights) {
  const double mu = weighted_mean(values, weights);
  double sw = 0, s2 = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sw += weights[i];
    const double d = values[i] - mu;
    s2 += weights[i] * d * d;
  }
  return std::sqrt(s2 / sw);
}

double weighted_quantile(std::span<const double> values, std::span<const double> weights,
                         double q) {
  require(values.size() == weights.size() && !values.empty(), errc::invalid_argument,
          "values/weights size mismatch");
  require(q >= 0.0 && q <= 1.0, errc::invalid_argument, "quantile level must be in [0,1]");
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  double sw = 0;
  for (double w : weights) sw += w;

  // cumulative midpoints p_i = (c_i - w_i / 2) / sum w
  double cum = 0;
  double prev_p = 0, prev_v = values[idx[0]];
  bool first = true;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const double w = weights[idx[r]];
    const double v = values[idx[r]];
    cum += w;
    const double p = (cum - 0.5 * w) / sw;
    if (first) {
      if (q <= p) return v;
      first = false;
    } else if (q <= p) {
      const double t = (q - prev_p) / (p - prev_p);
      return prev_v + t * (v - prev_v);
    }
    prev_p = p;
    prev_v = v;
  }
  return prev_v;
}

double effective_sample_size(std::span<const double> weights) {
  double sw = 0, sw2 = 0;
  for (double w : weights) {
    sw += w;
    sw2 += w * w;
  }
  require(sw2 > 0, errc::invalid_argument, "weights are degenerate");
  return sw * sw / sw2;
}

double silverman_bandwidth_from_moments(double sd, double iqr, double n_eff) {
  require(n_eff > 0, errc::invalid_argument, "effective sample size must be positive");
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0) spread = std::max(sd, iqr / 1.34);  // IQR can collapse on lumpy weights
  require(spread > 0, errc::degenerate, "sample has no spread; bandwidth undefined");
  return 0.9 * spread * std::pow(n_eff, -0.2);
}

double silverman_bandwidth(std::span<const double> values, std::span<const double> weights) {
  require(values.size() >= 2, errc::invalid_argument, "need at least 2 values");
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  require(hi > lo, errc::degenerate, "all values identical; bandwidth undefined");
  const double sd = weighted_sd(values, weights);
  const double iqr =
      weighted_quantile(values, weights, 0.75) - weighted_quantile(values, weights, 0.25);
  return silverman_bandwidth_from_moments(sd, iqr, effective_sample_size(weights));
}

KdeDensity::KdeDensity(int dim, std::vector<double> centers, std::vector<double> weights,
                       std::vector<double> bandwidths)
    : dim_(dim),
      centers_(std::move(centers)),
      weights_(std::move(weights)),
      bandwidths_(std::move(bandwidths)) {
  require(dim_ == 1 || dim_ == 2, errc::invalid_argument, "kde supports 1 or 2 dimensions");
  require(!weights_.empty(), errc::invalid_argument, "kde needs at least one center");
  require(centers_.size() == weights_.size() * static_cast<std::size_t>(dim_),
          errc::invalid_argument, "centers/weights size mismatch");
  require(bandwidths_.size() == static_cast<std::size_t>(dim_), errc::invalid_argument,
          "one bandwidth per dimension required");
  for (double h : bandwidths_)
    require(h > 0 && std::isfinite(h), errc::invalid_argument, "bandwidths must be positive");
  double sw = 0;
  for (double w : weights_) {
    require(w > 0, errc::invalid_argument, "kde weights must be positive");
    sw += w;
  }
  log_weights_.resize(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    weights_[i] /= sw;
    log_weights_[i] = std::log(weights_[i]);
  }
}

KdeDensity KdeDensity::fit_1d(std::span<const double> values, std::span<const double> weights) {
  const double h = silverman_bandwidth(values, weights);
  return KdeDensity(1, std::vector<double>(values.begin(), values.end()),
                    std::vector<double>(weights.begin(), weights.end()), {h});
}

KdeDensity KdeDensity::fit_2d(std::span<const double> x1, std::span<const double> x2,
                              std::span<const double> weights) {
  require(x1.size() == x2.size() && x1.size() == weights.size(), errc::invalid_argument,
          "coordinate/weight size mismatch");
  const double h1 = silverman_bandwidth(x1, weights);
  const double h2 = silverman_bandwidth(x2, weights);
  std::vector<double> centers(2 * x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i) {
    centers[2 * i] = x1[i];
    centers[2 * i + 1] = x2[i];
  }
  return KdeDensity(2, std::move(centers),
                    std::vector<double>(weights.begin(), weights.end()), {h1, h2});
}

double KdeDensity::min_center(int d) const {
  double lo = center(0, d);
  for (std::size_t i = 1; i < size(); ++i) lo = std::min(lo, center(i, d));
  return lo;
}

double KdeDensity::max_center(int d) const {
  double hi = center(0, d);
  for (std::size_t i = 1; i < size(); ++i) hi = std::max(hi, center(i, d));
  return hi;
}

double KdeDensity::eval(std::span<const double> point) const {
  require(point.size() == static_cast<std::size_t>(dim_), errc::invalid_argument,
          "point dimension mismatch");
  double total = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    double k = weights_[i];
    for (int d = 0; d < dim_; ++d) {
      const double h = bandwidths_[static_cast<std::size_t>(d)];
      const double z = (point[static_cast<std::size_t>(d)] - center(i, d)) / h;
      k *= std::exp(-0.5 * z * z) / (h * 2.5066282746310002);  // sqrt(2 pi)
    }
    total += k;
  }
  return total;
}

double KdeDensity::log_eval(std::span<const double> point) const {
  require(point.size() == static_cast<std::size_t>(dim_), errc::invalid_argument,
          "point dimension mismatch");
  StreamingLogSumExp acc;
  double log_h = 0;
  for (int d = 0; d < dim_; ++d)
    log_h += std::log(bandwidths_[static_cast<std::size_t>(d)]);
  for (std::size_t i = 0; i < size(); ++i) {
    double e = log_weights_[i];
    for (int d = 0; d < dim_; ++d) {
      const double z =
          (point[static_cast<std::size_t>(d)] - center(i, d)) / bandwidths_[static_cast<std::size_t>(d)];
      e -= 0.5 * z * z + kLogRoot2Pi;
    }
    acc.add(e);
  }
  return acc.value() - log_h;
}

KdeDensity KdeDensity::marginal(int axis) const {
  require(dim_ == 2, errc::invalid_argument, "marginal is only defined for 2d densities");
  require(axis == 0 || axis == 1, errc::invalid_argument, "axis must be 0 or 1");
  std::vector<double> centers(size());
  for (std::size_t i = 0; i < size(); ++i) centers[i] = center(i, axis);
  return KdeDensity(1, std::move(centers), weights_,
                    {bandwidths_[static_cast<std::size_t>(axis)]});
}

}  // namespace icin
