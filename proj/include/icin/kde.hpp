#pragma once
// Weighted Gaussian-kernel density estimation with Silverman's rule.
// Product kernels, so coordinate marginals of a fitted density are again
// kernel densities over the same centers and weights.

#include <span>
#include <vector>

#include "icin/errors.hpp"

namespace icin {

double weighted_mean(std::span<const double> values, std::span<const double> weights);
// sqrt of sum w (x - mean)^2 / sum w
double weighted_sd(std::span<const double> values, std::span<const double> weights);
// cumulative-midpoint rule with linear interpolation
double weighted_quantile(std::span<const double> values, std::span<const double> weights,
                         double q);
// (sum w)^2 / sum w^2
double effective_sample_size(std::span<const double> weights);

// h = 0.9 min(sd, iqr / 1.34) n_eff^(-1/5)
double silverman_bandwidth_from_moments(double sd, double iqr, double n_eff);
double silverman_bandwidth(std::span<const double> values, std::span<const double> weights);

class KdeDensity {
public:
  // centers row-major, n x dim; weights need not be normalized
  KdeDensity(int dim, std::vector<double> centers, std::vector<double> weights,
             std::vector<double> bandwidths);

  static KdeDensity fit_1d(std::span<const double> values, std::span<const double> weights);
  static KdeDensity fit_2d(std::span<const double> x1, std::span<const double> x2,
                           std::span<const double> weights);

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  double bandwidth(int d) const { return bandwidths_[static_cast<std::size_t>(d)]; }
  double center(std::size_t i, int d) const {
    return centers_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(d)];
  }
  double weight(std::size_t i) const { return weights_[i]; }
  double min_center(int d) const;
  double max_center(int d) const;

  double eval(std::span<const double> point) const;
  double log_eval(std::span<const double> point) const;
  double eval1(double x) const { return eval({&x, 1}); }
  double eval2(double x, double y) const {
    const double pt[2] = {x, y};
    return eval({pt, 2});
  }
  double log_eval1(double x) const { return log_eval({&x, 1}); }
  double log_eval2(double x, double y) const {
    const double pt[2] = {x, y};
    return log_eval({pt, 2});
  }

  // marginal onto one axis (product kernels)
  KdeDensity marginal(int axis) const;

private:
  int dim_;
  std::vector<double> centers_;
  std::vector<double> weights_;  // normalized to sum 1
  std::vector<double> bandwidths_;
  std::vector<double> log_weights_;
};

}  // namespace icin
