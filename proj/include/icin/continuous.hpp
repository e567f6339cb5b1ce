#pragma once
// Bivariate continuous construction: the four conditional densities g_m
// identified from the complete-case joint density, the two single-missing
// marginal densities and the pattern proportions, with tensor-grid
// trapezoid quadrature for the normalization constant and functionals.
//
// Pattern convention: bit 0 is x1, bit 1 is x2, 1 = missing. So "01" means
// x1 observed, x2 missing.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "icin/exec.hpp"
#include "icin/kde.hpp"
#include "icin/pattern.hpp"

namespace icin {

struct WeightedRecord {
  std::optional<double> x1, x2;
  double weight = 1.0;

  Pattern pattern() const;
};

struct WeightedSample {
  std::vector<WeightedRecord> records;

  void validate() const;  // weights > 0, finite coordinates, >= 2 complete records
};

// index 0..3 for patterns 00, 01, 10, 11
int bivariate_pattern_index(const Pattern& m);
Pattern bivariate_pattern(int idx);

// weighted share of records per pattern, over all four patterns
std::array<double, 4> pattern_proportions(const WeightedSample& sample);

struct GridSpec {
  std::array<double, 2> lo{};
  std::array<double, 2> hi{};
  std::array<int, 2> points{};

  void validate() const;  // lo < hi, points >= 32
  std::vector<double> axis(int d) const;
  double step(int d) const;
};

class BivariateIcin {
public:
  BivariateIcin(KdeDensity f00, KdeDensity f01, KdeDensity f10, std::array<double, 4> pi,
                std::array<std::int64_t, 4> counts, GridSpec grid, Exec exec);

  const KdeDensity& f00() const { return f00_; }
  const KdeDensity& f01() const { return f01_; }
  const KdeDensity& f10() const { return f10_; }
  const KdeDensity& f00_marginal(int axis) const { return axis == 0 ? f00_x1_ : f00_x2_; }
  const std::array<double, 4>& pattern_mass() const { return pi_; }
  const std::array<std::int64_t, 4>& pattern_counts() const { return counts_; }
  const GridSpec& grid() const { return grid_; }
  double log_g11_norm() const { return log_g11_norm_; }

  // conditional density g_m(x1, x2) at an arbitrary point
  double log_density(const Pattern& m, double x1, double x2) const;
  double density(const Pattern& m, double x1, double x2) const;

  // cached evaluation at grid node (i, j)
  double log_density_at_node(int pattern_idx, int i, int j) const;
  const std::vector<double>& axis(int d) const { return d == 0 ? x1g_ : x2g_; }
  double quad_weight(int d, int i) const;  // trapezoid weight including the step

private:
  KdeDensity f00_, f01_, f10_;
  KdeDensity f00_x1_, f00_x2_;
  std::array<double, 4> pi_;
  std::array<std::int64_t, 4> counts_;
  GridSpec grid_;
  std::vector<double> x1g_, x2g_;
  std::vector<double> log_f00_grid_;               // n1 x n2 row-major
  std::vector<double> log_f00x1_g_, log_f01_g_;    // along x1
  std::vector<double> log_f00x2_g_, log_f10_g_;    // along x2
  double log_g11_norm_ = 0.0;
};

// Fits the three kernel densities with Silverman bandwidths, derives the
// pattern proportions and the normalization constant. Default grid: data
// range padded by 4 max bandwidths, 256 points per axis.
BivariateIcin fit_bivariate(const WeightedSample& sample,
                            const std::optional<GridSpec>& grid = std::nullopt,
                            Exec exec = Exec::parallel);

struct PatternFunctionals {
  double grid_mass = 0.0;  // quadrature mass before normalization
  double pr_x1_gt_x2 = 0.0;
  double mean_x1 = 0.0;
  double mean_x2 = 0.0;
  double corr = 0.0;
};

PatternFunctionals pattern_functionals(const BivariateIcin& model, const Pattern& m);

// pr(M_axis = 1 | X_axis = x) along the given axis (1 or 2), one value per
// requested point; points must lie inside the quadrature grid
std::vector<double> missingness_curve(const BivariateIcin& model, int axis,
                                      std::span<const double> points,
                                      Exec exec = Exec::parallel);

}  // namespace icin
