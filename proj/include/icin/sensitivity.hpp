#pragma once
// Sensitivity-perturbed constructions g_xi. Additive offsets
// xi_j(x_j, m_j) index departures from the conditional-independence
// assumption as log odds ratios against a reference point, while the
// observed-data distribution stays fixed for every finite xi.

#include <string>
#include <vector>

#include "icin/categorical.hpp"
#include "icin/exec.hpp"

namespace icin {

// Additive family xi(x, m) = sum_j xi_j(x_j, m_j) with xi_j(., observed) = 0
// and xi_j(reference_j, missing) = 0. Only this family is supported; general
// xi tables are rejected where files are parsed.
class SensitivityFunction {
public:
  // offsets[j][level] = xi_j(level, missing)
  SensitivityFunction(const CategoricalSpace& space,
                      std::vector<std::vector<double>> offsets, std::vector<int> reference);
  static SensitivityFunction zero(const CategoricalSpace& space);

  double item_offset(int j, int level) const {
    return offsets_[static_cast<std::size_t>(j)][static_cast<std::size_t>(level)];
  }
  double total(const std::vector<int>& cell, const Pattern& m) const;
  const std::vector<int>& reference() const { return reference_; }
  bool is_zero() const;

private:
  std::vector<std::vector<double>> offsets_;
  std::vector<int> reference_;
};

struct SensitivityGrid {
  struct Point {
    std::string label;
    std::vector<double> axis_values;
    SensitivityFunction xi;
  };
  std::vector<std::string> axis_names;
  std::vector<Point> points;

  void validate() const;  // non-empty, unique labels
};

// one offset axis: vary xi_{item}(level, missing) over the given values
struct GridAxis {
  int item = 0;
  int level = 0;
  std::vector<double> values;
  std::string name;
};

// cross product of the axes, first axis slowest
SensitivityGrid make_grid(const CategoricalSpace& space, const std::vector<GridAxis>& axes,
                          std::vector<int> reference);

// Theorem-1 recursion with xi inside the exponent; marginalizing g_xi over
// the missing coordinates recovers f for every finite xi.
FullDataDistribution build_full_data_xi(const ObservedDistribution& observed,
                                        const SensitivityFunction& xi);

// log odds ratio of missingness of item j at x versus x with its j-th
// coordinate replaced by z; equals the xi difference for additive xi.
// The j-th bit of m_base is ignored; the 4-argument form uses m_base = 0_p.
double conditional_log_odds_ratio(const FullDataDistribution& g_xi, int j,
                                  const Pattern& m_base, const std::vector<int>& cell, int z);
double conditional_log_odds_ratio(const FullDataDistribution& g_xi, int j,
                                  const std::vector<int>& cell, int z);

struct GridRunResult {
  std::vector<std::string> axis_names;
  std::vector<std::string> functional_names;
  struct Row {
    std::string label;
    std::vector<double> axis_values;
    bool ok = false;
    std::string error;
    std::vector<double> values;
  };
  std::vector<Row> rows;
};

// builds g_xi per grid point and evaluates the functionals; per-point
// failures are recorded and the run continues
GridRunResult run_grid(const ObservedDistribution& observed, const SensitivityGrid& grid,
                       const std::vector<NamedEvent>& functionals,
                       Exec exec = Exec::parallel);

}  // namespace icin
