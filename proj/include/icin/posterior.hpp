#pragma once
// Bayesian propagation: Dirichlet-multinomial posterior over the observed
// cells, pushed draw by draw through the saturated construction. Draws are
// conjugate (independent gammas, normalized) with per-draw RNG streams, so
// output is independent of thread count.

#include <cstdint>
#include <vector>

#include "icin/categorical.hpp"
#include "icin/exec.hpp"
#include "icin/sensitivity.hpp"

namespace icin {

struct ObservedCounts {
  CategoricalSpace space;
  PatternSet patterns;
  std::vector<std::vector<std::int64_t>> counts;  // [pattern idx][observed cell idx]

  std::int64_t total() const;
  std::size_t cell_count() const;  // observed cells across patterns
  void validate() const;           // counts >= 0, total >= 1
  ObservedDistribution normalized() const;  // counts / N (may contain zeros)
};

class DirichletSpec {
public:
  static DirichletSpec symmetric(double concentration);
  // the 1/C default, C = number of observed cells
  static DirichletSpec default_for(const ObservedCounts& counts);
  static DirichletSpec per_cell(std::vector<std::vector<double>> concentration);

  // per-cell concentrations in the shape of the counts
  std::vector<std::vector<double>> resolve(const ObservedCounts& counts) const;
  double symmetric_value() const { return symmetric_; }  // <= 0 when per-cell

private:
  double symmetric_ = 0.0;
  std::vector<std::vector<double>> per_cell_;
};

struct PosteriorDraws {
  CategoricalSpace space;
  PatternSet patterns;
  std::vector<std::vector<std::vector<double>>> draws;  // [draw][pattern][cell]
  std::uint64_t seed = 0;

  std::size_t size() const { return draws.size(); }
  ObservedDistribution distribution(std::size_t i) const;
};

PosteriorDraws sample_posterior(const ObservedCounts& counts, const DirichletSpec& prior,
                                std::size_t n_draws, std::uint64_t seed,
                                Exec exec = Exec::parallel);

struct FunctionalTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // [draw][functional]
};

// xi == nullptr means the unperturbed construction
FunctionalTable push_forward(const PosteriorDraws& draws, const SensitivityFunction* xi,
                             const std::vector<NamedEvent>& functionals,
                             Exec exec = Exec::parallel);

// type-7 interpolated sample quantile (copies and sorts)
double quantile_type7(std::vector<double> values, double q);

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  std::vector<double> quantiles;
};

std::vector<SummaryRow> summarize(const FunctionalTable& table,
                                  const std::vector<double>& levels = {0.025, 0.5, 0.975});

}  // namespace icin
