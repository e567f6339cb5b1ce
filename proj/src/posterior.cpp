#include "icin/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "icin/rng.hpp"

namespace icin {

std::int64_t ObservedCounts::total() const {
  std::int64_t t = 0;
  for (const auto& pc : counts)
    for (std::int64_t c : pc) t += c;
  return t;
}

std::size_t ObservedCounts::cell_count() const {
  std::size_t n = 0;
  for (const auto& pc : counts) n += pc.size();
  return n;
}

void ObservedCounts::validate() const {
  require(space.item_count() == patterns.item_count(), errc::invalid_argument,
          "space/pattern item counts differ");
  require(counts.size() == static_cast<std::size_t>(patterns.size()), errc::invalid_argument,
          "one count vector per pattern required");
  for (int i = 0; i < patterns.size(); ++i) {
    require(counts[static_cast<std::size_t>(i)].size() ==
                space.observed_cell_count(patterns.at(i)),
            errc::invalid_argument,
            "pattern " + patterns.at(i).str() + " must have a count for every observed cell");
    for (std::int64_t c : counts[static_cast<std::size_t>(i)])
      require(c >= 0, errc::invalid_argument, "counts must be nonnegative");
  }
  require(total() >= 1, errc::invalid_argument, "need at least one observation");
}

ObservedDistribution ObservedCounts::normalized() const {
  validate();
  const double n = static_cast<double>(total());
  std::vector<std::vector<double>> mass(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    mass[i].resize(counts[i].size());
    for (std::size_t c = 0; c < counts[i].size(); ++c)
      mass[i][c] = static_cast<double>(counts[i][c]) / n;
  }
  return ObservedDistribution{space, patterns, std::move(mass)};
}

DirichletSpec DirichletSpec::symmetric(double concentration) {
  require(concentration > 0, errc::invalid_argument, "concentration must be positive");
  DirichletSpec s;
  s.symmetric_ = concentration;
  return s;
}

DirichletSpec DirichletSpec::default_for(const ObservedCounts& counts) {
  return symmetric(1.0 / static_cast<double>(counts.cell_count()));
}

DirichletSpec DirichletSpec::per_cell(std::vector<std::vector<double>> concentration) {
  for (const auto& pc : concentration)
    for (double a : pc)
      require(a > 0 && std::isfinite(a), errc::invalid_argument,
              "concentrations must be positive and finite");
  DirichletSpec s;
  s.symmetric_ = -1.0;
  s.per_cell_ = std::move(concentration);
  return s;
}

std::vector<std::vector<double>> DirichletSpec::resolve(const ObservedCounts& counts) const {
  if (symmetric_ > 0) {
    std::vector<std::vector<double>> a(counts.counts.size());
    for (std::size_t i = 0; i < counts.counts.size(); ++i)
      a[i].assign(counts.counts[i].size(), symmetric_);
    return a;
  }
  require(per_cell_.size() == counts.counts.size(), errc::invalid_argument,
          "per-cell concentration shape mismatch");
  for (std::size_t i = 0; i < per_cell_.size(); ++i)
    require(per_cell_[i].size() == counts.counts[i].size(), errc::invalid_argument,
            "per-cell concentration shape mismatch");
  return per_cell_;
}

ObservedDistribution PosteriorDraws::distribution(std::size_t i) const {
  return ObservedDistribution{space, patterns, draws[i]};
}

PosteriorDraws sample_posterior(const ObservedCounts& counts, const DirichletSpec& prior,
                                std::size_t n_draws, std::uint64_t seed, Exec exec) {
  counts.validate();
  require(n_draws >= 1, errc::invalid_argument, "need at least one draw");
  const auto alpha = prior.resolve(counts);

  PosteriorDraws out{counts.space, counts.patterns, {}, seed};
  out.draws.resize(n_draws);

  parallel_for(n_draws, exec, [&](std::size_t d) {
    Rng rng(seed, d);  // stream keyed by draw index
    auto& draw = out.draws[d];
    draw.resize(counts.counts.size());
    double total = 0;
    for (std::size_t i = 0; i < counts.counts.size(); ++i) {
      draw[i].resize(counts.counts[i].size());
      for (std::size_t c = 0; c < counts.counts[i].size(); ++c) {
        const double shape = static_cast<double>(counts.counts[i][c]) + alpha[i][c];
        double v;
        do {
          v = rng.gamma(shape);
        } while (!(v > 0.0));  // tiny shapes can underflow; redraw
        draw[i][c] = v;
        total += v;
      }
    }
    for (auto& pc : draw)
      for (double& v : pc) v /= total;
  });
  return out;
}

FunctionalTable push_forward(const PosteriorDraws& draws, const SensitivityFunction* xi,
                             const std::vector<NamedEvent>& functionals, Exec exec) {
  require(!draws.draws.empty(), errc::invalid_argument, "no posterior draws");
  FunctionalTable table;
  for (const auto& f : functionals) table.names.push_back(f.name);
  table.values.resize(draws.size());

  // a failing draw aborts the whole run; capture and rethrow outside the loop
  std::exception_ptr first_error;
  parallel_for(draws.size(), exec, [&](std::size_t d) {
    try {
      const ObservedDistribution obs = draws.distribution(d);
      const FullDataDistribution g =
          xi ? build_full_data_xi(obs, *xi) : build_full_data(obs);
      auto& row = table.values[d];
      row.reserve(functionals.size());
      for (const auto& f : functionals) row.push_back(event_probability(g, f.pred));
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  });
  if (first_error) std::rethrow_exception(first_error);
  return table;
}

double quantile_type7(std::vector<double> values, double q) {
  require(!values.empty(), errc::invalid_argument, "quantile of empty sample");
  require(q >= 0.0 && q <= 1.0, errc::invalid_argument, "quantile level must be in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - std::floor(h);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const FunctionalTable& table,
                                  const std::vector<double>& levels) {
  require(!table.values.empty() && !table.names.empty(), errc::invalid_argument,
          "empty functional table");
  std::vector<SummaryRow> rows;
  for (std::size_t f = 0; f < table.names.size(); ++f) {
    std::vector<double> col;
    col.reserve(table.values.size());
    for (const auto& row : table.values) col.push_back(row[f]);
    SummaryRow s;
    s.name = table.names[f];
    double sum = 0;
    for (double v : col) sum += v;
    s.mean = sum / static_cast<double>(col.size());
    for (double q : levels) s.quantiles.push_back(quantile_type7(col, q));
    rows.push_back(std::move(s));
  }
  return rows;
}

}  // namespace icin
