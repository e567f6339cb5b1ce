#include "icin/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "icin/logsumexp.hpp"
#include "icin/rng.hpp"

namespace icin {

namespace {

constexpr std::size_t kMaxCells = 10'000'000;  // full-table materialization guard
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string cell_str(const std::vector<int>& cell) {
  std::string s = "(";
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(cell[i] + 1);  // report 1-based
  }
  return s + ")";
}

}  // namespace

CategoricalSpace::CategoricalSpace(std::vector<int> levels) : levels_(std::move(levels)) {
  require(!levels_.empty(), errc::invalid_argument, "need at least one item");
  for (int k : levels_)
    require(k >= 2, errc::invalid_argument, "every item needs at least 2 categories");
  cells_ = 1;
  for (int k : levels_) {
    require(cells_ <= kMaxCells / static_cast<std::size_t>(k), errc::unsupported_size,
            "full-cell count exceeds the 1e7 materialization guard");
    cells_ *= static_cast<std::size_t>(k);
  }
  stride_.assign(levels_.size(), 1);
  for (int j = static_cast<int>(levels_.size()) - 2; j >= 0; --j)
    stride_[static_cast<std::size_t>(j)] =
        stride_[static_cast<std::size_t>(j + 1)] *
        static_cast<std::size_t>(levels_[static_cast<std::size_t>(j + 1)]);
}

std::size_t CategoricalSpace::index_of(const std::vector<int>& cell) const {
  require(cell.size() == levels_.size(), errc::invalid_argument, "cell arity mismatch");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < cell.size(); ++j) {
    require(cell[j] >= 0 && cell[j] < levels_[j], errc::invalid_argument,
            "cell level out of range at item " + std::to_string(j + 1));
    idx += static_cast<std::size_t>(cell[j]) * stride_[j];
  }
  return idx;
}

std::vector<int> CategoricalSpace::cell_at(std::size_t idx) const {
  std::vector<int> cell(levels_.size());
  decode(idx, cell);
  return cell;
}

void CategoricalSpace::decode(std::size_t idx, std::vector<int>& cell) const {
  cell.resize(levels_.size());
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    cell[j] = static_cast<int>(idx / stride_[j]);
    idx %= stride_[j];
  }
}

std::size_t CategoricalSpace::observed_cell_count(const Pattern& m) const {
  require(m.size() == item_count(), errc::invalid_argument, "pattern length mismatch");
  std::size_t n = 1;
  for (int j = 0; j < item_count(); ++j)
    if (m.observed(j)) n *= static_cast<std::size_t>(levels(j));
  return n;
}

std::size_t CategoricalSpace::observed_index(const std::vector<int>& full_cell,
                                             const Pattern& m) const {
  std::size_t idx = 0;
  for (int j = 0; j < item_count(); ++j)
    if (m.observed(j))
      idx = idx * static_cast<std::size_t>(levels(j)) +
            static_cast<std::size_t>(full_cell[static_cast<std::size_t>(j)]);
  return idx;
}

std::vector<int> CategoricalSpace::observed_cell_at(std::size_t idx, const Pattern& m) const {
  std::vector<int> vals;
  std::vector<int> obs_items;
  for (int j = 0; j < item_count(); ++j)
    if (m.observed(j)) obs_items.push_back(j);
  vals.assign(obs_items.size(), 0);
  for (int t = static_cast<int>(obs_items.size()) - 1; t >= 0; --t) {
    const int k = levels(obs_items[static_cast<std::size_t>(t)]);
    vals[static_cast<std::size_t>(t)] = static_cast<int>(idx % static_cast<std::size_t>(k));
    idx /= static_cast<std::size_t>(k);
  }
  return vals;
}

double ObservedDistribution::total() const {
  double t = 0;
  for (const auto& pm : mass)
    for (double v : pm) t += v;
  return t;
}

void ObservedDistribution::validate(double total_tol) const {
  require(space.item_count() == patterns.item_count(), errc::invalid_argument,
          "space/pattern item counts differ");
  require(mass.size() == static_cast<std::size_t>(patterns.size()), errc::invalid_argument,
          "one mass vector per pattern required");
  for (int i = 0; i < patterns.size(); ++i) {
    const auto& m = patterns.at(i);
    require(mass[static_cast<std::size_t>(i)].size() == space.observed_cell_count(m),
            errc::invalid_argument,
            "pattern " + m.str() + " must have an entry for every observed cell");
    for (double v : mass[static_cast<std::size_t>(i)])
      require(v >= 0 && std::isfinite(v), errc::invalid_argument,
              "observed masses must be finite and nonnegative");
  }
  require(std::fabs(total() - 1.0) <= total_tol, errc::invalid_argument,
          "observed masses must sum to 1");
}

double FullDataDistribution::mass(const Pattern& m, const std::vector<int>& cell) const {
  const int i = patterns.index_of(m);
  if (i < 0) return 0.0;
  return std::exp(log_g[static_cast<std::size_t>(i)][space.index_of(cell)]);
}

double FullDataDistribution::log_mass(const Pattern& m, const std::vector<int>& cell) const {
  const int i = patterns.index_of(m);
  if (i < 0) return kNegInf;
  return log_g[static_cast<std::size_t>(i)][space.index_of(cell)];
}

double FullDataDistribution::total() const {
  double t = 0;
  for (const auto& pg : log_g)
    for (double lg : pg) t += std::exp(lg);
  return t;
}

namespace {

// One pass of the recursion: eta and, when wanted, log g. Shared by
// build_eta and build_full_data.
struct RecursionResult {
  EtaTable eta;
  std::vector<std::vector<double>> log_g;
};

RecursionResult run_recursion(const ObservedDistribution& obs, bool want_log_g) {
  obs.validate();
  const auto& sp = obs.space;
  const auto& ps = obs.patterns;
  const std::size_t ncells = sp.cell_count();
  const int nm = ps.size();

  require(ncells <= kMaxCells / static_cast<std::size_t>(nm), errc::unsupported_size,
          "full table (cells x patterns) exceeds the 1e7 guard");

  // observed-cell index of every full cell, per pattern
  std::vector<std::vector<std::uint32_t>> obs_idx(static_cast<std::size_t>(nm));
  {
    std::vector<int> cell;
    for (int i = 0; i < nm; ++i) {
      obs_idx[static_cast<std::size_t>(i)].resize(ncells);
      const Pattern& m = ps.at(i);
      for (std::size_t x = 0; x < ncells; ++x) {
        sp.decode(x, cell);
        obs_idx[static_cast<std::size_t>(i)][x] =
            static_cast<std::uint32_t>(sp.observed_index(cell, m));
      }
    }
  }

  RecursionResult out;
  out.eta.values.resize(static_cast<std::size_t>(nm));
  if (want_log_g) out.log_g.resize(static_cast<std::size_t>(nm));

  std::vector<double> partial(ncells);  // sum of eta_{m'} over strict predecessors
  std::vector<double> grp_max, grp_sum;

  for (int i = 0; i < nm; ++i) {
    const Pattern& m = ps.at(i);
    std::fill(partial.begin(), partial.end(), 0.0);
    for (int k = 0; k < i; ++k) {
      if (!strictly_precedes(ps.at(k), m)) continue;
      const auto& ek = out.eta.values[static_cast<std::size_t>(k)];
      const auto& ok = obs_idx[static_cast<std::size_t>(k)];
      for (std::size_t x = 0; x < ncells; ++x) partial[x] += ek[ok[x]];
    }

    // log-sum-exp of the partial sums within each observed cell of m
    const std::size_t nobs = sp.observed_cell_count(m);
    grp_max.assign(nobs, kNegInf);
    grp_sum.assign(nobs, 0.0);
    const auto& oi = obs_idx[static_cast<std::size_t>(i)];
    for (std::size_t x = 0; x < ncells; ++x)
      grp_max[oi[x]] = std::max(grp_max[oi[x]], partial[x]);
    for (std::size_t x = 0; x < ncells; ++x)
      grp_sum[oi[x]] += std::exp(partial[x] - grp_max[oi[x]]);

    auto& ei = out.eta.values[static_cast<std::size_t>(i)];
    ei.resize(nobs);
    for (std::size_t o = 0; o < nobs; ++o) {
      const double f = obs.mass[static_cast<std::size_t>(i)][o];
      if (!(f > 0.0))
        fail(errc::positivity, "observed mass is not positive at pattern " + m.str() +
                                   ", cell " + cell_str(sp.observed_cell_at(o, m)));
      const double lse = grp_max[o] + std::log(grp_sum[o]);
      if (!std::isfinite(lse))
        fail(errc::numeric, "non-finite log-sum in recursion at pattern " + m.str());
      ei[o] = std::log(f) - lse;
      if (!std::isfinite(ei[o]))
        fail(errc::numeric, "non-finite eta at pattern " + m.str());
    }

    if (want_log_g) {
      auto& gi = out.log_g[static_cast<std::size_t>(i)];
      gi.resize(ncells);
      for (std::size_t x = 0; x < ncells; ++x) gi[x] = partial[x] + ei[oi[x]];
    }
  }
  return out;
}

}  // namespace

EtaTable build_eta(const ObservedDistribution& observed) {
  return run_recursion(observed, false).eta;
}

FullDataDistribution build_full_data(const ObservedDistribution& observed) {
  RecursionResult r = run_recursion(observed, true);
  return FullDataDistribution{observed.space, observed.patterns, std::move(r.eta),
                              std::move(r.log_g)};
}

double missingness_logit(const FullDataDistribution& g, int j, const Pattern& m_base,
                         const std::vector<int>& cell) {
  require(j >= 0 && j < g.space.item_count(), errc::invalid_argument,
          "item index out of range");
  const Pattern m1 = m_base.with_bit(j, true);
  const Pattern m0 = m_base.with_bit(j, false);
  const int i1 = g.patterns.index_of(m1);
  const int i0 = g.patterns.index_of(m0);
  if (i1 < 0 && i0 < 0)
    fail(errc::undefined_conditional,
         "neither sibling pattern " + m1.str() + " nor " + m0.str() + " is realizable");
  const std::size_t x = g.space.index_of(cell);
  if (i1 < 0) return kNegInf;
  if (i0 < 0) return std::numeric_limits<double>::infinity();
  return g.log_mass(i1, x) - g.log_mass(i0, x);
}

std::vector<double> item_marginal(const FullDataDistribution& g) {
  std::vector<double> pr(g.space.cell_count(), 0.0);
  for (const auto& pg : g.log_g)
    for (std::size_t x = 0; x < pr.size(); ++x) pr[x] += std::exp(pg[x]);
  return pr;
}

double event_probability(const FullDataDistribution& g, const CellPredicate& event) {
  const std::vector<double> pr = item_marginal(g);
  double total = 0;
  std::vector<int> cell;
  for (std::size_t x = 0; x < pr.size(); ++x) {
    g.space.decode(x, cell);
    if (event(cell)) total += pr[x];
  }
  return total;
}

std::vector<MaskedRecord> simulate(const FullDataDistribution& g, std::size_t n,
                                   std::uint64_t seed) {
  require(n >= 1, errc::invalid_argument, "need n >= 1 draws");
  const std::size_t ncells = g.space.cell_count();
  const std::size_t nm = g.log_g.size();

  // cumulative masses in (pattern, cell) order
  std::vector<double> cum(nm * ncells);
  double running = 0;
  for (std::size_t i = 0; i < nm; ++i)
    for (std::size_t x = 0; x < ncells; ++x) {
      running += std::exp(g.log_g[i][x]);
      cum[i * ncells + x] = running;
    }
  const double total = running;

  Rng rng(seed);
  std::vector<MaskedRecord> out;
  out.reserve(n);
  std::vector<int> cell;
  for (std::size_t r = 0; r < n; ++r) {
    const double u = rng.uniform() * total;
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::size_t flat = std::min(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
    const std::size_t i = flat / ncells;
    const std::size_t x = flat % ncells;
    const Pattern& m = g.patterns.at(static_cast<int>(i));
    g.space.decode(x, cell);
    MaskedRecord rec{m, cell};
    for (int j = 0; j < g.space.item_count(); ++j)
      if (m.missing(j)) rec.values[static_cast<std::size_t>(j)] = -1;
    out.push_back(std::move(rec));
  }
  return out;
}

ObservedDistribution empirical_distribution(const CategoricalSpace& space,
                                            const std::vector<MaskedRecord>& records) {
  require(!records.empty(), errc::invalid_argument, "no records");
  std::vector<Pattern> seen;
  for (const auto& r : records) {
    require(r.pattern.size() == space.item_count(), errc::invalid_argument,
            "record pattern length mismatch");
    if (std::find(seen.begin(), seen.end(), r.pattern) == seen.end()) seen.push_back(r.pattern);
  }
  PatternSet ps(space.item_count(), seen);

  std::vector<std::vector<double>> mass(static_cast<std::size_t>(ps.size()));
  for (int i = 0; i < ps.size(); ++i)
    mass[static_cast<std::size_t>(i)].assign(space.observed_cell_count(ps.at(i)), 0.0);

  std::vector<int> cell;
  for (const auto& r : records) {
    const int i = ps.index_of(r.pattern);
    cell = r.values;
    for (int j = 0; j < space.item_count(); ++j)
      if (r.pattern.missing(j)) cell[static_cast<std::size_t>(j)] = 0;  // ignored by observed_index
    mass[static_cast<std::size_t>(i)][space.observed_index(cell, r.pattern)] += 1.0;
  }
  const double n = static_cast<double>(records.size());
  for (auto& pm : mass)
    for (double& v : pm) v /= n;
  return ObservedDistribution{space, ps, std::move(mass)};
}

}  // namespace icin
