#include "icin/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "icin/format.hpp"

namespace icin {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

SensitivityFunction::SensitivityFunction(const CategoricalSpace& space,
                                         std::vector<std::vector<double>> offsets,
                                         std::vector<int> reference)
    : offsets_(std::move(offsets)), reference_(std::move(reference)) {
  const int p = space.item_count();
  require(static_cast<int>(offsets_.size()) == p, errc::invalid_argument,
          "need one offset table per item");
  require(static_cast<int>(reference_.size()) == p, errc::invalid_argument,
          "need one reference level per item");
  for (int j = 0; j < p; ++j) {
    require(reference_[static_cast<std::size_t>(j)] >= 0 &&
                reference_[static_cast<std::size_t>(j)] < space.levels(j),
            errc::invalid_argument, "reference level out of range at item " + std::to_string(j + 1));
    require(static_cast<int>(offsets_[static_cast<std::size_t>(j)].size()) == space.levels(j),
            errc::invalid_argument, "offset table size mismatch at item " + std::to_string(j + 1));
    for (double v : offsets_[static_cast<std::size_t>(j)])
      require(std::isfinite(v), errc::invalid_argument, "sensitivity offsets must be finite");
    require(offsets_[static_cast<std::size_t>(j)]
                    [static_cast<std::size_t>(reference_[static_cast<std::size_t>(j)])] == 0.0,
            errc::invalid_argument,
            "offset at the reference level must be 0 (item " + std::to_string(j + 1) + ")");
  }
}

SensitivityFunction SensitivityFunction::zero(const CategoricalSpace& space) {
  std::vector<std::vector<double>> off(static_cast<std::size_t>(space.item_count()));
  for (int j = 0; j < space.item_count(); ++j)
    off[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(space.levels(j)), 0.0);
  return SensitivityFunction(space, std::move(off),
                             std::vector<int>(static_cast<std::size_t>(space.item_count()), 0));
}

double SensitivityFunction::total(const std::vector<int>& cell, const Pattern& m) const {
  double s = 0;
  for (int j = 0; j < m.size(); ++j)
    if (m.missing(j)) s += item_offset(j, cell[static_cast<std::size_t>(j)]);
  return s;
}

bool SensitivityFunction::is_zero() const {
  for (const auto& tab : offsets_)
    for (double v : tab)
      if (v != 0.0) return false;
  return true;
}

void SensitivityGrid::validate() const {
  require(!points.empty(), errc::invalid_argument, "sensitivity grid is empty");
  std::set<std::string> labels;
  for (const auto& pt : points)
    require(labels.insert(pt.label).second, errc::invalid_argument,
            "duplicate grid label " + pt.label);
}

SensitivityGrid make_grid(const CategoricalSpace& space, const std::vector<GridAxis>& axes,
                          std::vector<int> reference) {
  require(!axes.empty(), errc::invalid_argument, "grid needs at least one axis");
  for (const auto& ax : axes) {
    require(ax.item >= 0 && ax.item < space.item_count(), errc::invalid_argument,
            "grid axis item out of range");
    require(ax.level >= 0 && ax.level < space.levels(ax.item), errc::invalid_argument,
            "grid axis level out of range");
    require(!ax.values.empty(), errc::invalid_argument, "grid axis has no values");
    require(ax.level != reference[static_cast<std::size_t>(ax.item)], errc::invalid_argument,
            "grid axis level equals the reference level; its offset is pinned to 0");
  }

  SensitivityGrid grid;
  for (const auto& ax : axes) grid.axis_names.push_back(ax.name);

  std::vector<std::size_t> pos(axes.size(), 0);
  for (;;) {
    std::vector<std::vector<double>> off(static_cast<std::size_t>(space.item_count()));
    for (int j = 0; j < space.item_count(); ++j)
      off[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(space.levels(j)), 0.0);
    std::string label;
    std::vector<double> axis_values;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const double v = axes[a].values[pos[a]];
      off[static_cast<std::size_t>(axes[a].item)][static_cast<std::size_t>(axes[a].level)] = v;
      if (!label.empty()) label += ",";
      label += axes[a].name + "=" + fmt_compact(v);
      axis_values.push_back(v);
    }
    grid.points.push_back(SensitivityGrid::Point{
        std::move(label), std::move(axis_values),
        SensitivityFunction(space, std::move(off), reference)});

    // odometer, last axis fastest
    std::size_t a = axes.size();
    for (; a > 0; --a) {
      if (++pos[a - 1] < axes[a - 1].values.size()) break;
      pos[a - 1] = 0;
    }
    if (a == 0) break;
  }
  grid.validate();
  return grid;
}

FullDataDistribution build_full_data_xi(const ObservedDistribution& obs,
                                        const SensitivityFunction& xi) {
  obs.validate();
  const auto& sp = obs.space;
  const auto& ps = obs.patterns;
  const std::size_t ncells = sp.cell_count();
  const int nm = ps.size();

  // observed-cell index per pattern, plus the additive xi totals per pattern
  std::vector<std::vector<std::uint32_t>> obs_idx(static_cast<std::size_t>(nm));
  std::vector<std::vector<double>> xi_tot(static_cast<std::size_t>(nm));
  {
    std::vector<int> cell;
    for (int i = 0; i < nm; ++i) {
      const Pattern& m = ps.at(i);
      obs_idx[static_cast<std::size_t>(i)].resize(ncells);
      xi_tot[static_cast<std::size_t>(i)].resize(ncells);
      for (std::size_t x = 0; x < ncells; ++x) {
        sp.decode(x, cell);
        obs_idx[static_cast<std::size_t>(i)][x] =
            static_cast<std::uint32_t>(sp.observed_index(cell, m));
        xi_tot[static_cast<std::size_t>(i)][x] = xi.total(cell, m);
      }
    }
  }

  EtaTable eta;
  eta.values.resize(static_cast<std::size_t>(nm));
  std::vector<std::vector<double>> log_g(static_cast<std::size_t>(nm));

  std::vector<double> partial(ncells);
  std::vector<double> grp_max, grp_sum;

  for (int i = 0; i < nm; ++i) {
    const Pattern& m = ps.at(i);
    std::fill(partial.begin(), partial.end(), 0.0);
    for (int k = 0; k < i; ++k) {
      if (!strictly_precedes(ps.at(k), m)) continue;
      const auto& ek = eta.values[static_cast<std::size_t>(k)];
      const auto& ok = obs_idx[static_cast<std::size_t>(k)];
      for (std::size_t x = 0; x < ncells; ++x) partial[x] += ek[ok[x]];
    }

    const auto& xt = xi_tot[static_cast<std::size_t>(i)];
    const auto& oi = obs_idx[static_cast<std::size_t>(i)];
    const std::size_t nobs = sp.observed_cell_count(m);
    grp_max.assign(nobs, kNegInf);
    grp_sum.assign(nobs, 0.0);
    for (std::size_t x = 0; x < ncells; ++x)
      grp_max[oi[x]] = std::max(grp_max[oi[x]], partial[x] + xt[x]);
    for (std::size_t x = 0; x < ncells; ++x)
      grp_sum[oi[x]] += std::exp(partial[x] + xt[x] - grp_max[oi[x]]);

    auto& ei = eta.values[static_cast<std::size_t>(i)];
    ei.resize(nobs);
    for (std::size_t o = 0; o < nobs; ++o) {
      const double f = obs.mass[static_cast<std::size_t>(i)][o];
      if (!(f > 0.0))
        fail(errc::positivity, "observed mass is not positive at pattern " + m.str() +
                                   ", observed cell #" + std::to_string(o + 1));
      const double lse = grp_max[o] + std::log(grp_sum[o]);
      if (!std::isfinite(lse))
        fail(errc::numeric, "non-finite log-sum in perturbed recursion at pattern " + m.str());
      ei[o] = std::log(f) - lse;
      if (!std::isfinite(ei[o]))
        fail(errc::numeric, "non-finite eta in perturbed recursion at pattern " + m.str());
    }

    auto& gi = log_g[static_cast<std::size_t>(i)];
    gi.resize(ncells);
    for (std::size_t x = 0; x < ncells; ++x) gi[x] = partial[x] + xt[x] + ei[oi[x]];
  }

  return FullDataDistribution{obs.space, obs.patterns, std::move(eta), std::move(log_g)};
}

double conditional_log_odds_ratio(const FullDataDistribution& g_xi, int j,
                                  const Pattern& m_base, const std::vector<int>& cell, int z) {
  require(j >= 0 && j < g_xi.space.item_count(), errc::invalid_argument,
          "item index out of range");
  require(z >= 0 && z < g_xi.space.levels(j), errc::invalid_argument, "level z out of range");
  const Pattern m1 = m_base.with_bit(j, true);
  const Pattern m0 = m_base.with_bit(j, false);
  const int i1 = g_xi.patterns.index_of(m1);
  const int i0 = g_xi.patterns.index_of(m0);
  if (i1 < 0 || i0 < 0)
    fail(errc::undefined_conditional, "conditional odds ratio needs both sibling patterns " +
                                          m1.str() + " and " + m0.str() + " realizable");
  std::vector<int> cell_z = cell;
  cell_z[static_cast<std::size_t>(j)] = z;
  const std::size_t xa = g_xi.space.index_of(cell);
  const std::size_t xb = g_xi.space.index_of(cell_z);
  return g_xi.log_mass(i1, xa) - g_xi.log_mass(i0, xa) - g_xi.log_mass(i1, xb) +
         g_xi.log_mass(i0, xb);
}

double conditional_log_odds_ratio(const FullDataDistribution& g_xi, int j,
                                  const std::vector<int>& cell, int z) {
  return conditional_log_odds_ratio(g_xi, j, Pattern::zeros(g_xi.space.item_count()), cell, z);
}

GridRunResult run_grid(const ObservedDistribution& observed, const SensitivityGrid& grid,
                       const std::vector<NamedEvent>& functionals, Exec exec) {
  grid.validate();
  observed.validate();

  GridRunResult res;
  res.axis_names = grid.axis_names;
  for (const auto& f : functionals) res.functional_names.push_back(f.name);
  res.rows.resize(grid.points.size());

  parallel_for(grid.points.size(), exec, [&](std::size_t i) {
    const auto& pt = grid.points[i];
    auto& row = res.rows[i];
    row.label = pt.label;
    row.axis_values = pt.axis_values;
    try {
      const FullDataDistribution g = build_full_data_xi(observed, pt.xi);
      row.values.reserve(functionals.size());
      for (const auto& f : functionals) row.values.push_back(event_probability(g, f.pred));
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });
  return res;
}

}  // namespace icin
