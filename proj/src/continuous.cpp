#include "icin/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "icin/logsumexp.hpp"

namespace icin {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kCenterBlock = 2048;  // bounds scratch memory for grid evaluation
}  // namespace

Pattern WeightedRecord::pattern() const {
  std::vector<std::uint8_t> bits{static_cast<std::uint8_t>(x1.has_value() ? 0 : 1),
                                 static_cast<std::uint8_t>(x2.has_value() ? 0 : 1)};
  return Pattern(std::move(bits));
}

void WeightedSample::validate() const {
  require(!records.empty(), errc::invalid_argument, "weighted sample is empty");
  std::size_t complete = 0;
  for (const auto& r : records) {
    require(r.weight > 0 && std::isfinite(r.weight), errc::invalid_argument,
            "record weights must be positive and finite");
    if (r.x1) require(std::isfinite(*r.x1), errc::invalid_argument, "x1 must be finite");
    if (r.x2) require(std::isfinite(*r.x2), errc::invalid_argument, "x2 must be finite");
    if (r.x1 && r.x2) ++complete;
  }
  require(complete >= 2, errc::invalid_argument,
          "need at least 2 records with both coordinates observed");
}

int bivariate_pattern_index(const Pattern& m) {
  require(m.size() == 2, errc::invalid_argument, "bivariate pattern must have length 2");
  return (m.missing(0) ? 2 : 0) + (m.missing(1) ? 1 : 0);
}

Pattern bivariate_pattern(int idx) {
  require(idx >= 0 && idx < 4, errc::invalid_argument, "pattern index out of range");
  return Pattern({static_cast<std::uint8_t>((idx >> 1) & 1),
                  static_cast<std::uint8_t>(idx & 1)});
}

std::array<double, 4> pattern_proportions(const WeightedSample& sample) {
  sample.validate();
  std::array<double, 4> mass{0, 0, 0, 0};
  double total = 0;
  for (const auto& r : sample.records) {
    mass[static_cast<std::size_t>(bivariate_pattern_index(r.pattern()))] += r.weight;
    total += r.weight;
  }
  for (double& v : mass) v /= total;
  return mass;
}

void GridSpec::validate() const {
  for (int d = 0; d < 2; ++d) {
    require(lo[static_cast<std::size_t>(d)] < hi[static_cast<std::size_t>(d)],
            errc::invalid_argument, "grid lo must be below hi");
    require(points[static_cast<std::size_t>(d)] >= 32, errc::invalid_argument,
            "grid needs at least 32 points per axis");
  }
}

std::vector<double> GridSpec::axis(int d) const {
  const int n = points[static_cast<std::size_t>(d)];
  const double a = lo[static_cast<std::size_t>(d)], b = hi[static_cast<std::size_t>(d)];
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / (n - 1);
  return xs;
}

double GridSpec::step(int d) const {
  return (hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)]) /
         (points[static_cast<std::size_t>(d)] - 1);
}

namespace {

// 1D kernel-density log values over a set of points
std::vector<double> log_eval_axis(const KdeDensity& f, const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f.log_eval1(xs[i]);
  return out;
}

// 2D kernel density over the tensor grid. Linear accumulation with
// separated kernels (blocked over centers), log_eval fallback where the
// linear value underflows.
std::vector<double> log_grid_2d(const KdeDensity& f, const std::vector<double>& x1g,
                                const std::vector<double>& x2g, Exec exec) {
  const std::size_t n1 = x1g.size(), n2 = x2g.size(), n = f.size();
  std::vector<double> grid(n1 * n2, 0.0);
  const double h1 = f.bandwidth(0), h2 = f.bandwidth(1);
  const double inv_norm = 1.0 / (2.0 * 3.14159265358979323846 * h1 * h2);

  std::vector<double> kx(n1 * kCenterBlock), ky(n2 * kCenterBlock);
  for (std::size_t c0 = 0; c0 < n; c0 += kCenterBlock) {
    const std::size_t nb = std::min(kCenterBlock, n - c0);
    parallel_for(n1, exec, [&](std::size_t i) {
      for (std::size_t c = 0; c < nb; ++c) {
        const double z = (x1g[i] - f.center(c0 + c, 0)) / h1;
        kx[i * kCenterBlock + c] = std::exp(-0.5 * z * z);
      }
    });
    parallel_for(n2, exec, [&](std::size_t j) {
      for (std::size_t c = 0; c < nb; ++c) {
        const double z = (x2g[j] - f.center(c0 + c, 1)) / h2;
        ky[j * kCenterBlock + c] = std::exp(-0.5 * z * z);
      }
    });
    parallel_for(n1, exec, [&](std::size_t i) {
      for (std::size_t j = 0; j < n2; ++j) {
        double acc = 0;
        const double* kxi = &kx[i * kCenterBlock];
        const double* kyj = &ky[j * kCenterBlock];
        for (std::size_t c = 0; c < nb; ++c)
          acc += f.weight(c0 + c) * kxi[c] * kyj[c];
        grid[i * n2 + j] += acc * inv_norm;
      }
    });
  }

  std::vector<double> lg(n1 * n2);
  parallel_for(n1, exec, [&](std::size_t i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double v = grid[i * n2 + j];
      lg[i * n2 + j] = (v > 0) ? std::log(v) : f.log_eval2(x1g[i], x2g[j]);
    }
  });
  return lg;
}

}  // namespace

BivariateIcin::BivariateIcin(KdeDensity f00, KdeDensity f01, KdeDensity f10,
                             std::array<double, 4> pi, std::array<std::int64_t, 4> counts,
                             GridSpec grid, Exec exec)
    : f00_(std::move(f00)),
      f01_(std::move(f01)),
      f10_(std::move(f10)),
      f00_x1_(f00_.marginal(0)),
      f00_x2_(f00_.marginal(1)),
      pi_(pi),
      counts_(counts),
      grid_(grid) {
  require(f00_.dim() == 2 && f01_.dim() == 1 && f10_.dim() == 1, errc::invalid_argument,
          "f00 must be 2d; f01 and f10 must be 1d");
  double pt = 0;
  for (double v : pi_) {
    require(v >= 0, errc::invalid_argument, "pattern masses must be nonnegative");
    pt += v;
  }
  require(std::fabs(pt - 1.0) <= 1e-9, errc::invalid_argument, "pattern masses must sum to 1");
  grid_.validate();
  x1g_ = grid_.axis(0);
  x2g_ = grid_.axis(1);

  log_f00_grid_ = log_grid_2d(f00_, x1g_, x2g_, exec);
  log_f00x1_g_ = log_eval_axis(f00_x1_, x1g_);
  log_f00x2_g_ = log_eval_axis(f00_x2_, x2g_);
  log_f01_g_ = log_eval_axis(f01_, x1g_);
  log_f10_g_ = log_eval_axis(f10_, x2g_);

  // Eq-(4) normalization by trapezoid quadrature over the grid
  const std::size_t n1 = x1g_.size(), n2 = x2g_.size();
  double max_l = kNegInf;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const double l = log_f00_grid_[i * n2 + j] + log_f01_g_[i] + log_f10_g_[j] -
                       log_f00x1_g_[i] - log_f00x2_g_[j];
      if (std::isnan(l))
        fail(errc::numeric,
             "non-finite integrand for the doubly-missing density; use a tighter grid");
      max_l = std::max(max_l, l);
    }
  require(std::isfinite(max_l), errc::numeric,
          "doubly-missing density vanished on the whole grid; use a tighter grid");
  double s = 0;
  for (std::size_t i = 0; i < n1; ++i) {
    const double wi = quad_weight(0, static_cast<int>(i));
    for (std::size_t j = 0; j < n2; ++j) {
      const double l = log_f00_grid_[i * n2 + j] + log_f01_g_[i] + log_f10_g_[j] -
                       log_f00x1_g_[i] - log_f00x2_g_[j];
      s += wi * quad_weight(1, static_cast<int>(j)) * std::exp(l - max_l);
    }
  }
  log_g11_norm_ = max_l + std::log(s);
  require(std::isfinite(log_g11_norm_), errc::numeric,
          "normalization constant is not finite; use a tighter grid");
}

double BivariateIcin::quad_weight(int d, int i) const {
  const int n = grid_.points[static_cast<std::size_t>(d)];
  const double dx = grid_.step(d);
  return (i == 0 || i == n - 1) ? 0.5 * dx : dx;
}

double BivariateIcin::log_density(const Pattern& m, double x1, double x2) const {
  const int idx = bivariate_pattern_index(m);
  const double l00 = f00_.log_eval2(x1, x2);
  switch (idx) {
    case 0:
      return l00;
    case 1:
      return l00 + f01_.log_eval1(x1) - f00_x1_.log_eval1(x1);
    case 2:
      return l00 + f10_.log_eval1(x2) - f00_x2_.log_eval1(x2);
    default:
      return l00 + f01_.log_eval1(x1) + f10_.log_eval1(x2) - f00_x1_.log_eval1(x1) -
             f00_x2_.log_eval1(x2) - log_g11_norm_;
  }
}

double BivariateIcin::density(const Pattern& m, double x1, double x2) const {
  return std::exp(log_density(m, x1, x2));
}

double BivariateIcin::log_density_at_node(int pattern_idx, int i, int j) const {
  const std::size_t n2 = x2g_.size();
  const double l00 = log_f00_grid_[static_cast<std::size_t>(i) * n2 + static_cast<std::size_t>(j)];
  switch (pattern_idx) {
    case 0:
      return l00;
    case 1:
      return l00 + log_f01_g_[static_cast<std::size_t>(i)] - log_f00x1_g_[static_cast<std::size_t>(i)];
    case 2:
      return l00 + log_f10_g_[static_cast<std::size_t>(j)] - log_f00x2_g_[static_cast<std::size_t>(j)];
    default:
      return l00 + log_f01_g_[static_cast<std::size_t>(i)] + log_f10_g_[static_cast<std::size_t>(j)] -
             log_f00x1_g_[static_cast<std::size_t>(i)] - log_f00x2_g_[static_cast<std::size_t>(j)] -
             log_g11_norm_;
  }
}

BivariateIcin fit_bivariate(const WeightedSample& sample, const std::optional<GridSpec>& grid,
                            Exec exec) {
  sample.validate();
  const std::array<double, 4> pi = pattern_proportions(sample);

  std::array<std::int64_t, 4> counts{0, 0, 0, 0};
  std::vector<double> c00_x1, c00_x2, w00, c01, w01, c10, w10;
  for (const auto& r : sample.records) {
    const int idx = bivariate_pattern_index(r.pattern());
    ++counts[static_cast<std::size_t>(idx)];
    if (idx == 0) {
      c00_x1.push_back(*r.x1);
      c00_x2.push_back(*r.x2);
      w00.push_back(r.weight);
    } else if (idx == 1) {
      c01.push_back(*r.x1);
      w01.push_back(r.weight);
    } else if (idx == 2) {
      c10.push_back(*r.x2);
      w10.push_back(r.weight);
    }
  }

  KdeDensity f00 = KdeDensity::fit_2d(c00_x1, c00_x2, w00);

  const bool need_f01 = pi[1] > 0 || pi[3] > 0;
  const bool need_f10 = pi[2] > 0 || pi[3] > 0;
  std::optional<KdeDensity> f01, f10;
  if (c01.size() >= 2) {
    f01 = KdeDensity::fit_1d(c01, w01);
  } else if (need_f01) {
    fail(errc::invalid_argument,
         "insufficient data to fit the x1 density for pattern 01 (need >= 2 records)");
  } else {
    f01 = f00.marginal(0);  // unused slice; keeps the model total
  }
  if (c10.size() >= 2) {
    f10 = KdeDensity::fit_1d(c10, w10);
  } else if (need_f10) {
    fail(errc::invalid_argument,
         "insufficient data to fit the x2 density for pattern 10 (need >= 2 records)");
  } else {
    f10 = f00.marginal(1);
  }

  GridSpec gs;
  if (grid) {
    gs = *grid;
  } else {
    const double hmax = std::max({f00.bandwidth(0), f00.bandwidth(1), f01->bandwidth(0),
                                  f10->bandwidth(0)});
    std::array<double, 2> lo{}, hi{};
    lo[0] = std::min(f00.min_center(0), f01->min_center(0)) - 4 * hmax;
    hi[0] = std::max(f00.max_center(0), f01->max_center(0)) + 4 * hmax;
    lo[1] = std::min(f00.min_center(1), f10->min_center(0)) - 4 * hmax;
    hi[1] = std::max(f00.max_center(1), f10->max_center(0)) + 4 * hmax;
    gs = GridSpec{lo, hi, {256, 256}};
  }

  return BivariateIcin(std::move(f00), std::move(*f01), std::move(*f10), pi, counts, gs, exec);
}

PatternFunctionals pattern_functionals(const BivariateIcin& model, const Pattern& m) {
  const int idx = bivariate_pattern_index(m);
  const auto& x1g = model.axis(0);
  const auto& x2g = model.axis(1);
  const std::size_t n1 = x1g.size(), n2 = x2g.size();

  double mass = 0, m1 = 0, m2 = 0, m11 = 0, m22 = 0, m12 = 0, pr = 0;
  for (std::size_t i = 0; i < n1; ++i) {
    const double wi = model.quad_weight(0, static_cast<int>(i));
    const double a = x1g[i];
    for (std::size_t j = 0; j < n2; ++j) {
      const double w = wi * model.quad_weight(1, static_cast<int>(j));
      const double b = x2g[j];
      const double v = w * std::exp(model.log_density_at_node(idx, static_cast<int>(i),
                                                              static_cast<int>(j)));
      mass += v;
      m1 += v * a;
      m2 += v * b;
      m11 += v * a * a;
      m22 += v * b * b;
      m12 += v * a * b;
      if (a > b)
        pr += v;
      else if (a == b)
        pr += 0.5 * v;  // half weight on the diagonal keeps symmetric densities at 1/2
    }
  }
  require(mass > 0, errc::numeric, "pattern density has no quadrature mass");

  PatternFunctionals out;
  out.grid_mass = mass;
  out.pr_x1_gt_x2 = pr / mass;
  out.mean_x1 = m1 / mass;
  out.mean_x2 = m2 / mass;
  const double v1 = m11 / mass - out.mean_x1 * out.mean_x1;
  const double v2 = m22 / mass - out.mean_x2 * out.mean_x2;
  const double cov = m12 / mass - out.mean_x1 * out.mean_x2;
  require(v1 > 0 && v2 > 0, errc::numeric, "degenerate variance under quadrature");
  out.corr = cov / std::sqrt(v1 * v2);
  return out;
}

std::vector<double> missingness_curve(const BivariateIcin& model, int axis,
                                      std::span<const double> points, Exec exec) {
  require(axis == 1 || axis == 2, errc::invalid_argument, "axis must be 1 or 2");
  const int d = axis - 1;        // axis under study
  const int o = 1 - d;           // axis integrated out
  const auto& og = model.axis(o);
  const double lo = model.grid().lo[static_cast<std::size_t>(d)];
  const double hi = model.grid().hi[static_cast<std::size_t>(d)];

  for (double v : points)
    require(v >= lo && v <= hi, errc::invalid_argument,
            "curve point " + std::to_string(v) + " lies outside the quadrature grid");

  // density of the studied item and its own-value offsets, constant per point
  const KdeDensity& f_own = (d == 0) ? model.f01() : model.f10();
  const KdeDensity& f_other = (d == 0) ? model.f10() : model.f01();
  const KdeDensity& m_own = model.f00_marginal(d);
  const KdeDensity& m_other = model.f00_marginal(o);

  std::vector<double> curve(points.size());
  parallel_for(points.size(), exec, [&](std::size_t pi_idx) {
    const double v = points[pi_idx];
    const double lf_own = f_own.log_eval1(v);
    const double lm_own = m_own.log_eval1(v);

    // marginals over the other axis of each conditional density, at X_d = v
    std::array<StreamingLogSumExp, 4> marg;
    for (std::size_t k = 0; k < og.size(); ++k) {
      const double lw = std::log(model.quad_weight(o, static_cast<int>(k)));
      const double x1 = (d == 0) ? v : og[k];
      const double x2 = (d == 0) ? og[k] : v;
      const double l00 = model.f00().log_eval2(x1, x2);
      const double lf_oth = f_other.log_eval1(og[k]);
      const double lm_oth = m_other.log_eval1(og[k]);
      const double own_part = lf_own - lm_own;
      const double oth_part = lf_oth - lm_oth;
      marg[0].add(lw + l00);
      marg[1].add(lw + l00 + ((d == 0) ? own_part : oth_part));
      marg[2].add(lw + l00 + ((d == 0) ? oth_part : own_part));
      marg[3].add(lw + l00 + own_part + oth_part - model.log_g11_norm());
    }

    StreamingLogSumExp num, den;
    const auto& pi = model.pattern_mass();
    for (int k = 0; k < 4; ++k) {
      if (pi[static_cast<std::size_t>(k)] <= 0) continue;
      const double term = std::log(pi[static_cast<std::size_t>(k)]) +
                          marg[static_cast<std::size_t>(k)].value();
      den.add(term);
      const Pattern mk = bivariate_pattern(k);
      if (mk.missing(d)) num.add(term);
    }
    curve[pi_idx] = num.empty() ? 0.0 : std::exp(num.value() - den.value());
  });
  return curve;
}

}  // namespace icin
