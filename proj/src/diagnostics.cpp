#include "icin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace icin {

namespace {

// Gaussian elimination with partial pivoting; returns false when singular.
bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& out) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-13) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * out[c];
    out[r] = s / a[r][r];
  }
  return true;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace

SimplexProjection project_onto_hull(const std::vector<std::vector<double>>& columns,
                                    const std::vector<double>& target) {
  const std::size_t ncol = columns.size();
  require(ncol >= 1, errc::invalid_argument, "need at least one hull column");
  require(ncol <= 16, errc::unsupported_size,
          "hull projection enumerates subsets; capped at 16 columns");
  const std::size_t dim = target.size();
  for (const auto& c : columns)
    require(c.size() == dim, errc::invalid_argument, "column dimension mismatch");

  // Gram matrix and cross products
  std::vector<std::vector<double>> gram(ncol, std::vector<double>(ncol, 0.0));
  std::vector<double> cross(ncol, 0.0);
  for (std::size_t a = 0; a < ncol; ++a) {
    for (std::size_t b = 0; b < ncol; ++b)
      for (std::size_t i = 0; i < dim; ++i) gram[a][b] += columns[a][i] * columns[b][i];
    for (std::size_t i = 0; i < dim; ++i) cross[a] += columns[a][i] * target[i];
  }

  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> best_coef;

  // the minimizer over the simplex is the equality-constrained minimizer on
  // the face spanned by its support, so enumerating supports is exact
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << ncol); ++mask) {
    std::vector<std::size_t> sel;
    for (std::size_t c = 0; c < ncol; ++c)
      if (mask & (std::uint32_t{1} << c)) sel.push_back(c);
    const std::size_t k = sel.size();

    // KKT system for min ||U c - v||^2 s.t. sum c = 1
    std::vector<std::vector<double>> a(k + 1, std::vector<double>(k + 1, 0.0));
    std::vector<double> b(k + 1, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) a[r][c] = 2.0 * gram[sel[r]][sel[c]];
      a[r][k] = 1.0;
      a[k][r] = 1.0;
      b[r] = 2.0 * cross[sel[r]];
    }
    b[k] = 1.0;

    std::vector<double> sol;
    if (!solve_linear(std::move(a), std::move(b), sol)) continue;

    bool ok = true;
    for (std::size_t r = 0; r < k; ++r)
      if (sol[r] < -1e-12) {
        ok = false;
        break;
      }
    if (!ok) continue;

    std::vector<double> fitted(dim, 0.0);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t i = 0; i < dim; ++i) fitted[i] += sol[r] * columns[sel[r]][i];
    double res = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = fitted[i] - target[i];
      res += d * d;
    }
    if (res < best_res) {
      best_res = res;
      best_coef.assign(ncol, 0.0);
      for (std::size_t r = 0; r < k; ++r) best_coef[sel[r]] = std::max(0.0, sol[r]);
    }
  }
  require(!best_coef.empty(), errc::numeric, "hull projection failed on every support");

  SimplexProjection out;
  out.coefficients = std::move(best_coef);
  out.fitted.assign(dim, 0.0);
  for (std::size_t c = 0; c < ncol; ++c)
    for (std::size_t i = 0; i < dim; ++i) out.fitted[i] += out.coefficients[c] * columns[c][i];
  out.tv_distance = tv_distance(out.fitted, target);
  return out;
}

FeasibilityReport convex_feasibility(const ObservedDistribution& observed, int j, int k,
                                     double tol) {
  observed.validate();
  const auto& sp = observed.space;
  const int p = sp.item_count();
  require(j >= 0 && j < p && k >= 0 && k < p, errc::invalid_argument,
          "item index out of range");
  require(j != k, errc::invalid_argument, "items j and k must differ");

  const Pattern all_obs = Pattern::zeros(p);
  const Pattern only_j = all_obs.with_bit(j, true);
  const int i_full = observed.patterns.index_of(all_obs);
  const int i_only_j = observed.patterns.index_of(only_j);
  require(i_full >= 0, errc::invalid_argument,
          "the all-observed pattern must be realizable");
  require(i_only_j >= 0, errc::invalid_argument,
          "the pattern with only item " + std::to_string(j + 1) + " missing must be realizable");

  std::vector<int> others;  // items outside {j, k}
  for (int t = 0; t < p; ++t)
    if (t != j && t != k) others.push_back(t);
  const int Kj = sp.levels(j);
  const int Kk = sp.levels(k);

  FeasibilityReport report;
  report.j = j;
  report.k = k;
  report.tol = tol;

  std::vector<int> stratum(others.size(), 0);
  std::vector<int> cell(static_cast<std::size_t>(p), 0);
  for (;;) {
    StratumVerdict verdict;
    verdict.stratum = stratum;

    // v: conditional of X_k in the only-j-missing pattern, this stratum
    std::vector<double> v(static_cast<std::size_t>(Kk), 0.0);
    for (std::size_t t = 0; t < others.size(); ++t)
      cell[static_cast<std::size_t>(others[t])] = stratum[t];
    cell[static_cast<std::size_t>(j)] = 0;  // missing; ignored by observed_index
    double v_total = 0;
    for (int xk = 0; xk < Kk; ++xk) {
      cell[static_cast<std::size_t>(k)] = xk;
      const double mass =
          observed.mass[static_cast<std::size_t>(i_only_j)][sp.observed_index(cell, only_j)];
      v[static_cast<std::size_t>(xk)] = mass;
      v_total += mass;
    }

    // hull columns: conditional of X_k among complete cases, per level of X_j
    std::vector<std::vector<double>> u(static_cast<std::size_t>(Kj),
                                       std::vector<double>(static_cast<std::size_t>(Kk), 0.0));
    std::vector<double> u_total(static_cast<std::size_t>(Kj), 0.0);
    for (int xj = 0; xj < Kj; ++xj) {
      cell[static_cast<std::size_t>(j)] = xj;
      for (int xk = 0; xk < Kk; ++xk) {
        cell[static_cast<std::size_t>(k)] = xk;
        const double mass =
            observed.mass[static_cast<std::size_t>(i_full)][sp.observed_index(cell, all_obs)];
        u[static_cast<std::size_t>(xj)][static_cast<std::size_t>(xk)] = mass;
        u_total[static_cast<std::size_t>(xj)] += mass;
      }
    }

    bool identified = v_total > 0;
    for (double t : u_total) identified = identified && t > 0;
    if (!identified) {
      verdict.status = StratumStatus::undetermined;
      verdict.note = "zero-mass stratum; required conditionals are not identified";
    } else {
      for (double& x : v) x /= v_total;
      for (int xj = 0; xj < Kj; ++xj)
        for (double& x : u[static_cast<std::size_t>(xj)])
          x /= u_total[static_cast<std::size_t>(xj)];

      double max_spread = 0;
      for (int a = 0; a < Kj; ++a)
        for (int b = a + 1; b < Kj; ++b)
          max_spread = std::max(max_spread, tv_distance(u[static_cast<std::size_t>(a)],
                                                        u[static_cast<std::size_t>(b)]));
      verdict.degenerate = max_spread < 1e-12;

      SimplexProjection proj = project_onto_hull(u, v);
      verdict.violation = proj.tv_distance;
      verdict.coefficients = std::move(proj.coefficients);
      verdict.status =
          (verdict.violation <= tol) ? StratumStatus::feasible : StratumStatus::infeasible;
      if (verdict.degenerate)
        verdict.note = "hull collapsed: X_k does not vary with X_j among complete cases";
    }

    report.worst_violation = std::max(report.worst_violation, verdict.violation);
    if (verdict.status == StratumStatus::infeasible) report.overall_feasible = false;
    report.strata.push_back(std::move(verdict));

    // next stratum
    std::size_t t = 0;
    for (; t < others.size(); ++t) {
      if (++stratum[t] < sp.levels(others[t])) break;
      stratum[t] = 0;
    }
    if (t == others.size()) break;
  }
  return report;
}

HausmanWiseResult hausman_wise_closed_form(const ObservedDistribution& observed) {
  observed.validate();
  const auto& sp = observed.space;
  require(sp.item_count() == 2 && sp.levels(0) == 2 && sp.levels(1) == 2,
          errc::invalid_argument, "closed form requires two binary items");
  const Pattern m00 = Pattern::from_string("00");
  const Pattern m01 = Pattern::from_string("01");
  require(observed.patterns.size() == 2 && observed.patterns.contains(m00) &&
              observed.patterns.contains(m01),
          errc::invalid_argument,
          "closed form requires exactly the patterns 00 and 01 (X2 subject to missingness)");
  const int i00 = observed.patterns.index_of(m00);
  const int i01 = observed.patterns.index_of(m01);

  // a[x1][x2] complete-case masses, b[x1] masses with X2 missing
  double a[2][2], b[2], col[2];
  std::vector<int> cell(2);
  for (int x1 = 0; x1 < 2; ++x1) {
    cell[0] = x1;
    for (int x2 = 0; x2 < 2; ++x2) {
      cell[1] = x2;
      a[x1][x2] = observed.mass[static_cast<std::size_t>(i00)][sp.observed_index(cell, m00)];
    }
    cell[1] = 0;
    b[x1] = observed.mass[static_cast<std::size_t>(i01)][sp.observed_index(cell, m01)];
  }

  HausmanWiseResult res;
  for (int x2 = 0; x2 < 2; ++x2) {
    col[x2] = a[0][x2] + a[1][x2];
    if (!(col[x2] > 0)) {
      res.degenerate = true;
      res.message = "complete-case column X2=" + std::to_string(x2 + 1) + " has zero mass";
      return res;
    }
  }

  // P[x1][x2] = pr(X1 = x1 | X2 = x2, complete case); solve P d = b
  double P[2][2];
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) P[x1][x2] = a[x1][x2] / col[x2];
  const double det = P[0][0] * P[1][1] - P[0][1] * P[1][0];
  if (std::fabs(det) < 1e-12) {
    res.degenerate = true;
    res.message =
        "X1 and X2 are independent among complete cases; the closed form is undefined";
    return res;
  }
  const double d0 = (P[1][1] * b[0] - P[0][1] * b[1]) / det;
  const double d1 = (-P[1][0] * b[0] + P[0][0] * b[1]) / det;

  double worst = 0.0;
  double c[2][2];
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) {
      c[x1][x2] = P[x1][x2] * (x2 == 0 ? d0 : d1);
      worst = std::min(worst, c[x1][x2]);
    }
  worst = std::min({worst, d0, d1});

  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) {
      res.g00[x1][x2] = a[x1][x2];
      res.g01[x1][x2] = c[x1][x2];
    }
  if (worst < -1e-12) {
    res.feasible = false;
    res.offending_mass = worst;
    res.message = "solved full-data masses go negative; the convex-combination "
                  "condition fails";
  } else {
    res.feasible = true;
  }
  return res;
}

}  // namespace icin
