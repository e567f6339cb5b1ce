#pragma once
// Observable necessary condition for assumptions of the form
// X_k independent of M_j given X_{-k}, M_{-j}: within every stratum of the
// remaining items, the conditional of X_k identified from the only-j-missing
// pattern must lie in the convex hull of the complete-case conditionals
// given each level of X_j. Includes the binary two-item closed form the
// condition generalizes.

#include <string>
#include <vector>

#include "icin/categorical.hpp"

namespace icin {

enum class StratumStatus { feasible, infeasible, undetermined };

struct StratumVerdict {
  std::vector<int> stratum;  // levels of the items outside {j, k}, ascending item order
  StratumStatus status = StratumStatus::undetermined;
  double violation = 0.0;  // total-variation distance to the hull
  bool degenerate = false; // hull collapsed (conditionals of X_k do not vary with X_j)
  std::vector<double> coefficients;  // mixing weights at the projection
  std::string note;
};

struct FeasibilityReport {
  int j = 0;  // item whose missingness indicator is conditioned away
  int k = 0;  // item whose conditional must be a convex combination
  double tol = 0.0;
  std::vector<StratumVerdict> strata;
  bool overall_feasible = true;  // false iff some stratum violates beyond tol
  double worst_violation = 0.0;
};

FeasibilityReport convex_feasibility(const ObservedDistribution& observed, int j, int k,
                                     double tol = 1e-9);

// least-squares projection of target onto the convex hull of the columns,
// exact via active-set enumeration; sizes are tiny (one column per level)
struct SimplexProjection {
  std::vector<double> coefficients;
  std::vector<double> fitted;
  double tv_distance = 0.0;
};
SimplexProjection project_onto_hull(const std::vector<std::vector<double>>& columns,
                                    const std::vector<double>& target);

// Closed form for two binary items with X2 subject to missingness under
// X1 independent of M2 given X2. Fails in a structured way: singular when
// X1 and X2 are independent among complete cases, infeasible when the
// solved masses go negative.
struct HausmanWiseResult {
  bool feasible = false;
  bool degenerate = false;
  std::string message;
  // full-data masses g(x1, x2, m) for m = 00 and m = 01 (X2 missing)
  double g00[2][2] = {{0, 0}, {0, 0}};
  double g01[2][2] = {{0, 0}, {0, 0}};
  double offending_mass = 0.0;  // most negative solved mass when infeasible
};

HausmanWiseResult hausman_wise_closed_form(const ObservedDistribution& observed);

}  // namespace icin
