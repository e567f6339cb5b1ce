#pragma once
// Dropout specialization: monotone patterns are suffixes of 1s, summarized
// by the dropout time T = 1 + p - sum(m). The construction reuses the
// general categorical engine over the pattern chain and checks the
// factorization g(x, T=t) = exp(eta_t(x_<t)) g(x, T=t+1) as a
// post-condition.

#include <vector>

#include "icin/categorical.hpp"

namespace icin {

// suffix-of-ones check
bool is_monotone(const Pattern& m);

// T in {1, ..., p+1}; p+1 means fully observed
int dropout_time(const Pattern& m);

// pattern with items t..p missing (1-based time)
Pattern dropout_pattern(int p, int t);

// chain of patterns for times earliest_time..p+1
PatternSet dropout_chain(int p, int earliest_time = 1);

// monotone patterns, contiguous times, contains the all-observed pattern
void validate_dropout_chain(const PatternSet& ps);

FullDataDistribution build_monotone(const ObservedDistribution& observed);

// log pr(T=t+1 | X=x) - log pr(T=t | X=x) = -eta_t(x_<t); both times must
// be in the chain
double sequential_log_odds(const FullDataDistribution& g, int t, const std::vector<int>& cell);

}  // namespace icin
