#pragma once

namespace cpt {

/// Parameter bundle shared by the closed-form planning functions:
/// n individuals, m slackers, k rounds, confidence exponent alpha.
struct AnalysisParams {
    int n = 0;
    int m = 0;
    int k = 0;
    double alpha = 1.0;

    double eps() const { return n == 0 ? 0.0 : static_cast<double>(m) / n; }
    double delta() const { return 1.0 - eps(); }
};

/// Coupon packet collector: expected number of cards still missing after
/// k packets of m duplicate-free cards each, n * (1 - m/n)^k.
double coupon_packet_expected_uncollected(int n, int m, int k);

/// Expected number of individuals never paired with a slacker after k
/// independent random matching rounds, with the duplicate-avoidance
/// correction: m * p_s^k + (n-m) * p_w^k where for even n
/// p_s = (n-m)/(n-1), p_w = (n-m-1)/(n-1), and for odd n the denominators
/// are n with survival counts shifted by the sit-out alternative.
double expected_unidentified_after_k(int n, int m, int k);

/// (1-eps)^k together with its proven lower bound ((1-eps)/e)^(eps*k).
struct SurvivalBound {
    double exact;
    double lower_bound;
};
SurvivalBound survival_probability_lower_bound(double eps, int k);

/// Union bound on the probability that a uniformly chosen slacker has been
/// identified within the given number of rounds: rounds * (eps*n - 1)/(n/2).
/// Used to compare simulated adversarial instances against the adaptive
/// round lower bound.
double adaptive_lower_bound_probability(int n, double eps, int rounds);

} // namespace cpt
