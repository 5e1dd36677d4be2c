#include "cpt/analysis.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "cpt/errors.hpp"

namespace cpt {

double coupon_packet_expected_uncollected(int n, int m, int k) {
    if (n < 0 || m < 0 || m > n || k < 0)
        throw InvalidArgument("require 0 <= m <= n and k >= 0");
    if (n == 0)
        return 0.0;
    // Exact rational base before exponentiation; no float drift in m/n.
    double base = static_cast<double>(n - m) / static_cast<double>(n);
    return n * std::pow(base, k);
}

double expected_unidentified_after_k(int n, int m, int k) {
    if (k < 0)
        throw InvalidArgument("rounds must be nonnegative");
    if (m < 2 || m > n - 1)
        throw DegenerateInputs("require 2 <= m <= n-1; with m in {0,1,n} the "
                               "per-round survival probabilities degenerate");
    double ps, pw;
    if (n % 2 == 0) {
        ps = static_cast<double>(n - m) / (n - 1);
        pw = static_cast<double>(n - m - 1) / (n - 1);
    } else {
        // Odd n: each individual has n alternatives per round (n-1 partners
        // plus sitting out), and sitting out never identifies.
        ps = static_cast<double>(n - m + 1) / n;
        pw = static_cast<double>(n - m) / n;
    }
    return m * std::pow(ps, k) + (n - m) * std::pow(pw, k);
}

SurvivalBound survival_probability_lower_bound(double eps, int k) {
    if (!(eps > 0.0 && eps < 1.0))
        throw InvalidArgument("eps must lie in (0,1), got " + std::to_string(eps));
    if (k < 0)
        throw InvalidArgument("rounds must be nonnegative");
    SurvivalBound b;
    b.exact = std::pow(1.0 - eps, k);
    b.lower_bound = std::pow((1.0 - eps) / std::exp(1.0), eps * k);
    assert(b.exact >= b.lower_bound * (1.0 - 1e-12));
    return b;
}

double adaptive_lower_bound_probability(int n, double eps, int rounds) {
    if (n <= 0 || rounds < 0)
        throw InvalidArgument("require n > 0 and rounds >= 0");
    return rounds * (eps * n - 1.0) / (n / 2.0);
}

} // namespace cpt
