#include "cpt/nonadaptive.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cpt/errors.hpp"
#include "cpt/scheduling.hpp"

namespace cpt {

NonadaptiveSchedule deterministic_cover_schedule(int n, double eps) {
    if (n < 2)
        throw InvalidArgument("need at least 2 individuals");
    if (eps * n < 2.0 - 1e-9 || eps >= 1.0)
        throw EpsilonOutOfRange("require 2/n <= eps < 1, got eps = " + std::to_string(eps));

    const int rounds_needed =
        static_cast<int>(std::ceil((1.0 - eps) * n - 1e-9)) + 1;

    std::vector<int> everyone(static_cast<std::size_t>(n));
    std::iota(everyone.begin(), everyone.end(), 0);
    std::vector<Round> circle = round_robin_schedule(everyone);
    // eps*n >= 2 guarantees the circle method has enough distinct rounds.
    if (rounds_needed > static_cast<int>(circle.size()))
        throw EpsilonOutOfRange("cover needs more rounds than the circle method provides");
    circle.resize(static_cast<std::size_t>(rounds_needed));

    NonadaptiveSchedule schedule;
    schedule.rounds = std::move(circle);
    schedule.kind = ScheduleKind::DeterministicCover;
    schedule.n = n;
    schedule.eps = eps;
    schedule.k = rounds_needed;
    return schedule;
}

NonadaptiveSchedule random_matching_schedule(int n, int k, RngSeed seed) {
    if (n < 2)
        throw InvalidArgument("need at least 2 individuals");
    if (k < 1)
        throw InvalidArgument("need at least 1 round");

    std::mt19937_64 rng = make_rng(derive_seed(seed, {0x3u}));
    std::vector<int> everyone(static_cast<std::size_t>(n));
    std::iota(everyone.begin(), everyone.end(), 0);

    NonadaptiveSchedule schedule;
    schedule.rounds.reserve(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r)
        schedule.rounds.push_back(random_perfect_matching(everyone, rng));
    schedule.kind = ScheduleKind::RandomMatching;
    schedule.n = n;
    schedule.eps = 0.0;
    schedule.k = k;
    schedule.seed = seed;
    return schedule;
}

int rounds_for_confidence(int n, int m, double alpha) {
    if (m < 2)
        throw DegenerateInputs("need at least 2 slackers, got " + std::to_string(m));
    if (m > n)
        throw DegenerateInputs("slacker count exceeds population");
    if (alpha <= 0.0)
        throw InvalidArgument("alpha must be positive");
    if (m == n)
        return 1; // every pair is a slacker pair

    double slacker_term, worker_term;
    if (n % 2 == 0) {
        slacker_term = std::log(m) / std::log(static_cast<double>(n - 1) / (n - m));
        worker_term = (n - m - 1 > 0)
                          ? std::log(n - m) / std::log(static_cast<double>(n - 1) / (n - m - 1))
                          : 0.0; // m = n-1: the lone worker falls out by elimination
        return static_cast<int>(
            std::ceil((1.0 + alpha) * std::max(slacker_term, worker_term) - 1e-9));
    }
    slacker_term = std::log(m) / std::log(static_cast<double>(n) / (n - m + 1));
    worker_term = (n - m - 1 > 0)
                      ? std::log(n - m) / std::log(static_cast<double>(n) / (n - m))
                      : 0.0;
    return static_cast<int>(
        std::ceil((1.0 + alpha) * (slacker_term + worker_term) - 1e-9));
}

int rounds_for_confidence_simplified(int n, int m, double alpha) {
    if (m < 1 || m >= n)
        throw DegenerateInputs("require 1 <= m < n");
    if (alpha <= 0.0)
        throw InvalidArgument("alpha must be positive");
    double eps = static_cast<double>(m) / n;
    return static_cast<int>(
        std::ceil((1.0 + alpha) * std::log(n) / std::log(1.0 / (1.0 - eps)) - 1e-9));
}

} // namespace cpt
