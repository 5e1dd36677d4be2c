#pragma once

#include <random>
#include <vector>

#include "cpt/rng.hpp"
#include "cpt/transcript.hpp"
#include "cpt/types.hpp"

namespace cpt {

enum class ScheduleKind : std::uint8_t { DeterministicCover, RandomMatching };

/// A schedule fixed entirely before any outcome is observed: a pure
/// function of its parameters.
struct NonadaptiveSchedule {
    std::vector<Round> rounds;
    ScheduleKind kind = ScheduleKind::DeterministicCover;
    int n = 0;
    double eps = 0.0; // DeterministicCover only
    int k = 0;        // RandomMatching only
    RngSeed seed = 0; // RandomMatching only

    int round_count() const { return static_cast<int>(rounds.size()); }
};

/// ceil((1-eps)*n)+1 rounds of the circle method over the whole population,
/// so each individual meets that many distinct partners -- more partners
/// than there are workers, hence at least one slacker each. Requires
/// 2/n <= eps < 1; the slacker count is assumed known for inference.
NonadaptiveSchedule deterministic_cover_schedule(int n, double eps);

/// k independent uniformly random (near-)perfect matchings.
NonadaptiveSchedule random_matching_schedule(int n, int k, RngSeed seed);

/// Round count for the random-matching scheme at confidence exponent
/// alpha, after which the expected number of individuals never paired
/// with a slacker is at most min(1/m^alpha, 1/(n-m)^alpha):
///
///   even n:  ceil((1+alpha) * max(log_{(n-1)/(n-m)} m,
///                                 log_{(n-1)/(n-m-1)} (n-m)))
///   odd n:   ceil((1+alpha) * (log_{n/(n-m+1)} m + log_{n/(n-m)} (n-m)))
///
/// The odd case sums the two terms where the even case takes a max; both
/// are implemented exactly as analyzed. For m >= n-1 the worker term
/// degenerates and the slacker term alone defines k. Throws
/// DegenerateInputs for m < 2.
int rounds_for_confidence(int n, int m, double alpha);

/// The simplified bound ceil((1+alpha) * log_{1/(1-eps)} n) with eps = m/n.
int rounds_for_confidence_simplified(int n, int m, double alpha);

} // namespace cpt
