#pragma once

#include "cpt/adaptive.hpp"
#include "cpt/rng.hpp"
#include "cpt/types.hpp"

namespace cpt {

/// Worker-fraction brackets with guaranteed round counts when workers are
/// scarce (delta = 1 - eps <= 1/2).
enum class DeltaBracket : std::uint8_t {
    TwoRound,   // delta <= 1/4
    ThreeRound, // 1/4 < delta <= 5/14
    FourRound,  // 5/14 < delta <= 19/46
    FiveRound,  // 19/46 < delta <= 1/2
};

/// Returns the tightest bracket whose guarantee applies.
/// Throws DeltaTooLarge for delta > 1/2.
DeltaBracket classify_bracket(double delta);

int bracket_round_bound(DeltaBracket bracket);

struct BoundedReport {
    AdaptiveReport base;
    DeltaBracket bracket = DeltaBracket::TwoRound;
    int round_bound = 0;
    /// Five-round scheme only: the groups of four whose internal round
    /// robin forms rounds 1-3. Empty for the other brackets.
    std::vector<std::vector<int>> groups;
};

/// Identifies the whole population within the bracket's round bound.
///
/// Brackets of 2-4 rounds: one uniformly random matching, then rounds that
/// pair each still-unknown individual with a distinct known slacker
/// (leftover unknowns matched among themselves, identified workers paired
/// together). The 1/2 bracket instead starts with three parallel
/// round-robin rounds over random groups of four (n divisible by 4), which
/// classifies every group holding two or more slackers, and finishes with
/// the seeded pairing rounds.
///
/// The population must carry exactly round(delta*n) workers. If floor
/// effects ever leave the bound short the run continues with extra seeded
/// rounds; the overshoot stays visible as rounds_used > round_bound.
BoundedReport identify_bounded(const Population& pop, double delta, RngSeed seed,
                               TestFn fn = TestFn::Or);

/// Counting bound for the five-round scheme: at most floor((1-eps)*n/3)
/// groups of four are left silent (hold at most one slacker) after the
/// three round-robin rounds. Requires eps >= 1/2 and n divisible by 4.
int unidentified_groups_bound(int n, double eps);

} // namespace cpt
