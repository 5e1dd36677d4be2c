#pragma once

#include <random>
#include <vector>

#include "cpt/inference.hpp"
#include "cpt/rng.hpp"
#include "cpt/transcript.hpp"
#include "cpt/types.hpp"

namespace cpt {

/// Partition of the population into bins that are round-robin tested in
/// parallel. The shape (bin count and size multiset) is a function of
/// (n, eps) only, never of the ground truth.
struct BinLayout {
    std::vector<std::vector<int>> bins;
    int capacity = 0;

    int bin_count() const { return static_cast<int>(bins.size()); }
    int max_bin_size() const;
    /// Bin sizes in descending order, for schedule-shape audits.
    std::vector<int> sorted_sizes() const;
};

/// Shape of one phase as visible to participants: how many bins of which
/// sizes, and how many testing rounds. Exported for obliviousness audits.
struct PhaseShape {
    std::vector<int> bin_sizes;
    int rounds = 0;

    bool operator==(const PhaseShape&) const = default;
};

struct AdaptiveReport {
    Transcript transcript;
    KnowledgeState final_state;
    int rounds_used = 0;
    long long tests_used = 0;
    std::vector<double> epsilon_history;
    std::vector<PhaseShape> phase_shapes;
    RngSeed seed = 0;
};

struct PhaseResult {
    BinLayout layout;
    Transcript fragment;
    KnowledgeState state;
};

/// Number of known members of the class revealed by the test function
/// (slackers under OR, workers under AND).
int revealed_count(const KnowledgeState& state, TestFn fn);
std::vector<int> revealed_individuals(const KnowledgeState& state, TestFn fn);

/// Bin capacity used by both phases.
int adaptive_bin_capacity(double eps);

/// Phase one: floor(eps*n/2)-style binning (greedy fill to capacity
/// ceil(2/eps), trailing singleton merged into the previous bin), uniformly
/// random membership, followed by parallel round-robin testing within bins.
///
/// Afterwards every bin holding at least two slackers is fully classified,
/// and with eps at most the true slacker fraction at least ceil(eps*n/2)
/// slackers are known.
PhaseResult phase_one(const Population& pop, double eps, std::mt19937_64& rng,
                      TestFn fn = TestFn::Or);

/// Phase two: ceil(eps*n/2) bins, each seeded with one known slacker; all
/// other individuals are dealt randomly subject to (a) balanced bin sizes
/// within capacity and (b) no two individuals from one phase-one bin
/// sharing a phase-two bin. Constraint (b) is enforced whenever it is
/// satisfiable (every phase-one bin fits across the phase-two bins) and
/// relaxed to a best-effort deal otherwise, since re-testing a pair is
/// harmless. Ends with parallel round-robin testing; every individual is
/// classified afterwards.
PhaseResult phase_two(const Population& pop, double eps,
                      const BinLayout& phase_one_layout, const KnowledgeState& state,
                      std::mt19937_64& rng, TestFn fn = TestFn::Or);

/// Two-phase adaptive identification with known eps. Classifies the whole
/// population in at most 2*ceil(2/eps) rounds; phase two is skipped when
/// phase one already classified everyone.
AdaptiveReport identify_all_known_eps(const Population& pop, double eps, RngSeed seed,
                                      TestFn fn = TestFn::Or);

/// Identification without knowing eps: runs the two-phase algorithm with
/// estimates eps' = 1/2, 1/4, ... until phase one has revealed at least
/// ceil(eps'*n/2) slackers, then finishes with phase two. The final
/// estimate satisfies eps/2 < eps' <= 2*eps. Throws NoSlackersDetectable
/// once eps' < 2/n (fewer than two slackers cannot be distinguished).
AdaptiveReport identify_all_unknown_eps(const Population& pop, RngSeed seed,
                                        TestFn fn = TestFn::Or);

} // namespace cpt
