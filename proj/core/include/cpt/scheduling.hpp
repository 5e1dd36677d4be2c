#pragma once

#include <random>
#include <span>
#include <vector>

#include "cpt/types.hpp"

namespace cpt {

/// Circle-method round robin over the members of one bin.
///
/// Returns s-1 fragments when s is even and s fragments when s is odd
/// (one member idles per fragment). Each fragment pairs bin members
/// disjointly and the fragments together cover every one of the C(s,2)
/// pairs exactly once. Fragments of parallel bins are merged by the
/// callers into full rounds.
std::vector<Round> round_robin_schedule(std::span<const int> bin);

/// One uniformly random (near-)perfect matching of `indices`. When the
/// count is odd, a uniformly chosen individual sits the round out.
Round random_perfect_matching(std::span<const int> indices, std::mt19937_64& rng);

/// All perfect matchings of `indices` (|indices| even, small). Used by
/// exact enumeration tests and the analysis cross-checks.
std::vector<Round> enumerate_perfect_matchings(std::span<const int> indices);

} // namespace cpt
