#pragma once

#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cpt/rng.hpp"

namespace cpt {

/// Ground-truth status of an individual. Slacker orders before Worker;
/// serialization relies on this order.
enum class Status : std::uint8_t { Slacker = 0, Worker = 1 };

inline Status flipped(Status s) {
    return s == Status::Slacker ? Status::Worker : Status::Slacker;
}

inline char status_char(Status s) { return s == Status::Slacker ? 'S' : 'W'; }

/// Boolean function evaluated by a pairwise test.
/// Or:  true unless both members are slackers (performance-based testing).
/// And: true only when both members are workers (the De Morgan dual, used
///      when roles are reversed, e.g. result cross-checking in distributed
///      computations).
enum class TestFn : std::uint8_t { Or, And };

/// The status revealed for both members when a test returns the revealing
/// outcome: a false OR reveals two slackers, a true AND reveals two workers.
inline Status revealed_status(TestFn fn) {
    return fn == TestFn::Or ? Status::Slacker : Status::Worker;
}

inline bool revealing_outcome(TestFn fn) { return fn != TestFn::Or; }

/// Outcome of a pairwise test on true statuses. Symmetric in its arguments.
inline bool pairwise_test(Status x, Status y, TestFn fn = TestFn::Or) {
    if (fn == TestFn::Or)
        return x == Status::Worker || y == Status::Worker;
    return x == Status::Worker && y == Status::Worker;
}

/// An unordered pair of distinct individuals, stored with a < b.
struct Pair {
    int a = 0;
    int b = 0;

    Pair() = default;
    Pair(int x, int y);

    auto operator<=>(const Pair&) const = default;
    bool contains(int i) const { return a == i || b == i; }
    int other(int i) const { return a == i ? b : a; }
};

/// One round of disjoint pairwise tests: no individual appears twice.
/// Individuals may sit a round out, so |pairs| <= floor(n/2).
class Round {
public:
    Round() = default;
    /// Validates disjointness and stores the pairs sorted.
    explicit Round(std::vector<Pair> pairs);

    const std::vector<Pair>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    auto begin() const { return pairs_.begin(); }
    auto end() const { return pairs_.end(); }

    bool operator==(const Round&) const = default;

private:
    std::vector<Pair> pairs_;
};

/// The hidden input: a status per individual. Algorithms may observe it
/// only through pairwise tests.
class Population {
public:
    Population() = default;
    explicit Population(std::vector<Status> statuses);

    int size() const { return static_cast<int>(statuses_.size()); }
    int slacker_count() const { return slacker_count_; }
    int worker_count() const { return size() - slacker_count_; }
    Status status(int i) const;
    const std::vector<Status>& statuses() const { return statuses_; }

    /// Population with every status inverted (workers <-> slackers).
    Population flipped() const;

    bool operator==(const Population&) const = default;

private:
    std::vector<Status> statuses_;
    int slacker_count_ = 0;
};

/// Uniformly random placement of exactly `slackers` slackers among n
/// individuals.
Population random_population(int n, int slackers, std::mt19937_64& rng);

/// Runs one round of tests against the ground truth. Outcome i corresponds
/// to pairs()[i]. Never mutates the population.
std::vector<bool> execute_round(const Population& pop, const Round& round,
                                TestFn fn = TestFn::Or);

} // namespace cpt
