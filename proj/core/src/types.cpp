#include "cpt/types.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "cpt/errors.hpp"

namespace cpt {

Pair::Pair(int x, int y) : a(std::min(x, y)), b(std::max(x, y)) {
    if (x == y)
        throw InvalidArgument("pair members must be distinct, got " + std::to_string(x) +
                              " twice");
    if (x < 0 || y < 0)
        throw IndexOutOfRange("negative individual index in pair");
}

Round::Round(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    std::unordered_set<int> seen;
    seen.reserve(pairs_.size() * 2);
    for (const Pair& p : pairs_) {
        if (!seen.insert(p.a).second || !seen.insert(p.b).second)
            throw DuplicateIndexInRound("individual appears twice in one round");
    }
}

Population::Population(std::vector<Status> statuses) : statuses_(std::move(statuses)) {
    slacker_count_ = static_cast<int>(
        std::count(statuses_.begin(), statuses_.end(), Status::Slacker));
}

Status Population::status(int i) const {
    if (i < 0 || i >= size())
        throw IndexOutOfRange("individual index " + std::to_string(i) +
                              " out of range for population of " + std::to_string(size()));
    return statuses_[static_cast<std::size_t>(i)];
}

Population Population::flipped() const {
    std::vector<Status> out(statuses_.size());
    std::transform(statuses_.begin(), statuses_.end(), out.begin(),
                   [](Status s) { return cpt::flipped(s); });
    return Population(std::move(out));
}

Population random_population(int n, int slackers, std::mt19937_64& rng) {
    if (n < 0 || slackers < 0 || slackers > n)
        throw InvalidArgument("slacker count must lie in [0, n]");
    std::vector<Status> statuses(static_cast<std::size_t>(n), Status::Worker);
    std::fill_n(statuses.begin(), slackers, Status::Slacker);
    std::shuffle(statuses.begin(), statuses.end(), rng);
    return Population(std::move(statuses));
}

std::vector<bool> execute_round(const Population& pop, const Round& round, TestFn fn) {
    std::vector<bool> outcomes;
    outcomes.reserve(round.size());
    for (const Pair& p : round) {
        if (p.b >= pop.size())
            throw IndexOutOfRange("pair index " + std::to_string(p.b) +
                                  " exceeds population size " + std::to_string(pop.size()));
        outcomes.push_back(pairwise_test(pop.status(p.a), pop.status(p.b), fn));
    }
    return outcomes;
}

} // namespace cpt
