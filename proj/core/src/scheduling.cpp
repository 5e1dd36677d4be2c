#include "cpt/scheduling.hpp"

#include <algorithm>
#include <string>

#include "cpt/errors.hpp"

namespace cpt {

std::vector<Round> round_robin_schedule(std::span<const int> bin) {
    const int s = static_cast<int>(bin.size());
    if (s < 2)
        throw BinTooSmall("round robin needs at least 2 members, got " + std::to_string(s));

    // Circle method: pad odd bins with a bye slot, fix seat 0, rotate the
    // rest one step per fragment. Pads give s fragments for odd s, s-1 for
    // even s, covering each of the C(s,2) pairs exactly once.
    const bool odd = s % 2 != 0;
    const int m = odd ? s + 1 : s; // seats including the bye
    constexpr int kBye = -1;

    std::vector<int> seats(bin.begin(), bin.end());
    if (odd)
        seats.push_back(kBye);

    std::vector<Round> fragments;
    fragments.reserve(static_cast<std::size_t>(m - 1));
    for (int frag = 0; frag < m - 1; ++frag) {
        std::vector<Pair> pairs;
        pairs.reserve(static_cast<std::size_t>(m / 2));
        for (int i = 0; i < m / 2; ++i) {
            int x = seats[static_cast<std::size_t>(i)];
            int y = seats[static_cast<std::size_t>(m - 1 - i)];
            if (x != kBye && y != kBye)
                pairs.emplace_back(x, y);
        }
        fragments.emplace_back(std::move(pairs));
        // Rotate everything but seat 0 one step clockwise.
        std::rotate(seats.begin() + 1, seats.end() - 1, seats.end());
    }
    return fragments;
}

Round random_perfect_matching(std::span<const int> indices, std::mt19937_64& rng) {
    if (indices.size() < 2)
        throw BinTooSmall("matching needs at least 2 indices");

    // A uniform shuffle paired off consecutively is uniform over perfect
    // matchings; for an odd count the leftover individual is uniform too.
    std::vector<int> order(indices.begin(), indices.end());
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Pair> pairs;
    pairs.reserve(order.size() / 2);
    for (std::size_t i = 0; i + 1 < order.size(); i += 2)
        pairs.emplace_back(order[i], order[i + 1]);
    return Round(std::move(pairs));
}

namespace {

void enumerate_recursive(std::vector<int>& remaining, std::vector<Pair>& current,
                         std::vector<Round>& out) {
    if (remaining.empty()) {
        out.emplace_back(current);
        return;
    }
    int first = remaining.front();
    for (std::size_t j = 1; j < remaining.size(); ++j) {
        std::vector<int> rest;
        rest.reserve(remaining.size() - 2);
        for (std::size_t t = 1; t < remaining.size(); ++t)
            if (t != j)
                rest.push_back(remaining[t]);
        current.emplace_back(first, remaining[j]);
        enumerate_recursive(rest, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<Round> enumerate_perfect_matchings(std::span<const int> indices) {
    if (indices.size() % 2 != 0)
        throw InvalidArgument("perfect matchings require an even count");
    if (indices.size() > 12)
        throw InstanceTooLarge("matching enumeration capped at 12 indices");
    std::vector<int> remaining(indices.begin(), indices.end());
    std::vector<Pair> current;
    std::vector<Round> out;
    enumerate_recursive(remaining, current, out);
    return out;
}

} // namespace cpt
