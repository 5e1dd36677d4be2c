#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cpt/errors.hpp"
#include "cpt/rng.hpp"
#include "cpt/scheduling.hpp"
#include "cpt/transcript.hpp"
#include "cpt/types.hpp"

using namespace cpt;

namespace {

Population pop_of(std::initializer_list<char> statuses) {
    std::vector<Status> v;
    for (char c : statuses)
        v.push_back(c == 'S' ? Status::Slacker : Status::Worker);
    return Population(std::move(v));
}

std::set<Pair> all_pairs(const std::vector<int>& members) {
    std::set<Pair> out;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            out.emplace(members[i], members[j]);
    return out;
}

} // namespace

TEST_CASE("pairwise test is OR of statuses with slacker = 0") {
    CHECK(pairwise_test(Status::Slacker, Status::Slacker) == false);
    CHECK(pairwise_test(Status::Worker, Status::Slacker) == true);
    CHECK(pairwise_test(Status::Slacker, Status::Worker) == true);
    CHECK(pairwise_test(Status::Worker, Status::Worker) == true);
}

TEST_CASE("AND test is the De Morgan dual") {
    for (Status x : {Status::Slacker, Status::Worker})
        for (Status y : {Status::Slacker, Status::Worker})
            CHECK(pairwise_test(x, y, TestFn::And) ==
                  !pairwise_test(flipped(x), flipped(y), TestFn::Or));
}

TEST_CASE("pairs canonicalize to a < b and reject degenerate input") {
    Pair p(3, 1);
    CHECK(p.a == 1);
    CHECK(p.b == 3);
    CHECK_THROWS_AS(Pair(2, 2), InvalidArgument);
}

TEST_CASE("rounds reject duplicate indices") {
    CHECK_THROWS_AS(Round({Pair(0, 1), Pair(1, 2)}), DuplicateIndexInRound);
    CHECK_NOTHROW(Round({Pair(0, 1), Pair(2, 3)}));
}

TEST_CASE("execute_round evaluates each pair against ground truth") {
    CHECK(execute_round(pop_of({'S', 'S', 'W', 'W'}), Round({Pair(0, 1), Pair(2, 3)})) ==
          std::vector<bool>{false, true});
    CHECK(execute_round(pop_of({'W', 'W'}), Round({Pair(0, 1)})) ==
          std::vector<bool>{true});
    CHECK(execute_round(pop_of({'S', 'W', 'S'}), Round({Pair(0, 2)})) ==
          std::vector<bool>{false});
}

TEST_CASE("execute_round checks indices and is pure") {
    Population pop = pop_of({'S', 'W'});
    CHECK_THROWS_AS(execute_round(pop, Round({Pair(0, 5)})), IndexOutOfRange);
    Round r({Pair(0, 1)});
    auto first = execute_round(pop, r);
    auto second = execute_round(pop, r);
    CHECK(first == second);
    CHECK(pop == pop_of({'S', 'W'}));
}

TEST_CASE("round robin: smallest bin") {
    auto frags = round_robin_schedule(std::vector<int>{0, 1});
    REQUIRE(frags.size() == 1);
    CHECK(frags[0].pairs() == std::vector<Pair>{Pair(0, 1)});
    CHECK_THROWS_AS(round_robin_schedule(std::vector<int>{7}), BinTooSmall);
}

TEST_CASE("round robin on four members is the three matchings of K4") {
    auto frags = round_robin_schedule(std::vector<int>{0, 1, 2, 3});
    REQUIRE(frags.size() == 3);
    std::set<std::vector<Pair>> got;
    for (const Round& r : frags)
        got.insert(r.pairs());
    std::set<std::vector<Pair>> expected = {
        {Pair(0, 1), Pair(2, 3)},
        {Pair(0, 2), Pair(1, 3)},
        {Pair(0, 3), Pair(1, 2)},
    };
    CHECK(got == expected);
}

TEST_CASE("round robin on five members: each fragment idles exactly one") {
    std::vector<int> bin = {4, 7, 9, 11, 12};
    auto frags = round_robin_schedule(bin);
    REQUIRE(frags.size() == 5);
    std::set<Pair> covered;
    for (const Round& r : frags) {
        CHECK(r.size() == 2); // two pairs, one idle member
        for (const Pair& p : r)
            CHECK(covered.insert(p).second); // no pair twice
    }
    CHECK(covered == all_pairs(bin));
}

TEST_CASE("round robin covers every pair exactly once for s in 2..12") {
    for (int s = 2; s <= 12; ++s) {
        std::vector<int> bin(s);
        std::iota(bin.begin(), bin.end(), 0);
        auto frags = round_robin_schedule(bin);
        CHECK(static_cast<int>(frags.size()) == (s % 2 == 0 ? s - 1 : s));
        std::multiset<Pair> covered;
        for (const Round& r : frags)
            for (const Pair& p : r)
                covered.insert(p);
        std::set<Pair> expected = all_pairs(bin);
        CHECK(covered.size() == expected.size()); // multiset == set: no repeats
        CHECK(std::set<Pair>(covered.begin(), covered.end()) == expected);
    }
}

TEST_CASE("random matching of two is forced") {
    auto rng = make_rng(123);
    Round r = random_perfect_matching(std::vector<int>{0, 1}, rng);
    CHECK(r.pairs() == std::vector<Pair>{Pair(0, 1)});
}

TEST_CASE("random matching of four is uniform over the three matchings") {
    std::vector<int> idx = {0, 1, 2, 3};
    std::map<std::vector<Pair>, int> counts;
    auto rng = make_rng(2024);
    const int draws = 30000;
    for (int i = 0; i < draws; ++i)
        counts[random_perfect_matching(idx, rng).pairs()]++;
    REQUIRE(counts.size() == 3);
    for (const auto& [pairs, count] : counts)
        CHECK(std::abs(count / static_cast<double>(draws) - 1.0 / 3) < 0.01);
}

TEST_CASE("odd matching idles a uniformly random member") {
    std::vector<int> idx = {0, 1, 2};
    std::map<int, int> idle_counts;
    auto rng = make_rng(77);
    const int draws = 30000;
    for (int i = 0; i < draws; ++i) {
        Round r = random_perfect_matching(idx, rng);
        REQUIRE(r.size() == 1);
        for (int v : idx)
            if (!r.pairs()[0].contains(v))
                idle_counts[v]++;
    }
    REQUIRE(idle_counts.size() == 3);
    for (const auto& [v, count] : idle_counts)
        CHECK(std::abs(count / static_cast<double>(draws) - 1.0 / 3) < 0.01);
}

TEST_CASE("transcript serialization matches the documented text form") {
    Transcript t;
    t.add_round(Round({Pair(0, 1), Pair(2, 3)}), {false, true});
    t.add_round(Round({Pair(0, 2)}), {true});
    CHECK(serialize_transcript(t) == "0-1- 2-3+\n0-2+\n");
    CHECK(parse_transcript(serialize_transcript(t)) == t);
}

TEST_CASE("schedule serialization omits outcomes") {
    std::vector<Round> rounds = {Round({Pair(0, 1), Pair(2, 3)}), Round({Pair(1, 2)})};
    CHECK(serialize_schedule(rounds) == "0-1 2-3\n1-2\n");
    CHECK(parse_schedule(serialize_schedule(rounds)) == rounds);
}

TEST_CASE("transcript round-trip on random instances") {
    auto rng = make_rng(9001);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng() % 20);
        Population pop = random_population(n, static_cast<int>(rng() % (n + 1)), rng);
        std::vector<int> everyone(n);
        std::iota(everyone.begin(), everyone.end(), 0);
        Transcript t;
        int rounds = 1 + static_cast<int>(rng() % 4);
        for (int r = 0; r < rounds; ++r)
            t.add_executed(pop, random_perfect_matching(everyone, rng));
        CHECK(parse_transcript(serialize_transcript(t)) == t);
    }
}

TEST_CASE("seeded runs serialize byte-for-byte identically") {
    auto make = [](RngSeed seed) {
        auto rng = make_rng(seed);
        Population pop = random_population(30, 10, rng);
        std::vector<int> everyone(30);
        std::iota(everyone.begin(), everyone.end(), 0);
        Transcript t;
        for (int r = 0; r < 5; ++r)
            t.add_executed(pop, random_perfect_matching(everyone, rng));
        return serialize_transcript(t);
    };
    CHECK(make(42) == make(42));
    CHECK(make(42) != make(43));
}

TEST_CASE("random_population places the exact slacker count uniformly") {
    auto rng = make_rng(5);
    std::vector<int> first_slot_slacker(4, 0);
    for (int i = 0; i < 20000; ++i) {
        Population pop = random_population(4, 2, rng);
        CHECK(pop.slacker_count() == 2);
        for (int j = 0; j < 4; ++j)
            if (pop.status(j) == Status::Slacker)
                first_slot_slacker[j]++;
    }
    for (int j = 0; j < 4; ++j)
        CHECK(std::abs(first_slot_slacker[j] / 20000.0 - 0.5) < 0.02);
}
