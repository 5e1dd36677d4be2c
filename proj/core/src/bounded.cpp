#include "cpt/bounded.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cpt/errors.hpp"
#include "cpt/scheduling.hpp"

namespace cpt {

namespace {

constexpr double kBoundaryTol = 1e-12;

/// One scheduling step shared by every bracket after its opening rounds:
/// pair unknowns with distinct identified slackers first (that classifies
/// them), match leftover unknowns among themselves (a slacker collision
/// identifies both), and pair leftover identified individuals within their
/// own class, which yields nothing but keeps the round full.
Round seeded_pairing_round(const KnowledgeState& state, TestFn fn, std::mt19937_64& rng) {
    Label revealed = label_for(revealed_status(fn));

    std::vector<int> unknowns, seeds, others;
    for (int i = 0; i < state.size(); ++i) {
        if (state.label(i) == Label::Unknown)
            unknowns.push_back(i);
        else if (state.label(i) == revealed)
            seeds.push_back(i);
        else
            others.push_back(i);
    }
    std::shuffle(unknowns.begin(), unknowns.end(), rng);
    std::shuffle(seeds.begin(), seeds.end(), rng);
    std::shuffle(others.begin(), others.end(), rng);

    std::vector<Pair> pairs;
    std::size_t seeded = std::min(unknowns.size(), seeds.size());
    for (std::size_t i = 0; i < seeded; ++i)
        pairs.emplace_back(unknowns[i], seeds[i]);
    for (std::size_t i = seeded; i + 1 < unknowns.size(); i += 2)
        pairs.emplace_back(unknowns[i], unknowns[i + 1]);
    for (std::size_t i = seeded; i + 1 < seeds.size(); i += 2)
        pairs.emplace_back(seeds[i], seeds[i + 1]);
    for (std::size_t i = 0; i + 1 < others.size(); i += 2)
        pairs.emplace_back(others[i], others[i + 1]);
    return Round(std::move(pairs));
}

void execute_into(const Population& pop, Round round, TestFn fn, Transcript& transcript,
                  InferenceEngine& engine) {
    std::vector<bool> outcomes = execute_round(pop, round, fn);
    engine.add_round(round, outcomes);
    transcript.add_round(std::move(round), std::move(outcomes));
}

} // namespace

DeltaBracket classify_bracket(double delta) {
    if (delta < -kBoundaryTol)
        throw InvalidArgument("delta must be nonnegative");
    if (delta > 0.5 + kBoundaryTol)
        throw DeltaTooLarge("bounded-round schemes require delta <= 1/2, got " +
                            std::to_string(delta));
    if (delta <= 0.25 + kBoundaryTol)
        return DeltaBracket::TwoRound;
    if (delta <= 5.0 / 14.0 + kBoundaryTol)
        return DeltaBracket::ThreeRound;
    if (delta <= 19.0 / 46.0 + kBoundaryTol)
        return DeltaBracket::FourRound;
    return DeltaBracket::FiveRound;
}

int bracket_round_bound(DeltaBracket bracket) {
    switch (bracket) {
    case DeltaBracket::TwoRound: return 2;
    case DeltaBracket::ThreeRound: return 3;
    case DeltaBracket::FourRound: return 4;
    case DeltaBracket::FiveRound: return 5;
    }
    throw InvalidArgument("unknown bracket");
}

int unidentified_groups_bound(int n, double eps) {
    if (n % 4 != 0)
        throw InvalidArgument("group bound assumes n divisible by 4");
    if (eps < 0.5 - kBoundaryTol || eps > 1.0 + kBoundaryTol)
        throw InvalidArgument("group bound assumes 1/2 <= eps <= 1");
    return static_cast<int>(std::floor((1.0 - eps) * n / 3.0 + 1e-9));
}

BoundedReport identify_bounded(const Population& pop, double delta, RngSeed seed,
                               TestFn fn) {
    const int n = pop.size();
    if (n < 2)
        throw InvalidArgument("need at least 2 individuals");

    BoundedReport result;
    result.bracket = classify_bracket(delta);
    result.round_bound = bracket_round_bound(result.bracket);
    result.base.seed = seed;
    result.base.epsilon_history.push_back(1.0 - delta);

    // The scarce class is the one NOT revealed by the test function:
    // workers under OR, slackers under the AND dual.
    int scarce = fn == TestFn::Or ? pop.worker_count() : pop.slacker_count();
    int expected = static_cast<int>(std::llround(delta * n));
    if (scarce != expected)
        throw BracketViolation("population carries " + std::to_string(scarce) +
                               " of the scarce class, bracket expects " +
                               std::to_string(expected));

    std::mt19937_64 rng = make_rng(derive_seed(seed, {0x4u}));
    InferenceEngine engine(n, {fn, false, std::nullopt});
    Transcript& transcript = result.base.transcript;

    if (result.bracket == DeltaBracket::FiveRound) {
        if (n % 4 != 0)
            throw InvalidArgument("the five-round scheme requires n divisible by 4");
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (int at = 0; at < n; at += 4)
            result.groups.emplace_back(order.begin() + at, order.begin() + at + 4);

        // Three parallel rounds cover all pairs inside each group of four.
        std::vector<std::vector<Round>> per_group;
        per_group.reserve(result.groups.size());
        for (const std::vector<int>& group : result.groups)
            per_group.push_back(round_robin_schedule(group));
        for (int r = 0; r < 3; ++r) {
            std::vector<Pair> pairs;
            pairs.reserve(static_cast<std::size_t>(n / 2));
            for (const std::vector<Round>& frags : per_group)
                pairs.insert(pairs.end(), frags[static_cast<std::size_t>(r)].begin(),
                             frags[static_cast<std::size_t>(r)].end());
            execute_into(pop, Round(std::move(pairs)), fn, transcript, engine);
        }
    } else {
        std::vector<int> everyone(static_cast<std::size_t>(n));
        std::iota(everyone.begin(), everyone.end(), 0);
        execute_into(pop, random_perfect_matching(everyone, rng), fn, transcript, engine);
    }

    // Seeded pairing rounds until everyone is classified. Inside the
    // bracket's guarantee this terminates within the round bound; the loop
    // itself only stops on completion, so an overshoot stays visible.
    while (!engine.state().all_classified()) {
        if (transcript.round_count() > 4 * n + 8)
            throw Error("internal: seeded pairing failed to make progress");
        execute_into(pop, seeded_pairing_round(engine.state(), fn, rng), fn, transcript,
                     engine);
    }

    result.base.final_state = engine.state();
    result.base.rounds_used = transcript.round_count();
    result.base.tests_used = transcript.test_count();
    return result;
}

} // namespace cpt
