#include "cpt/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "cpt/errors.hpp"
#include "cpt/scheduling.hpp"

namespace cpt {

namespace {

// Guarded rounding: the spec-level quantities (2/eps, eps*n/2) are exact
// rationals; these keep binary-float noise from flipping a floor/ceil.
int floor_guarded(double x) { return static_cast<int>(std::floor(x + 1e-9)); }
int ceil_guarded(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

void append_transcript(Transcript& into, const Transcript& from) {
    for (int r = 0; r < from.round_count(); ++r)
        into.add_round(from.round(r), from.outcomes(r));
}

PhaseShape shape_of(const BinLayout& layout, int rounds) {
    return PhaseShape{layout.sorted_sizes(), rounds};
}

/// Executes the round-robin schedule of every bin in parallel: fragment r
/// of each bin is merged into one full round. Returns the round count.
int run_round_robin(const Population& pop, const BinLayout& layout, TestFn fn,
                    Transcript& fragment, InferenceEngine& engine) {
    std::vector<std::vector<Round>> per_bin;
    std::size_t rounds = 0;
    for (const std::vector<int>& bin : layout.bins) {
        if (bin.size() < 2)
            continue; // a lone individual cannot be tested
        per_bin.push_back(round_robin_schedule(bin));
        rounds = std::max(rounds, per_bin.back().size());
    }
    for (std::size_t r = 0; r < rounds; ++r) {
        std::vector<Pair> pairs;
        for (const std::vector<Round>& frags : per_bin)
            if (r < frags.size())
                pairs.insert(pairs.end(), frags[r].begin(), frags[r].end());
        Round round(std::move(pairs));
        std::vector<bool> outcomes = execute_round(pop, round, fn);
        engine.add_round(round, outcomes);
        fragment.add_round(std::move(round), std::move(outcomes));
    }
    return static_cast<int>(rounds);
}

BinLayout make_phase_one_layout(int n, double eps, std::mt19937_64& rng) {
    BinLayout layout;
    layout.capacity = adaptive_bin_capacity(eps);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    for (int at = 0; at < n; at += layout.capacity) {
        int end = std::min(n, at + layout.capacity);
        layout.bins.emplace_back(order.begin() + at, order.begin() + end);
    }
    // A trailing singleton can never be tested; fold it into the previous
    // bin (that bin may exceed capacity by one).
    if (layout.bins.size() >= 2 && layout.bins.back().size() == 1) {
        int straggler = layout.bins.back().front();
        layout.bins.pop_back();
        layout.bins.back().push_back(straggler);
    }
    return layout;
}

// ---------------------------------------------------------------------------
// Phase-two constrained assignment.
//
// Bins get one seed slacker each plus balanced targets; every other
// individual must land in a distinct bin from its phase-one co-members
// (constraint (b)) without exceeding its bin's target. A randomized
// capacity-aware deal handles almost every instance; exact bipartite flow
// covers the tight layouts where random dealing keeps overflowing.
// ---------------------------------------------------------------------------

struct Dinic {
    struct Edge {
        int to;
        int cap;
        int rev;
    };

    explicit Dinic(int nodes) : graph(static_cast<std::size_t>(nodes)) {}

    void add_edge(int from, int to, int cap) {
        graph[from].push_back({to, cap, static_cast<int>(graph[to].size())});
        graph[to].push_back({from, 0, static_cast<int>(graph[from].size()) - 1});
    }

    bool bfs(int s, int t) {
        level.assign(graph.size(), -1);
        std::queue<int> q;
        level[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const Edge& e : graph[v]) {
                if (e.cap > 0 && level[e.to] < 0) {
                    level[e.to] = level[v] + 1;
                    q.push(e.to);
                }
            }
        }
        return level[t] >= 0;
    }

    int dfs(int v, int t, int f) {
        if (v == t)
            return f;
        for (int& i = iter[v]; i < static_cast<int>(graph[v].size()); ++i) {
            Edge& e = graph[v][i];
            if (e.cap > 0 && level[v] < level[e.to]) {
                int d = dfs(e.to, t, std::min(f, e.cap));
                if (d > 0) {
                    e.cap -= d;
                    graph[e.to][e.rev].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }

    int max_flow(int s, int t) {
        int flow = 0;
        while (bfs(s, t)) {
            iter.assign(graph.size(), 0);
            while (int f = dfs(s, t, 1 << 30))
                flow += f;
        }
        return flow;
    }

    std::vector<std::vector<Edge>> graph;
    std::vector<int> level;
    std::vector<int> iter;
};

struct PhaseTwoProblem {
    int b2 = 0;
    std::vector<int> slots;                  // per-bin capacity after seeding
    std::vector<std::vector<int>> columns;   // non-seed members per phase-one bin
    std::vector<std::vector<char>> seeded;   // seeded[c][b]: bin b holds a seed from column c
    bool strict = true;
};

/// Randomized capacity-aware deal. Members of one column go to distinct
/// allowed bins, preferring the emptiest; returns the assignment or empty
/// on a wedge (some member ran out of allowed bins).
std::vector<std::vector<int>> try_greedy_deal(const PhaseTwoProblem& problem,
                                              std::mt19937_64& rng) {
    std::vector<std::vector<int>> bins(static_cast<std::size_t>(problem.b2));
    std::vector<int> remaining = problem.slots;

    std::vector<int> column_order(problem.columns.size());
    std::iota(column_order.begin(), column_order.end(), 0);
    std::shuffle(column_order.begin(), column_order.end(), rng);

    std::vector<int> bin_order(static_cast<std::size_t>(problem.b2));
    std::iota(bin_order.begin(), bin_order.end(), 0);

    std::vector<char> used(static_cast<std::size_t>(problem.b2), 0);
    for (int c : column_order) {
        std::fill(used.begin(), used.end(), 0);
        std::shuffle(bin_order.begin(), bin_order.end(), rng);
        for (int member : problem.columns[static_cast<std::size_t>(c)]) {
            int best = -1;
            for (int b : bin_order) {
                if (remaining[b] <= 0 || used[b])
                    continue;
                if (problem.strict && problem.seeded[static_cast<std::size_t>(c)][b])
                    continue;
                if (best < 0 || remaining[b] > remaining[best])
                    best = b;
            }
            if (best < 0 && !problem.strict) {
                // Columns wider than the bin count cannot stay collision
                // free; fall back to any bin with room.
                for (int b : bin_order)
                    if (remaining[b] > 0 && (best < 0 || remaining[b] > remaining[best]))
                        best = b;
            }
            if (best < 0) {
                if (!problem.strict)
                    throw LayoutInfeasible("phase-two capacity exhausted"); // cannot happen
                return {};
            }
            bins[static_cast<std::size_t>(best)].push_back(member);
            remaining[best]--;
            used[best] = 1;
        }
    }
    return bins;
}

/// Exact fallback: one unit of flow per (column, member) through
/// column->bin edges restricted by constraint (b) and bin slot capacities.
std::vector<std::vector<int>> try_flow_deal(const PhaseTwoProblem& problem,
                                            std::mt19937_64& rng) {
    const int cols = static_cast<int>(problem.columns.size());
    const int source = 0;
    const int sink = cols + problem.b2 + 1;
    Dinic dinic(sink + 1);

    int total = 0;
    std::vector<int> bin_order(static_cast<std::size_t>(problem.b2));
    std::iota(bin_order.begin(), bin_order.end(), 0);
    for (int c = 0; c < cols; ++c) {
        int need = static_cast<int>(problem.columns[static_cast<std::size_t>(c)].size());
        if (need == 0)
            continue;
        total += need;
        dinic.add_edge(source, 1 + c, need);
        std::shuffle(bin_order.begin(), bin_order.end(), rng);
        for (int b : bin_order)
            if (!problem.seeded[static_cast<std::size_t>(c)][b])
                dinic.add_edge(1 + c, 1 + cols + b, 1);
    }
    for (int b = 0; b < problem.b2; ++b)
        dinic.add_edge(1 + cols + b, sink, problem.slots[static_cast<std::size_t>(b)]);

    if (dinic.max_flow(source, sink) != total)
        return {};

    std::vector<std::vector<int>> bins(static_cast<std::size_t>(problem.b2));
    for (int c = 0; c < cols; ++c) {
        const std::vector<int>& members = problem.columns[static_cast<std::size_t>(c)];
        std::size_t next = 0;
        for (const Dinic::Edge& e : dinic.graph[1 + c]) {
            if (e.to == source || e.cap != 0)
                continue; // unsaturated or reverse edge
            int b = e.to - 1 - cols;
            if (b < 0 || b >= problem.b2)
                continue;
            bins[static_cast<std::size_t>(b)].push_back(members.at(next++));
        }
    }
    return bins;
}

} // namespace

int BinLayout::max_bin_size() const {
    int best = 0;
    for (const std::vector<int>& bin : bins)
        best = std::max(best, static_cast<int>(bin.size()));
    return best;
}

std::vector<int> BinLayout::sorted_sizes() const {
    std::vector<int> sizes;
    sizes.reserve(bins.size());
    for (const std::vector<int>& bin : bins)
        sizes.push_back(static_cast<int>(bin.size()));
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

int revealed_count(const KnowledgeState& state, TestFn fn) {
    return fn == TestFn::Or ? state.known_slacker_count() : state.known_worker_count();
}

std::vector<int> revealed_individuals(const KnowledgeState& state, TestFn fn) {
    Label wanted = label_for(revealed_status(fn));
    std::vector<int> out;
    for (int i = 0; i < state.size(); ++i)
        if (state.label(i) == wanted)
            out.push_back(i);
    return out;
}

int adaptive_bin_capacity(double eps) {
    if (!(eps > 0.0) || eps > 1.0)
        throw InvalidArgument("eps must lie in (0, 1]");
    return ceil_guarded(2.0 / eps);
}

PhaseResult phase_one(const Population& pop, double eps, std::mt19937_64& rng, TestFn fn) {
    const int n = pop.size();
    if (n < 2)
        throw InvalidArgument("need at least 2 individuals");
    if (floor_guarded(eps * n / 2.0) < 1)
        throw EpsilonTooSmall("floor(eps*n/2) < 1: no bins to fill");

    PhaseResult result;
    result.layout = make_phase_one_layout(n, eps, rng);
    InferenceEngine engine(n, {fn, false, std::nullopt});
    run_round_robin(pop, result.layout, fn, result.fragment, engine);
    result.state = engine.state();
    return result;
}

PhaseResult phase_two(const Population& pop, double eps, const BinLayout& phase_one_layout,
                      const KnowledgeState& state, std::mt19937_64& rng, TestFn fn) {
    const int n = pop.size();
    const int b2 = ceil_guarded(eps * n / 2.0);
    const int capacity = adaptive_bin_capacity(eps);

    std::vector<int> known = revealed_individuals(state, fn);
    if (static_cast<int>(known.size()) < b2)
        throw NotEnoughKnownSlackers(
            "phase two needs " + std::to_string(b2) + " identified seeds, have " +
            std::to_string(known.size()));

    // Balanced targets: sizes differ by at most one, never above capacity,
    // and the size multiset depends only on (n, eps).
    std::vector<int> targets(static_cast<std::size_t>(b2), n / b2);
    for (int i = 0; i < n % b2; ++i)
        targets[static_cast<std::size_t>(i)]++;
    if ((n + b2 - 1) / b2 > capacity)
        throw LayoutInfeasible("balanced bin size exceeds capacity"); // cannot happen
    std::shuffle(targets.begin(), targets.end(), rng);

    // Phase-one bin of each individual, for constraint (b).
    std::vector<int> column_of(static_cast<std::size_t>(n), -1);
    for (std::size_t c = 0; c < phase_one_layout.bins.size(); ++c)
        for (int member : phase_one_layout.bins[c])
            column_of[static_cast<std::size_t>(member)] = static_cast<int>(c);

    const int cols = phase_one_layout.bin_count();
    const bool strict = phase_one_layout.max_bin_size() <= b2;

    // Pick the seeds uniformly among the identified individuals.
    std::vector<int> seeds;
    std::sample(known.begin(), known.end(), std::back_inserter(seeds),
                static_cast<std::size_t>(b2), rng);

    std::vector<char> is_seed(static_cast<std::size_t>(n), 0);
    for (int s : seeds)
        is_seed[static_cast<std::size_t>(s)] = 1;

    PhaseTwoProblem problem;
    problem.b2 = b2;
    problem.strict = strict;
    problem.columns.assign(static_cast<std::size_t>(cols), {});
    for (int i = 0; i < n; ++i)
        if (!is_seed[static_cast<std::size_t>(i)])
            problem.columns[static_cast<std::size_t>(column_of[static_cast<std::size_t>(i)])]
                .push_back(i);

    std::vector<std::vector<int>> dealt;
    std::vector<int> seed_at; // seed individual placed in each bin
    constexpr int kGreedyAttempts = 1000;
    constexpr int kSeedPlacements = 25;
    for (int placement = 0; placement < kSeedPlacements && dealt.empty(); ++placement) {
        // Assign one seed to each bin via a random permutation.
        seed_at = seeds;
        std::shuffle(seed_at.begin(), seed_at.end(), rng);
        problem.slots.assign(static_cast<std::size_t>(b2), 0);
        problem.seeded.assign(static_cast<std::size_t>(cols),
                              std::vector<char>(static_cast<std::size_t>(b2), 0));
        for (int b = 0; b < b2; ++b) {
            problem.slots[static_cast<std::size_t>(b)] =
                targets[static_cast<std::size_t>(b)] - 1;
            int col = column_of[static_cast<std::size_t>(seed_at[static_cast<std::size_t>(b)])];
            problem.seeded[static_cast<std::size_t>(col)][static_cast<std::size_t>(b)] = 1;
        }

        int greedy_budget = strict ? kGreedyAttempts / kSeedPlacements : 1;
        for (int attempt = 0; attempt < greedy_budget && dealt.empty(); ++attempt)
            dealt = try_greedy_deal(problem, rng);
        if (dealt.empty() && strict)
            dealt = try_flow_deal(problem, rng);
    }
    if (dealt.empty())
        throw LayoutInfeasible("no phase-two layout satisfies the co-membership rule");

    PhaseResult result;
    result.layout.capacity = capacity;
    result.layout.bins.resize(static_cast<std::size_t>(b2));
    for (int b = 0; b < b2; ++b) {
        std::vector<int>& bin = result.layout.bins[static_cast<std::size_t>(b)];
        bin.push_back(seed_at[static_cast<std::size_t>(b)]);
        bin.insert(bin.end(), dealt[static_cast<std::size_t>(b)].begin(),
                   dealt[static_cast<std::size_t>(b)].end());
    }

    InferenceEngine engine(n, {fn, false, std::nullopt});
    for (int i = 0; i < n; ++i) {
        if (state.label(i) == Label::KnownSlacker)
            engine.seed_label(i, Status::Slacker);
        else if (state.label(i) == Label::KnownWorker)
            engine.seed_label(i, Status::Worker);
    }
    run_round_robin(pop, result.layout, fn, result.fragment, engine);
    result.state = engine.state();
    return result;
}

AdaptiveReport identify_all_known_eps(const Population& pop, double eps, RngSeed seed,
                                      TestFn fn) {
    std::mt19937_64 rng = make_rng(derive_seed(seed, {0x1u}));

    AdaptiveReport report;
    report.seed = seed;
    report.epsilon_history.push_back(eps);

    PhaseResult p1 = phase_one(pop, eps, rng, fn);
    append_transcript(report.transcript, p1.fragment);
    report.phase_shapes.push_back(shape_of(p1.layout, p1.fragment.round_count()));
    KnowledgeState state = p1.state;

    if (!state.all_classified()) {
        PhaseResult p2 = phase_two(pop, eps, p1.layout, state, rng, fn);
        append_transcript(report.transcript, p2.fragment);
        report.phase_shapes.push_back(shape_of(p2.layout, p2.fragment.round_count()));
        state = p2.state;
    }
    if (!state.all_classified())
        throw Error("internal: two-phase run left individuals unclassified");

    report.final_state = std::move(state);
    report.rounds_used = report.transcript.round_count();
    report.tests_used = report.transcript.test_count();
    return report;
}

AdaptiveReport identify_all_unknown_eps(const Population& pop, RngSeed seed, TestFn fn) {
    const int n = pop.size();
    if (n < 2)
        throw InvalidArgument("need at least 2 individuals");
    std::mt19937_64 rng = make_rng(derive_seed(seed, {0x2u}));

    AdaptiveReport report;
    report.seed = seed;

    InferenceEngine engine(n, {fn, false, std::nullopt});
    double eps_estimate = 0.5;
    while (eps_estimate * n >= 2.0 - 1e-9) {
        report.epsilon_history.push_back(eps_estimate);

        PhaseResult p1 = phase_one(pop, eps_estimate, rng, fn);
        for (int r = 0; r < p1.fragment.round_count(); ++r) {
            engine.add_round(p1.fragment.round(r), p1.fragment.outcomes(r));
            report.transcript.add_round(p1.fragment.round(r), p1.fragment.outcomes(r));
        }
        report.phase_shapes.push_back(shape_of(p1.layout, p1.fragment.round_count()));

        if (engine.state().all_classified())
            break;

        // The iteration test counts this phase one's own discoveries; the
        // cumulative engine still keeps every earlier identification for
        // phase two and the final classification.
        int threshold = ceil_guarded(eps_estimate * n / 2.0);
        if (revealed_count(p1.state, fn) >= threshold) {
            PhaseResult p2 = phase_two(pop, eps_estimate, p1.layout, engine.state(), rng, fn);
            for (int r = 0; r < p2.fragment.round_count(); ++r) {
                engine.add_round(p2.fragment.round(r), p2.fragment.outcomes(r));
                report.transcript.add_round(p2.fragment.round(r), p2.fragment.outcomes(r));
            }
            report.phase_shapes.push_back(shape_of(p2.layout, p2.fragment.round_count()));
            break;
        }
        eps_estimate /= 2;
    }

    if (!engine.state().all_classified())
        throw NoSlackersDetectable(
            "estimate fell below 2/n; fewer than two slackers cannot be told from none");

    report.final_state = engine.state();
    report.rounds_used = report.transcript.round_count();
    report.tests_used = report.transcript.test_count();
    return report;
}

} // namespace cpt
