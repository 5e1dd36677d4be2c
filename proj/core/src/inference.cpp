#include "cpt/inference.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "cpt/errors.hpp"

namespace cpt {

KnowledgeState::KnowledgeState(int n)
    : labels_(static_cast<std::size_t>(n), Label::Unknown) {
    if (n < 0)
        throw InvalidArgument("population size must be nonnegative");
}

Label KnowledgeState::label(int i) const {
    if (i < 0 || i >= size())
        throw IndexOutOfRange("label index " + std::to_string(i) + " out of range");
    return labels_[static_cast<std::size_t>(i)];
}

void KnowledgeState::mark(int i, Status s) {
    Label target = label_for(s);
    Label& current = labels_.at(static_cast<std::size_t>(i));
    if (current == target)
        return;
    if (current != Label::Unknown)
        throw ContradictionDetected("label flip attempted for individual " +
                                    std::to_string(i));
    current = target;
    (s == Status::Slacker ? known_slackers_ : known_workers_)++;
}

std::vector<int> KnowledgeState::known_slackers() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (label(i) == Label::KnownSlacker)
            out.push_back(i);
    return out;
}

std::vector<int> KnowledgeState::unknowns() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (label(i) == Label::Unknown)
            out.push_back(i);
    return out;
}

InferenceEngine::InferenceEngine(int n, InferenceOptions options)
    : options_(options), state_(n), adjacency_(static_cast<std::size_t>(n)) {
    if (options_.use_count_constraint) {
        if (!options_.slacker_count)
            throw InvalidArgument("count constraint requires a slacker count");
        if (*options_.slacker_count < 0 || *options_.slacker_count > n)
            throw InvalidArgument("slacker count outside [0, n]");
        apply_count_constraint(); // n == 0 or degenerate counts resolve immediately
    }
}

void InferenceEngine::mark_and_queue(int i, Status s) {
    if (state_.label(i) == label_for(s))
        return;
    state_.mark(i, s);
    worklist_.push_back(i);
}

void InferenceEngine::add_round(const Round& round, const std::vector<bool>& outcomes) {
    if (round.size() != outcomes.size())
        throw InvalidArgument("outcome count does not match pair count");

    const Status revealed = revealed_status(options_.semantics);
    const bool revealing = revealing_outcome(options_.semantics);

    for (std::size_t i = 0; i < round.size(); ++i) {
        const Pair& p = round.pairs()[i];
        if (p.b >= state_.size())
            throw IndexOutOfRange("pair index exceeds population size");
        bool outcome = outcomes[i];
        adjacency_[static_cast<std::size_t>(p.a)].push_back({p.b, outcome});
        adjacency_[static_cast<std::size_t>(p.b)].push_back({p.a, outcome});
        if (outcome == revealing) {
            // R1: the revealing outcome identifies both members.
            if (state_.label(p.a) == label_for(flipped(revealed)) ||
                state_.label(p.b) == label_for(flipped(revealed)))
                throw ContradictionDetected("revealing outcome contradicts a known label");
            mark_and_queue(p.a, revealed);
            mark_and_queue(p.b, revealed);
        } else {
            // R2, forward direction for the members already known.
            if (state_.label(p.a) == label_for(revealed))
                mark_and_queue(p.b, flipped(revealed));
            if (state_.label(p.b) == label_for(revealed))
                mark_and_queue(p.a, flipped(revealed));
        }
    }
    propagate_worklist();
}

void InferenceEngine::propagate_worklist() {
    const Status revealed = revealed_status(options_.semantics);
    const bool revealing = revealing_outcome(options_.semantics);

    while (!worklist_.empty()) {
        int i = worklist_.back();
        worklist_.pop_back();
        bool i_revealed = state_.label(i) == label_for(revealed);
        for (const Edge& e : adjacency_[static_cast<std::size_t>(i)]) {
            if (e.outcome == revealing) {
                // Both endpoints of a revealing pair must carry the
                // revealed status; add_round already marked them.
                if (state_.label(e.partner) == label_for(flipped(revealed)))
                    throw ContradictionDetected("revealing outcome contradicts a known label");
            } else if (i_revealed) {
                // R2 retroactively: every earlier non-revealing partner of
                // a newly revealed individual is cleared.
                mark_and_queue(e.partner, flipped(revealed));
            }
        }
    }
    apply_count_constraint();
    if (!worklist_.empty())
        propagate_worklist();
}

void InferenceEngine::apply_count_constraint() {
    if (!options_.use_count_constraint)
        return;
    int n = state_.size();
    int m = *options_.slacker_count;
    if (state_.known_slacker_count() > m || state_.known_worker_count() > n - m)
        throw ContradictionDetected("known labels exceed the stated class counts");
    if (state_.unknown_count() == 0)
        return;
    if (state_.known_slacker_count() == m) {
        for (int i = 0; i < n; ++i)
            if (state_.label(i) == Label::Unknown)
                mark_and_queue(i, Status::Worker);
    } else if (state_.known_worker_count() == n - m) {
        for (int i = 0; i < n; ++i)
            if (state_.label(i) == Label::Unknown)
                mark_and_queue(i, Status::Slacker);
    }
}

void InferenceEngine::seed_label(int i, Status s) {
    mark_and_queue(i, s);
    propagate_worklist();
}

KnowledgeState propagate(const KnowledgeState& state, const Transcript& transcript,
                         bool use_count_constraint, std::optional<int> slacker_count,
                         TestFn semantics) {
    InferenceEngine engine(state.size(),
                           {semantics, use_count_constraint, slacker_count});
    for (int i = 0; i < state.size(); ++i) {
        if (state.label(i) == Label::KnownSlacker)
            engine.seed_label(i, Status::Slacker);
        else if (state.label(i) == Label::KnownWorker)
            engine.seed_label(i, Status::Worker);
    }
    for (int r = 0; r < transcript.round_count(); ++r)
        engine.add_round(transcript.round(r), transcript.outcomes(r));
    return engine.state();
}

std::vector<std::pair<int, Status>> brute_force_identified(const Transcript& transcript,
                                                           int n,
                                                           std::optional<int> slacker_count,
                                                           TestFn semantics) {
    if (n > 20)
        throw InstanceTooLarge("exhaustive oracle capped at n = 20");
    if (n < 0)
        throw InvalidArgument("population size must be nonnegative");

    // Bit i set <=> individual i is a worker.
    std::vector<std::uint32_t> always_worker_mask, always_slacker_mask;
    std::uint32_t and_mask = ~0u;
    std::uint32_t or_mask = 0u;
    bool any_consistent = false;

    const std::uint32_t limit = n == 0 ? 1u : (1u << n);
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        if (slacker_count &&
            static_cast<int>(std::popcount(mask)) != n - *slacker_count)
            continue;
        bool ok = true;
        for (int r = 0; ok && r < transcript.round_count(); ++r) {
            const Round& round = transcript.round(r);
            const std::vector<bool>& outcomes = transcript.outcomes(r);
            for (std::size_t i = 0; i < round.size(); ++i) {
                const Pair& p = round.pairs()[i];
                bool wa = (mask >> p.a) & 1u;
                bool wb = (mask >> p.b) & 1u;
                bool predicted = semantics == TestFn::Or ? (wa || wb) : (wa && wb);
                if (predicted != outcomes[i]) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok)
            continue;
        any_consistent = true;
        and_mask &= mask;
        or_mask |= mask;
    }

    if (!any_consistent)
        throw NoConsistentAssignment("no status assignment matches the transcript");

    std::vector<std::pair<int, Status>> out;
    for (int i = 0; i < n; ++i) {
        bool in_all = (and_mask >> i) & 1u;   // worker in every consistent assignment
        bool in_some = (or_mask >> i) & 1u;   // worker in at least one
        if (in_all)
            out.emplace_back(i, Status::Worker);
        else if (!in_some)
            out.emplace_back(i, Status::Slacker);
    }
    return out;
}

} // namespace cpt
