#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cpt/transcript.hpp"
#include "cpt/types.hpp"

namespace cpt {

enum class Label : std::uint8_t { Unknown = 0, KnownSlacker = 1, KnownWorker = 2 };

inline Label label_for(Status s) {
    return s == Status::Slacker ? Label::KnownSlacker : Label::KnownWorker;
}

/// Per-individual classification derived from test outcomes. Labels never
/// regress: once known, an individual stays known with the same status.
class KnowledgeState {
public:
    KnowledgeState() = default;
    explicit KnowledgeState(int n);

    int size() const { return static_cast<int>(labels_.size()); }
    Label label(int i) const;
    const std::vector<Label>& labels() const { return labels_; }

    int known_slacker_count() const { return known_slackers_; }
    int known_worker_count() const { return known_workers_; }
    int unknown_count() const { return size() - known_slackers_ - known_workers_; }
    bool all_classified() const { return unknown_count() == 0; }

    bool is_known(int i) const { return label(i) != Label::Unknown; }

    /// Marks individual i as having status s. Throws ContradictionDetected
    /// on an attempt to flip an already-known label.
    void mark(int i, Status s);

    std::vector<int> known_slackers() const;
    std::vector<int> unknowns() const;

    bool operator==(const KnowledgeState&) const = default;

private:
    std::vector<Label> labels_;
    int known_slackers_ = 0;
    int known_workers_ = 0;
};

/// Options for rule-based inference. The count constraint is opt-in: the
/// identification guarantees of the scheduling algorithms are established
/// with the two pairing rules alone, and side information is kept out of
/// them by default.
struct InferenceOptions {
    TestFn semantics = TestFn::Or;
    bool use_count_constraint = false;
    std::optional<int> slacker_count; // required when use_count_constraint
};

/// Incremental fixpoint engine for the two inference rules (stated here
/// for OR semantics; AND swaps the roles of the two statuses):
///
///   R1: a false outcome reveals both members as slackers;
///   R2: a true outcome whose one member is a known slacker reveals the
///       other member as a worker.
///
/// Rules fire retroactively: identifying a slacker re-examines every pair
/// it ever appeared in. With the count constraint enabled, saturating
/// either class marks all remaining individuals as the other class.
///
/// Throws ContradictionDetected when outcomes are inconsistent with the
/// oracle model (corrupted transcript or wrong slacker_count).
class InferenceEngine {
public:
    InferenceEngine(int n, InferenceOptions options = {});

    /// Feeds one executed round and propagates to fixpoint.
    void add_round(const Round& round, const std::vector<bool>& outcomes);

    /// Injects an externally known label (e.g. carried over from an earlier
    /// transcript) and propagates its consequences.
    void seed_label(int i, Status s);

    const KnowledgeState& state() const { return state_; }
    const InferenceOptions& options() const { return options_; }

private:
    struct Edge {
        int partner;
        bool outcome;
    };

    void mark_and_queue(int i, Status s);
    void propagate_worklist();
    void apply_count_constraint();

    InferenceOptions options_;
    KnowledgeState state_;
    std::vector<std::vector<Edge>> adjacency_;
    std::vector<int> worklist_;
};

/// One-shot form: returns the fixpoint of the rules over the whole
/// transcript starting from `state`.
KnowledgeState propagate(const KnowledgeState& state, const Transcript& transcript,
                         bool use_count_constraint = false,
                         std::optional<int> slacker_count = std::nullopt,
                         TestFn semantics = TestFn::Or);

/// Exhaustive consistency oracle for small instances (n <= 20).
///
/// Enumerates every status assignment consistent with all outcomes
/// (restricted to exactly `slacker_count` slackers when given) and returns
/// the individuals whose status agrees across all of them, sorted by index.
///
/// Throws InstanceTooLarge for n > 20 and NoConsistentAssignment when the
/// transcript rules out every assignment.
std::vector<std::pair<int, Status>> brute_force_identified(
    const Transcript& transcript, int n,
    std::optional<int> slacker_count = std::nullopt,
    TestFn semantics = TestFn::Or);

} // namespace cpt
