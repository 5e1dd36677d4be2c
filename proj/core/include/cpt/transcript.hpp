#pragma once

#include <string>
#include <vector>

#include "cpt/types.hpp"

namespace cpt {

/// Ordered record of executed rounds together with their Boolean outcomes.
class Transcript {
public:
    Transcript() = default;

    /// Appends a round and its outcomes (one Boolean per pair, aligned).
    void add_round(Round round, std::vector<bool> outcomes);

    /// Executes `round` against `pop` and appends the result.
    void add_executed(const Population& pop, Round round, TestFn fn = TestFn::Or);

    int round_count() const { return static_cast<int>(rounds_.size()); }
    const std::vector<Round>& rounds() const { return rounds_; }
    const Round& round(int r) const { return rounds_.at(r); }
    const std::vector<bool>& outcomes(int r) const { return outcomes_.at(r); }

    /// Total number of pairwise tests across all rounds.
    long long test_count() const;

    bool operator==(const Transcript&) const = default;

private:
    std::vector<Round> rounds_;
    std::vector<std::vector<bool>> outcomes_;
};

/// Line-oriented text form, one round per line, each pair as an "a-b"
/// token with a "+" (true) or "-" (false) outcome suffix:
///
///   0-1- 2-3+
///   0-2+ 1-3+
///
/// The format is stable across versions.
std::string serialize_transcript(const Transcript& t);
Transcript parse_transcript(const std::string& text);

/// Same format with the outcome suffix omitted ("0-1 2-3"), used for
/// schedules fixed before any outcome exists.
std::string serialize_schedule(const std::vector<Round>& rounds);
std::vector<Round> parse_schedule(const std::string& text);

} // namespace cpt
