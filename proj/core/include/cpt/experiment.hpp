#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpt/rng.hpp"
#include "cpt/transcript.hpp"
#include "cpt/types.hpp"

namespace cpt {

enum class Algorithm : std::uint8_t {
    AdaptiveKnown,
    AdaptiveUnknown,
    DeterministicCover,
    RandomMatching,
    BoundedRounds,
};

std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

/// Monte Carlo experiment over a (n, eps) grid. Per-trial seeds derive
/// deterministically from (root_seed, algorithm, n, slacker count, trial
/// index), so the whole experiment is a pure function of its config.
struct ExperimentConfig {
    Algorithm algorithm = Algorithm::RandomMatching;
    std::vector<int> n_values;
    std::vector<double> eps_values;
    int trials = 100;
    double alpha = 1.0;
    RngSeed root_seed = 0;
    /// Slacker fractions whose first-identification test counts are recorded.
    std::vector<double> target_fractions = {0.5, 0.8, 0.9, 1.0};
    /// RandomMatching: fixed round count. Unset means run until the whole
    /// population is classified (bounded by a generous cap).
    std::optional<int> k_override;
    int max_rounds_cap = 100000;
};

struct TrialMetrics {
    /// Cumulative test count at the end of the round in which each target
    /// fraction of the true slackers first became identified.
    std::map<double, long long> tests_to_fraction;
    int rounds_used = 0;
    long long tests_used = 0;
    bool fully_identified = false;
    bool errored = false;
    std::string error;
};

/// Runs one trial. The population places exactly round(eps*n) slackers by
/// a seeded uniform permutation; the algorithm's transcript is replayed
/// round by round through inference to record fraction crossings.
TrialMetrics run_trial(const ExperimentConfig& config, int n, double eps, int trial_index);

struct ExperimentRow {
    int n = 0;
    double eps = 0.0;
    double fraction = 0.0;
    double mean_tests = 0.0;
    double std_error = 0.0;
    long long trials_counted = 0;
};

struct ExperimentTable {
    Algorithm algorithm = Algorithm::RandomMatching;
    RngSeed root_seed = 0;
    std::vector<ExperimentRow> rows;
    /// Set when some trial errored or missed a target fraction.
    bool partial = false;
};

ExperimentTable run_experiment(const ExperimentConfig& config);

/// CSV with header: algorithm,n,eps,fraction,mean_tests,stderr,trials,seed
std::string to_csv(const ExperimentTable& table);

/// Gnuplot-ready whitespace-separated columns (same fields, '#' header).
std::string to_plot_data(const ExperimentTable& table);

} // namespace cpt
