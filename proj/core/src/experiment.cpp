#include "cpt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "cpt/adaptive.hpp"
#include "cpt/bounded.hpp"
#include "cpt/errors.hpp"
#include "cpt/inference.hpp"
#include "cpt/nonadaptive.hpp"
#include "cpt/scheduling.hpp"

namespace cpt {

std::string algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::AdaptiveKnown: return "adaptive-known";
    case Algorithm::AdaptiveUnknown: return "adaptive-unknown";
    case Algorithm::DeterministicCover: return "det-cover";
    case Algorithm::RandomMatching: return "random-matching";
    case Algorithm::BoundedRounds: return "bounded";
    }
    throw InvalidArgument("unknown algorithm");
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "adaptive-known") return Algorithm::AdaptiveKnown;
    if (name == "adaptive-unknown") return Algorithm::AdaptiveUnknown;
    if (name == "det-cover") return Algorithm::DeterministicCover;
    if (name == "random-matching") return Algorithm::RandomMatching;
    if (name == "bounded") return Algorithm::BoundedRounds;
    throw InvalidArgument("unknown algorithm '" + name + "'");
}

namespace {

/// Walks the rounds through inference, recording the cumulative test count
/// whenever a target fraction of the true slackers becomes identified.
class FractionTracker {
public:
    FractionTracker(int slacker_count, const std::vector<double>& fractions)
        : m_(slacker_count), fractions_(fractions) {
        std::sort(fractions_.begin(), fractions_.end());
        advance(0, 0); // m == 0 satisfies every fraction up front
    }

    void advance(int known_slackers, long long cumulative_tests) {
        while (next_ < fractions_.size() &&
               static_cast<double>(known_slackers) >=
                   fractions_[next_] * m_ - 1e-9) {
            reached_[fractions_[next_]] = cumulative_tests;
            ++next_;
        }
    }

    bool done() const { return next_ == fractions_.size(); }
    const std::map<double, long long>& reached() const { return reached_; }

private:
    int m_;
    std::vector<double> fractions_;
    std::size_t next_ = 0;
    std::map<double, long long> reached_;
};

TrialMetrics metrics_from_transcript(const Transcript& t, const Population& pop,
                                     const ExperimentConfig& config, bool use_count) {
    TrialMetrics metrics;
    FractionTracker tracker(pop.slacker_count(), config.target_fractions);
    InferenceEngine engine(pop.size(),
                           {TestFn::Or, use_count,
                            use_count ? std::optional<int>(pop.slacker_count())
                                      : std::nullopt});
    long long tests = 0;
    for (int r = 0; r < t.round_count(); ++r) {
        engine.add_round(t.round(r), t.outcomes(r));
        tests += static_cast<long long>(t.round(r).size());
        tracker.advance(engine.state().known_slacker_count(), tests);
    }
    metrics.tests_to_fraction = tracker.reached();
    metrics.rounds_used = t.round_count();
    metrics.tests_used = tests;
    metrics.fully_identified = engine.state().all_classified();
    return metrics;
}

/// Random matching executed round by round so completion can stop it.
TrialMetrics run_random_matching(const ExperimentConfig& config, const Population& pop,
                                 RngSeed trial_seed) {
    const int n = pop.size();
    const int m = pop.slacker_count();

    int cap;
    if (config.k_override) {
        cap = *config.k_override;
    } else if (m >= 2 && m < n) {
        cap = std::min(config.max_rounds_cap,
                       20 * rounds_for_confidence(n, m, config.alpha) + 50);
    } else {
        cap = std::min(config.max_rounds_cap, 4 * n + 50);
    }

    TrialMetrics metrics;
    FractionTracker tracker(m, config.target_fractions);
    InferenceEngine engine(n, {TestFn::Or, false, std::nullopt});
    std::mt19937_64 rng = make_rng(derive_seed(trial_seed, {0x20u}));

    std::vector<int> everyone(static_cast<std::size_t>(n));
    std::iota(everyone.begin(), everyone.end(), 0);

    long long tests = 0;
    int rounds = 0;
    while (rounds < cap) {
        Round round = random_perfect_matching(everyone, rng);
        std::vector<bool> outcomes = execute_round(pop, round, TestFn::Or);
        engine.add_round(round, outcomes);
        tests += static_cast<long long>(round.size());
        ++rounds;
        tracker.advance(engine.state().known_slacker_count(), tests);
        if (!config.k_override && engine.state().all_classified())
            break;
    }
    metrics.tests_to_fraction = tracker.reached();
    metrics.rounds_used = rounds;
    metrics.tests_used = tests;
    metrics.fully_identified = engine.state().all_classified();
    return metrics;
}

} // namespace

TrialMetrics run_trial(const ExperimentConfig& config, int n, double eps, int trial_index) {
    const int m = static_cast<int>(std::llround(eps * n));
    const RngSeed trial_seed =
        derive_seed(config.root_seed,
                    {static_cast<std::uint64_t>(config.algorithm),
                     static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m),
                     static_cast<std::uint64_t>(trial_index)});

    std::mt19937_64 pop_rng = make_rng(derive_seed(trial_seed, {0x10u}));
    Population pop = random_population(n, m, pop_rng);
    const double exact_eps = n == 0 ? 0.0 : static_cast<double>(m) / n;

    try {
        switch (config.algorithm) {
        case Algorithm::RandomMatching:
            return run_random_matching(config, pop, trial_seed);
        case Algorithm::AdaptiveKnown: {
            AdaptiveReport report = identify_all_known_eps(pop, exact_eps, trial_seed);
            return metrics_from_transcript(report.transcript, pop, config, false);
        }
        case Algorithm::AdaptiveUnknown: {
            AdaptiveReport report = identify_all_unknown_eps(pop, trial_seed);
            return metrics_from_transcript(report.transcript, pop, config, false);
        }
        case Algorithm::DeterministicCover: {
            NonadaptiveSchedule schedule = deterministic_cover_schedule(n, exact_eps);
            Transcript t;
            for (const Round& round : schedule.rounds)
                t.add_executed(pop, round);
            // The cover scheme assumes the slacker count is known up front.
            return metrics_from_transcript(t, pop, config, true);
        }
        case Algorithm::BoundedRounds: {
            BoundedReport report = identify_bounded(pop, 1.0 - exact_eps, trial_seed);
            return metrics_from_transcript(report.base.transcript, pop, config, false);
        }
        }
        throw InvalidArgument("unknown algorithm");
    } catch (const Error& e) {
        TrialMetrics metrics;
        metrics.errored = true;
        metrics.error = e.what();
        return metrics;
    }
}

ExperimentTable run_experiment(const ExperimentConfig& config) {
    if (config.trials < 1)
        throw InvalidArgument("need at least one trial");

    ExperimentTable table;
    table.algorithm = config.algorithm;
    table.root_seed = config.root_seed;

    std::vector<double> fractions = config.target_fractions;
    std::sort(fractions.begin(), fractions.end());

    for (int n : config.n_values) {
        for (double eps : config.eps_values) {
            std::map<double, std::vector<long long>> samples;
            for (int trial = 0; trial < config.trials; ++trial) {
                TrialMetrics metrics = run_trial(config, n, eps, trial);
                if (metrics.errored) {
                    table.partial = true;
                    continue;
                }
                for (double f : fractions) {
                    auto it = metrics.tests_to_fraction.find(f);
                    if (it == metrics.tests_to_fraction.end())
                        table.partial = true;
                    else
                        samples[f].push_back(it->second);
                }
            }
            for (double f : fractions) {
                const std::vector<long long>& xs = samples[f];
                ExperimentRow row;
                row.n = n;
                row.eps = eps;
                row.fraction = f;
                row.trials_counted = static_cast<long long>(xs.size());
                if (!xs.empty()) {
                    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
                                  static_cast<double>(xs.size());
                    double var = 0.0;
                    for (long long x : xs)
                        var += (x - mean) * (x - mean);
                    row.mean_tests = mean;
                    row.std_error = xs.size() > 1
                                        ? std::sqrt(var / (static_cast<double>(xs.size()) - 1.0) /
                                                    static_cast<double>(xs.size()))
                                        : 0.0;
                }
                table.rows.push_back(row);
            }
        }
    }
    return table;
}

namespace {

std::string format_double(double x, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, x);
    return buf;
}

std::string format_row(const ExperimentTable& table, const ExperimentRow& row, char sep) {
    std::string out;
    out += algorithm_name(table.algorithm);
    out += sep;
    out += std::to_string(row.n);
    out += sep;
    out += format_double(row.eps, "%g");
    out += sep;
    out += format_double(row.fraction, "%g");
    out += sep;
    out += format_double(row.mean_tests, "%.4f");
    out += sep;
    out += format_double(row.std_error, "%.4f");
    out += sep;
    out += std::to_string(row.trials_counted);
    out += sep;
    out += std::to_string(table.root_seed);
    out += '\n';
    return out;
}

} // namespace

std::string to_csv(const ExperimentTable& table) {
    std::string out = "algorithm,n,eps,fraction,mean_tests,stderr,trials,seed\n";
    for (const ExperimentRow& row : table.rows)
        out += format_row(table, row, ',');
    return out;
}

std::string to_plot_data(const ExperimentTable& table) {
    std::string out = "# algorithm n eps fraction mean_tests stderr trials seed\n";
    for (const ExperimentRow& row : table.rows)
        out += format_row(table, row, ' ');
    return out;
}

} // namespace cpt
