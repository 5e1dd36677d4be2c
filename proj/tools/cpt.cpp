// Command-line front end: single simulations, Monte Carlo experiment
// grids, closed-form analysis tables, and the small-instance verification
// oracle.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error, 3 verification
// mismatch.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpt/adaptive.hpp"
#include "cpt/analysis.hpp"
#include "cpt/bounded.hpp"
#include "cpt/errors.hpp"
#include "cpt/experiment.hpp"
#include "cpt/inference.hpp"
#include "cpt/nonadaptive.hpp"
#include "cpt/rng.hpp"
#include "cpt/transcript.hpp"
#include "cpt/types.hpp"

using nlohmann::json;

namespace {

struct CommonOptions {
    int n = 100;
    double eps = 0.2;
    std::optional<double> delta;
    std::string alg = "random-matching";
    double alpha = 1.0;
    int trials = 100;
    cpt::RngSeed seed = 0;
    std::string out;
    std::string format = "csv";
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw cpt::Error("cannot open output file '" + path + "'");
    file << content;
}

std::string classification_string(const cpt::KnowledgeState& state) {
    std::string out;
    out.reserve(static_cast<std::size_t>(state.size()));
    for (int i = 0; i < state.size(); ++i) {
        switch (state.label(i)) {
        case cpt::Label::Unknown: out += '?'; break;
        case cpt::Label::KnownSlacker: out += 'S'; break;
        case cpt::Label::KnownWorker: out += 'W'; break;
        }
    }
    return out;
}

std::string truth_string(const cpt::Population& pop) {
    std::string out;
    for (int i = 0; i < pop.size(); ++i)
        out += cpt::status_char(pop.status(i));
    return out;
}

std::vector<int> newly_identified_per_round(const cpt::Transcript& t, int n) {
    cpt::InferenceEngine engine(n, {});
    std::vector<int> counts;
    int prev = 0;
    for (int r = 0; r < t.round_count(); ++r) {
        engine.add_round(t.round(r), t.outcomes(r));
        int known = engine.state().known_slacker_count() +
                    engine.state().known_worker_count();
        counts.push_back(known - prev);
        prev = known;
    }
    return counts;
}

struct SimulationResult {
    cpt::Transcript transcript;
    cpt::KnowledgeState state;
    std::vector<double> epsilon_history;
    std::vector<cpt::PhaseShape> phase_shapes;
};

SimulationResult simulate_once(const CommonOptions& opt, const cpt::Population& pop,
                               std::optional<int> k_override) {
    SimulationResult result;
    cpt::Algorithm alg = cpt::parse_algorithm(opt.alg);
    switch (alg) {
    case cpt::Algorithm::AdaptiveKnown: {
        cpt::AdaptiveReport report = cpt::identify_all_known_eps(pop, opt.eps, opt.seed);
        result.transcript = std::move(report.transcript);
        result.state = std::move(report.final_state);
        result.epsilon_history = std::move(report.epsilon_history);
        result.phase_shapes = std::move(report.phase_shapes);
        break;
    }
    case cpt::Algorithm::AdaptiveUnknown: {
        cpt::AdaptiveReport report = cpt::identify_all_unknown_eps(pop, opt.seed);
        result.transcript = std::move(report.transcript);
        result.state = std::move(report.final_state);
        result.epsilon_history = std::move(report.epsilon_history);
        result.phase_shapes = std::move(report.phase_shapes);
        break;
    }
    case cpt::Algorithm::DeterministicCover: {
        cpt::NonadaptiveSchedule schedule =
            cpt::deterministic_cover_schedule(pop.size(), opt.eps);
        for (const cpt::Round& round : schedule.rounds)
            result.transcript.add_executed(pop, round);
        result.state = cpt::propagate(cpt::KnowledgeState(pop.size()), result.transcript,
                                      true, pop.slacker_count());
        break;
    }
    case cpt::Algorithm::RandomMatching: {
        int m = pop.slacker_count();
        int k = k_override ? *k_override
                           : cpt::rounds_for_confidence(pop.size(), m, opt.alpha);
        cpt::NonadaptiveSchedule schedule =
            cpt::random_matching_schedule(pop.size(), k, opt.seed);
        for (const cpt::Round& round : schedule.rounds)
            result.transcript.add_executed(pop, round);
        result.state = cpt::propagate(cpt::KnowledgeState(pop.size()), result.transcript);
        break;
    }
    case cpt::Algorithm::BoundedRounds: {
        double delta = opt.delta ? *opt.delta : 1.0 - opt.eps;
        cpt::BoundedReport report = cpt::identify_bounded(pop, delta, opt.seed);
        result.transcript = std::move(report.base.transcript);
        result.state = std::move(report.base.final_state);
        result.epsilon_history = std::move(report.base.epsilon_history);
        break;
    }
    }
    return result;
}

int run_simulate(const CommonOptions& opt, std::optional<int> k_override) {
    int m;
    if (opt.delta)
        m = opt.n - static_cast<int>(std::llround(*opt.delta * opt.n));
    else
        m = static_cast<int>(std::llround(opt.eps * opt.n));

    auto pop_rng = cpt::make_rng(cpt::derive_seed(opt.seed, {0x10u}));
    cpt::Population pop = cpt::random_population(opt.n, m, pop_rng);

    SimulationResult sim = simulate_once(opt, pop, k_override);

    bool matches = sim.state.all_classified();
    for (int i = 0; matches && i < pop.size(); ++i)
        matches = sim.state.label(i) == cpt::label_for(pop.status(i));

    std::vector<int> newly = newly_identified_per_round(sim.transcript, opt.n);

    if (opt.format == "json") {
        json doc;
        doc["algorithm"] = opt.alg;
        doc["n"] = opt.n;
        doc["eps"] = static_cast<double>(m) / opt.n;
        doc["m"] = m;
        doc["seed"] = opt.seed;
        doc["rounds_used"] = sim.transcript.round_count();
        doc["tests_used"] = sim.transcript.test_count();
        doc["newly_identified_per_round"] = newly;
        doc["epsilon_history"] = sim.epsilon_history;
        doc["classification"] = classification_string(sim.state);
        doc["ground_truth"] = truth_string(pop);
        doc["matches_ground_truth"] = matches;
        json shapes = json::array();
        for (const cpt::PhaseShape& s : sim.phase_shapes)
            shapes.push_back({{"bin_sizes", s.bin_sizes}, {"rounds", s.rounds}});
        doc["phase_shapes"] = shapes;
        json lines = json::array();
        for (int r = 0; r < sim.transcript.round_count(); ++r) {
            cpt::Transcript one;
            one.add_round(sim.transcript.round(r), sim.transcript.outcomes(r));
            std::string line = cpt::serialize_transcript(one);
            if (!line.empty() && line.back() == '\n')
                line.pop_back();
            lines.push_back(line);
        }
        doc["transcript"] = lines;
        write_output(opt.out, doc.dump(2) + "\n");
    } else {
        std::string text;
        text += "algorithm:        " + opt.alg + "\n";
        text += "n:                " + std::to_string(opt.n) + "\n";
        text += "slackers (m):     " + std::to_string(m) + "\n";
        text += "seed:             " + std::to_string(opt.seed) + "\n";
        text += "rounds used:      " + std::to_string(sim.transcript.round_count()) + "\n";
        text += "tests used:       " + std::to_string(sim.transcript.test_count()) + "\n";
        if (!sim.epsilon_history.empty()) {
            text += "eps estimates:    ";
            for (std::size_t i = 0; i < sim.epsilon_history.size(); ++i) {
                if (i)
                    text += ", ";
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%g", sim.epsilon_history[i]);
                text += buf;
            }
            text += "\n";
        }
        if (!sim.phase_shapes.empty()) {
            text += "phase shapes:     ";
            for (std::size_t i = 0; i < sim.phase_shapes.size(); ++i) {
                if (i)
                    text += " | ";
                text += "rounds=" + std::to_string(sim.phase_shapes[i].rounds) + " bins=";
                for (std::size_t j = 0; j < sim.phase_shapes[i].bin_sizes.size(); ++j) {
                    if (j)
                        text += ",";
                    text += std::to_string(sim.phase_shapes[i].bin_sizes[j]);
                }
            }
            text += "\n";
        }
        text += "newly identified: ";
        for (std::size_t i = 0; i < newly.size(); ++i) {
            if (i)
                text += ",";
            text += std::to_string(newly[i]);
        }
        text += "\n";
        text += "classification:   " + classification_string(sim.state) + "\n";
        text += "ground truth:     " + truth_string(pop) + "\n";
        text += std::string("match:            ") + (matches ? "yes" : "no") + "\n";
        text += "transcript:\n";
        text += cpt::serialize_transcript(sim.transcript);
        write_output(opt.out, text);
    }
    return matches ? 0 : 2;
}

int run_experiment_cmd(const CommonOptions& opt, const std::vector<int>& ns,
                       const std::vector<double>& epss,
                       const std::vector<double>& fractions,
                       std::optional<int> k_override, bool plot_data) {
    cpt::ExperimentConfig config;
    config.algorithm = cpt::parse_algorithm(opt.alg);
    config.n_values = ns;
    config.eps_values = epss;
    config.trials = opt.trials;
    config.alpha = opt.alpha;
    config.root_seed = opt.seed;
    if (!fractions.empty())
        config.target_fractions = fractions;
    config.k_override = k_override;

    cpt::ExperimentTable table = cpt::run_experiment(config);

    if (plot_data) {
        write_output(opt.out, cpt::to_plot_data(table));
    } else if (opt.format == "json") {
        json doc;
        doc["algorithm"] = cpt::algorithm_name(table.algorithm);
        doc["seed"] = table.root_seed;
        doc["partial"] = table.partial;
        json rows = json::array();
        for (const cpt::ExperimentRow& row : table.rows)
            rows.push_back({{"n", row.n},
                            {"eps", row.eps},
                            {"fraction", row.fraction},
                            {"mean_tests", row.mean_tests},
                            {"stderr", row.std_error},
                            {"trials", row.trials_counted}});
        doc["rows"] = rows;
        write_output(opt.out, doc.dump(2) + "\n");
    } else {
        write_output(opt.out, cpt::to_csv(table));
    }
    if (table.partial)
        std::cerr << "warning: some trials errored or missed a target fraction\n";
    return 0;
}

int run_analyze(const CommonOptions& opt, std::optional<int> m_opt, std::optional<int> k_opt) {
    int m = m_opt ? *m_opt : static_cast<int>(std::llround(opt.eps * opt.n));
    int k_conf = -1, k_simple = -1;
    if (m >= 2) {
        k_conf = cpt::rounds_for_confidence(opt.n, m, opt.alpha);
        if (m < opt.n)
            k_simple = cpt::rounds_for_confidence_simplified(opt.n, m, opt.alpha);
    }
    int k = k_opt ? *k_opt : std::max(k_conf, 1);

    double coupon = cpt::coupon_packet_expected_uncollected(opt.n, m, k);
    double expected = (m >= 2 && m <= opt.n - 1)
                          ? cpt::expected_unidentified_after_k(opt.n, m, k)
                          : std::nan("");
    double eps = static_cast<double>(m) / opt.n;
    cpt::SurvivalBound survival{std::nan(""), std::nan("")};
    if (eps > 0.0 && eps < 1.0)
        survival = cpt::survival_probability_lower_bound(eps, k);

    if (opt.format == "json") {
        json doc;
        doc["n"] = opt.n;
        doc["m"] = m;
        doc["eps"] = eps;
        doc["alpha"] = opt.alpha;
        doc["k"] = k;
        doc["rounds_for_confidence"] = k_conf;
        doc["rounds_for_confidence_simplified"] = k_simple;
        doc["coupon_packet_expected_uncollected"] = coupon;
        doc["expected_unidentified_after_k"] = expected;
        doc["survival_exact"] = survival.exact;
        doc["survival_lower_bound"] = survival.lower_bound;
        write_output(opt.out, doc.dump(2) + "\n");
    } else if (opt.format == "csv") {
        char buf[256];
        std::string out = "n,m,eps,alpha,k,k_confidence,k_simplified,"
                          "coupon_uncollected,expected_unidentified,"
                          "survival_exact,survival_lower_bound\n";
        std::snprintf(buf, sizeof(buf), "%d,%d,%g,%g,%d,%d,%d,%.8g,%.8g,%.8g,%.8g\n",
                      opt.n, m, eps, opt.alpha, k, k_conf, k_simple, coupon, expected,
                      survival.exact, survival.lower_bound);
        out += buf;
        write_output(opt.out, out);
    } else {
        char buf[128];
        std::string out;
        auto line = [&](const char* label, const std::string& value) {
            std::snprintf(buf, sizeof(buf), "%-34s %s\n", label, value.c_str());
            out += buf;
        };
        auto num = [&](double v) {
            std::snprintf(buf, sizeof(buf), "%.8g", v);
            return std::string(buf);
        };
        line("n", std::to_string(opt.n));
        line("slackers (m)", std::to_string(m));
        line("eps", num(eps));
        line("alpha", num(opt.alpha));
        line("k (rounds analyzed)", std::to_string(k));
        line("rounds for confidence", std::to_string(k_conf));
        line("rounds for confidence (simple)", std::to_string(k_simple));
        line("coupon packet E[uncollected]", num(coupon));
        line("E[unidentified after k]", num(expected));
        line("survival (1-eps)^k", num(survival.exact));
        line("survival lower bound", num(survival.lower_bound));
        write_output(opt.out, out);
    }
    return 0;
}

int run_verify(int n_max, int cases, cpt::RngSeed seed) {
    auto rng = cpt::make_rng(cpt::derive_seed(seed, {0x7eULL}));
    long long checked = 0;

    auto identified_of = [](const cpt::KnowledgeState& state) {
        std::vector<std::pair<int, cpt::Status>> out;
        for (int i = 0; i < state.size(); ++i) {
            if (state.label(i) == cpt::Label::KnownSlacker)
                out.emplace_back(i, cpt::Status::Slacker);
            else if (state.label(i) == cpt::Label::KnownWorker)
                out.emplace_back(i, cpt::Status::Worker);
        }
        return out;
    };

    auto random_round = [&](int n) {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n / 2));
        std::vector<cpt::Pair> pairs;
        for (int i = 0; i < k; ++i)
            pairs.emplace_back(order[2 * i], order[2 * i + 1]);
        return cpt::Round(std::move(pairs));
    };

    auto check_one = [&](const cpt::Population& pop, const cpt::Transcript& t) {
        int n = pop.size();
        auto rules = identified_of(cpt::propagate(cpt::KnowledgeState(n), t));
        auto oracle = cpt::brute_force_identified(t, n);
        if (rules != oracle)
            return false;
        auto rules_counted = identified_of(
            cpt::propagate(cpt::KnowledgeState(n), t, true, pop.slacker_count()));
        auto oracle_counted = cpt::brute_force_identified(t, n, pop.slacker_count());
        if (!std::includes(oracle_counted.begin(), oracle_counted.end(),
                           rules_counted.begin(), rules_counted.end()))
            return false;
        ++checked;
        return true;
    };

    // Exhaustive over populations for small n, random schedules throughout.
    for (int n = 2; n <= n_max; ++n) {
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<cpt::Status> statuses(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                statuses[static_cast<std::size_t>(i)] =
                    (mask >> i) & 1u ? cpt::Status::Worker : cpt::Status::Slacker;
            cpt::Population pop{std::move(statuses)};
            for (int rounds = 1; rounds <= 3; ++rounds) {
                cpt::Transcript t;
                for (int r = 0; r < rounds; ++r)
                    t.add_executed(pop, random_round(n));
                if (!check_one(pop, t)) {
                    std::cerr << "verification mismatch at n=" << n << "\n"
                              << cpt::serialize_transcript(t);
                    return 3;
                }
            }
        }
    }
    for (int c = 0; c < cases; ++c) {
        int n = 2 + static_cast<int>(rng() % 9);
        cpt::Population pop = cpt::random_population(
            n, static_cast<int>(rng() % static_cast<unsigned>(n + 1)), rng);
        cpt::Transcript t;
        int rounds = 1 + static_cast<int>(rng() % 3);
        for (int r = 0; r < rounds; ++r)
            t.add_executed(pop, random_round(n));
        if (!check_one(pop, t)) {
            std::cerr << "verification mismatch at n=" << n << "\n"
                      << cpt::serialize_transcript(t);
            return 3;
        }
    }
    std::cout << "verified " << checked << " instances against the exhaustive oracle\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial pair testing toolkit"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::vector<int> ns = {100};
    std::vector<double> epss = {0.2};
    std::vector<double> fractions;
    std::optional<int> k_override;
    std::optional<int> m_opt;
    std::optional<int> k_opt;
    bool plot_data = false;
    int n_max = 6;
    int cases = 500;

    CLI::App* simulate = app.add_subcommand("simulate", "run one algorithm instance");
    simulate->add_option("--n", opt.n, "population size");
    simulate->add_option("--eps", opt.eps, "slacker fraction");
    simulate->add_option("--delta", opt.delta, "worker fraction (bounded rounds)");
    simulate->add_option("--alg", opt.alg,
                         "adaptive-known|adaptive-unknown|det-cover|random-matching|bounded");
    simulate->add_option("--alpha", opt.alpha, "confidence exponent");
    simulate->add_option("--seed", opt.seed, "root seed");
    simulate->add_option("--k", k_override, "round count (random-matching)");
    simulate->add_option("--out", opt.out, "output path (default stdout)");
    simulate->add_option("--format", opt.format, "text|csv|json")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo grid, CSV output");
    experiment->add_option("--n", ns, "population sizes")->delimiter(',');
    experiment->add_option("--eps", epss, "slacker fractions")->delimiter(',');
    experiment->add_option("--alg", opt.alg, "algorithm");
    experiment->add_option("--trials", opt.trials, "trials per grid cell");
    experiment->add_option("--alpha", opt.alpha, "confidence exponent");
    experiment->add_option("--seed", opt.seed, "root seed");
    experiment->add_option("--fractions", fractions, "target slacker fractions")
        ->delimiter(',');
    experiment->add_option("--k", k_override, "fixed round count (random-matching)");
    experiment->add_option("--out", opt.out, "output path (default stdout)");
    experiment->add_option("--format", opt.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    experiment->add_flag("--plot-data", plot_data, "emit gnuplot-ready columns");

    CLI::App* analyze = app.add_subcommand("analyze", "closed-form planning tables");
    analyze->add_option("--n", opt.n, "population size");
    analyze->add_option("--eps", opt.eps, "slacker fraction");
    analyze->add_option("--m", m_opt, "slacker count (overrides --eps)");
    analyze->add_option("--alpha", opt.alpha, "confidence exponent");
    analyze->add_option("--k", k_opt, "rounds to evaluate at");
    analyze->add_option("--out", opt.out, "output path (default stdout)");
    analyze->add_option("--format", opt.format, "text|csv|json")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    CLI::App* verify = app.add_subcommand("verify", "cross-check inference vs oracle");
    verify->add_option("--n-max", n_max, "exhaustive population sweep bound (<= 10)")
        ->check(CLI::Range(2, 10));
    verify->add_option("--cases", cases, "extra random cases at n <= 10");
    verify->add_option("--seed", opt.seed, "root seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed())
            return run_simulate(opt, k_override);
        if (experiment->parsed())
            return run_experiment_cmd(opt, ns, epss, fractions, k_override, plot_data);
        if (analyze->parsed())
            return run_analyze(opt, m_opt, k_opt);
        if (verify->parsed())
            return run_verify(n_max, cases, opt.seed);
    } catch (const cpt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
