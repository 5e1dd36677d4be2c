#include "cpt/transcript.hpp"

#include <sstream>

#include "cpt/errors.hpp"

namespace cpt {

void Transcript::add_round(Round round, std::vector<bool> outcomes) {
    if (round.size() != outcomes.size())
        throw InvalidArgument("outcome count does not match pair count");
    rounds_.push_back(std::move(round));
    outcomes_.push_back(std::move(outcomes));
}

void Transcript::add_executed(const Population& pop, Round round, TestFn fn) {
    std::vector<bool> outcomes = execute_round(pop, round, fn);
    rounds_.push_back(std::move(round));
    outcomes_.push_back(std::move(outcomes));
}

long long Transcript::test_count() const {
    long long total = 0;
    for (const Round& r : rounds_)
        total += static_cast<long long>(r.size());
    return total;
}

namespace {

void append_round(std::string& out, const Round& round, const std::vector<bool>* outcomes) {
    for (std::size_t i = 0; i < round.size(); ++i) {
        if (i != 0)
            out += ' ';
        const Pair& p = round.pairs()[i];
        out += std::to_string(p.a);
        out += '-';
        out += std::to_string(p.b);
        if (outcomes)
            out += (*outcomes)[i] ? '+' : '-';
    }
    out += '\n';
}

struct ParsedLine {
    std::vector<Pair> pairs;
    std::vector<bool> outcomes;
    bool has_outcomes = false;
};

ParsedLine parse_line(const std::string& line) {
    ParsedLine parsed;
    std::istringstream in(line);
    std::string token;
    while (in >> token) {
        std::size_t dash = token.find('-', 1); // skip a leading '-' of a negative index
        if (dash == std::string::npos)
            throw ParseError("malformed pair token '" + token + "'");
        bool outcome = false;
        bool has_outcome = false;
        char last = token.back();
        std::string bpart = token.substr(dash + 1);
        if (last == '+' || (last == '-' && bpart.size() > 1)) {
            has_outcome = true;
            outcome = last == '+';
            bpart.pop_back();
        }
        try {
            int a = std::stoi(token.substr(0, dash));
            int b = std::stoi(bpart);
            parsed.pairs.emplace_back(a, b);
        } catch (const std::exception&) {
            throw ParseError("malformed pair token '" + token + "'");
        }
        parsed.outcomes.push_back(outcome);
        if (has_outcome)
            parsed.has_outcomes = true;
        else if (parsed.has_outcomes)
            throw ParseError("mixed outcome/no-outcome tokens in '" + line + "'");
    }
    return parsed;
}

} // namespace

std::string serialize_transcript(const Transcript& t) {
    std::string out;
    for (int r = 0; r < t.round_count(); ++r)
        append_round(out, t.round(r), &t.outcomes(r));
    return out;
}

Transcript parse_transcript(const std::string& text) {
    Transcript t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        ParsedLine parsed = parse_line(line);
        if (!parsed.has_outcomes && !parsed.pairs.empty())
            throw ParseError("transcript line without outcomes: '" + line + "'");
        t.add_round(Round(std::move(parsed.pairs)), std::move(parsed.outcomes));
    }
    return t;
}

std::string serialize_schedule(const std::vector<Round>& rounds) {
    std::string out;
    for (const Round& r : rounds)
        append_round(out, r, nullptr);
    return out;
}

std::vector<Round> parse_schedule(const std::string& text) {
    std::vector<Round> rounds;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        ParsedLine parsed = parse_line(line);
        if (parsed.has_outcomes)
            throw ParseError("schedule line carries outcomes: '" + line + "'");
        rounds.emplace_back(std::move(parsed.pairs));
    }
    return rounds;
}

} // namespace cpt
