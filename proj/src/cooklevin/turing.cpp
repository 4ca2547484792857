#include <algorithm>
#include <map>

#include "nlg/cooklevin.hpp"

namespace nlg::cl {

namespace {

int bits_for(std::uint64_t n) {
    int b = 0;
    while ((std::uint64_t{1} << b) < n) ++b;
    return std::max(b, 1);
}

Symbol symbol_from(const json& j) {
    std::string s = j.is_string() ? j.get<std::string>() : std::to_string(j.get<int>());
    if (s == "0") return zero;
    if (s == "1") return one;
    if (s == "_" || s == "B" || s == "blank") return blank;
    throw ValidationError("unknown tape symbol '" + s + "'");
}

const char* symbol_text(Symbol s) { return s == zero ? "0" : s == one ? "1" : "_"; }

Move move_from(const std::string& s) {
    if (s == "L") return left;
    if (s == "R") return right;
    if (s == "S") return stay;
    throw ValidationError("unknown move '" + s + "'");
}

const char* move_text(Move m) { return m == left ? "L" : m == right ? "R" : "S"; }

}  // namespace

std::uint64_t TuringMachine::description_length() const {
    std::uint64_t q = states.size();
    return 3 * q * static_cast<std::uint64_t>(bits_for(q) + 2 + 2);
}

TuringMachine make_machine(std::vector<std::string> states, const std::string& start, const std::string& accept,
                           const std::string& reject, const std::vector<TransitionEntry>& entries) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (!index.emplace(states[i], static_cast<int>(i)).second)
            throw ValidationError("duplicate state '" + states[i] + "'");
    auto find = [&](const std::string& s) {
        auto it = index.find(s);
        if (it == index.end()) throw ValidationError("unknown state '" + s + "'");
        return it->second;
    };
    TuringMachine m;
    m.states = std::move(states);
    m.start = find(start);
    m.accept = find(accept);
    m.reject = find(reject);
    if (m.accept == m.reject) throw ValidationError("accept and reject states must differ");
    m.delta.assign(m.states.size() * 3, Transition{});
    std::vector<char> seen(m.delta.size(), 0);
    for (std::size_t q = 0; q < m.states.size(); ++q)
        for (int s = 0; s < 3; ++s) m.delta[q * 3 + s] = {m.reject, static_cast<Symbol>(s), stay};
    for (const auto& e : entries) {
        std::size_t k = static_cast<std::size_t>(find(e.from)) * 3 + e.read;
        if (seen[k]) throw ValidationError("two transitions for state '" + e.from + "'");
        seen[k] = 1;
        m.delta[k] = {find(e.to), e.write, e.move};
    }
    for (int h : {m.accept, m.reject})
        for (int s = 0; s < 3; ++s) m.delta[static_cast<std::size_t>(h) * 3 + s] = {h, static_cast<Symbol>(s), stay};
    return m;
}

TuringMachine machine_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("machine must be an object");
    for (const char* k : {"states", "start", "accept", "reject"})
        if (!j.contains(k)) throw ValidationError(std::string("machine is missing '") + k + "'");
    std::vector<TransitionEntry> entries;
    if (j.contains("delta")) {
        for (const auto& row : j.at("delta")) {
            if (!row.is_array() || row.size() != 5)
                throw ValidationError("transition must be [state, symbol, state, symbol, move]");
            entries.push_back({row[0].get<std::string>(), symbol_from(row[1]), row[2].get<std::string>(),
                               symbol_from(row[3]), move_from(row[4].get<std::string>())});
        }
    }
    return make_machine(j.at("states").get<std::vector<std::string>>(), j.at("start").get<std::string>(),
                        j.at("accept").get<std::string>(), j.at("reject").get<std::string>(), entries);
}

json machine_to_json(const TuringMachine& m) {
    json delta = json::array();
    for (std::size_t q = 0; q < m.states.size(); ++q) {
        if (static_cast<int>(q) == m.accept || static_cast<int>(q) == m.reject) continue;
        for (int s = 0; s < 3; ++s) {
            const auto& t = m.delta[q * 3 + s];
            delta.push_back({m.states[q], symbol_text(static_cast<Symbol>(s)), m.states[t.next], symbol_text(t.write),
                             move_text(t.move)});
        }
    }
    return {{"states", m.states},
            {"start", m.states[m.start]},
            {"accept", m.states[m.accept]},
            {"reject", m.states[m.reject]},
            {"delta", delta}};
}

TuringMachine always_accept_machine() {
    return make_machine({"start", "accept", "reject"}, "start", "accept", "reject",
                        {{"start", zero, "accept", zero, stay},
                         {"start", one, "accept", one, stay},
                         {"start", blank, "accept", blank, stay}});
}

TuringMachine always_reject_machine() { return make_machine({"start", "accept", "reject"}, "start", "accept", "reject", {}); }

TuringMachine equality_machine() {
    return make_machine({"start", "q0", "q1", "accept", "reject"}, "start", "accept", "reject",
                        {{"start", zero, "q0", zero, right},
                         {"start", one, "q1", one, right},
                         {"q0", zero, "accept", zero, stay},
                         {"q0", one, "reject", one, stay},
                         {"q1", zero, "reject", zero, stay},
                         {"q1", one, "accept", one, stay}});
}

TuringMachine parity_machine() {
    return make_machine({"start", "q0", "q1", "accept", "reject"}, "start", "accept", "reject",
                        {{"start", zero, "q0", zero, right},
                         {"start", one, "q1", one, right},
                         {"q0", one, "accept", one, stay},
                         {"q0", zero, "reject", zero, stay},
                         {"q1", zero, "accept", zero, stay},
                         {"q1", one, "reject", one, stay}});
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::accept: return "accept";
        case Outcome::reject: return "reject";
        default: return "timeout";
    }
}

std::vector<std::uint8_t> parse_bits(const std::string& s) {
    std::vector<std::uint8_t> out;
    for (char c : s) {
        if (c != '0' && c != '1') throw ValidationError("witness must be a string of 0 and 1");
        out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

Run simulate(const TuringMachine& m, const std::vector<std::uint8_t>& input, int T, int width) {
    if (T < 0) throw ValidationError("time bound must be non-negative");
    if (width < 0) width = std::max(static_cast<int>(input.size()), T + 1);
    if (width < static_cast<int>(input.size()) || width < 1) throw ValidationError("tape narrower than input");
    Configuration c;
    c.state = m.start;
    c.tape.assign(width, blank);
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input[i] > 1) throw ValidationError("input bits must be 0 or 1");
        c.tape[i] = static_cast<Symbol>(input[i]);
    }
    Run run;
    run.tableau.reserve(T + 1);
    run.tableau.push_back(c);
    for (int t = 0; t < T; ++t) {
        const auto& tr = m.step(c.state, c.tape[c.head]);
        c.tape[c.head] = tr.write;
        c.state = tr.next;
        if (tr.move == left && c.head > 0) --c.head;
        if (tr.move == right && c.head + 1 < width) ++c.head;
        run.tableau.push_back(c);
    }
    run.outcome = c.state == m.accept ? Outcome::accept : c.state == m.reject ? Outcome::reject : Outcome::timeout;
    return run;
}

}  // namespace nlg::cl
