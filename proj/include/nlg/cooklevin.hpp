#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlg/error.hpp"

namespace nlg::cl {

using json = nlohmann::json;
using Var = std::int64_t;  // 1-based variable index; literals are signed

enum Symbol : std::uint8_t { zero = 0, one = 1, blank = 2 };
enum Move : std::uint8_t { left = 0, right = 1, stay = 2 };

struct Transition {
    int next = 0;
    Symbol write = blank;
    Move move = stay;
};

// Single-tape deterministic machine over {0, 1, blank}. delta[q * 3 + symbol].
struct TuringMachine {
    std::vector<std::string> states;
    int start = 0;
    int accept = 0;
    int reject = 0;
    std::vector<Transition> delta;

    int state_count() const { return static_cast<int>(states.size()); }
    const Transition& step(int q, Symbol s) const { return delta[static_cast<std::size_t>(q) * 3 + s]; }
    // Bits needed to write the transition table: 3 Q entries of (state, symbol, move).
    std::uint64_t description_length() const;
};

struct TransitionEntry {
    std::string from;
    Symbol read = blank;
    std::string to;
    Symbol write = blank;
    Move move = stay;
};

// Missing (state, symbol) entries go to reject without moving. Accept and reject are made absorbing.
TuringMachine make_machine(std::vector<std::string> states, const std::string& start, const std::string& accept,
                           const std::string& reject, const std::vector<TransitionEntry>& entries);
TuringMachine machine_from_json(const json& j);
json machine_to_json(const TuringMachine& m);

// Small machines used in tests and the CLI.
TuringMachine always_accept_machine();
TuringMachine always_reject_machine();
// Accepts two-bit inputs whose bits are equal.
TuringMachine equality_machine();
// Accepts inputs whose first two bits have odd parity.
TuringMachine parity_machine();

enum class Outcome { accept, reject, timeout };
const char* outcome_name(Outcome o);

struct Configuration {
    int state = 0;
    int head = 0;
    std::vector<Symbol> tape;
};

struct Run {
    Outcome outcome = Outcome::timeout;
    std::vector<Configuration> tableau;  // times 0..T
};

// Runs T steps on a tape of `width` cells (default max(|input|, T + 1)); the head stays put at the edges.
Run simulate(const TuringMachine& m, const std::vector<std::uint8_t>& input, int T, int width = -1);
std::vector<std::uint8_t> parse_bits(const std::string& s);

// Variable layout. Witness bits take 1..R. Block t (0 <= t <= T) starts at R + 1 + t * B and holds
// Q state bits, W head bits, 3W cell bits (cell p symbol s at 3p + s), then for t < T the read,
// write and move one-hot triples. B = Q + 4W + 9, L = R + T*B + Q + 4W.
struct Layout {
    int R = 0, T = 0, Q = 0, W = 0;
    Var B = 0, L = 0;

    Layout() = default;
    Layout(int witness_bits, int time, int states);

    enum Kind : std::uint8_t { witness, state, head, cell, read, write, move };
    struct Decoded {
        Kind kind = witness;
        int t = 0;
        int a = 0;  // witness position, state, head position, cell position, symbol or move
        int b = 0;  // cell symbol
    };

    Var witness_var(int p) const { return p + 1; }
    Var base(int t) const { return R + 1 + static_cast<Var>(t) * B; }
    Var state_var(int t, int q) const { return base(t) + q; }
    Var head_var(int t, int p) const { return base(t) + Q + p; }
    Var cell_var(int t, int p, int s) const { return base(t) + Q + W + 3 * p + s; }
    Var read_var(int t, int s) const { return base(t) + Q + 4 * W + s; }
    Var write_var(int t, int s) const { return base(t) + Q + 4 * W + 3 + s; }
    Var move_var(int t, int d) const { return base(t) + Q + 4 * W + 6 + d; }
    Decoded decode(Var v) const;
    int clamp(int p, int d) const;
};

// Three signed literals, sorted by variable, padded by repeating the last literal.
using Clause = std::array<Var, 3>;
Clause make_clause(std::vector<Var> lits);

struct Cnf {
    Var num_vars = 0;
    std::vector<Clause> clauses;
    Layout layout;
};

Cnf compile(const TuringMachine& m, int T, int R);
// Clauses of compile(m, T, R) whose variables all lie in {i, j, k}, computed from the layout alone.
std::vector<Clause> clause_access(const TuringMachine& m, int T, int R, Var i, Var j, Var k);

// Tableau bits for the run on `input` (length R), accepting or not.
class TableauRun {
public:
    TableauRun(const TuringMachine& m, int T, const std::vector<std::uint8_t>& input);
    const Layout& layout() const { return layout_; }
    Outcome outcome() const { return run_.outcome; }
    bool bit(Var v) const;
    std::vector<std::uint8_t> assignment() const;

private:
    Layout layout_;
    Run run_;
    std::vector<Transition> steps_;  // transition taken at each time step
    std::vector<std::uint8_t> input_;
};

std::vector<std::uint8_t> witness_to_assignment(const TuringMachine& m, int T, const std::vector<std::uint8_t>& w);

struct CheckResult {
    bool ok = true;
    std::optional<std::size_t> violated;  // index of the first violated clause
};
CheckResult check_assignment(const Cnf& f, const std::vector<std::uint8_t>& a);
bool clause_satisfied(const Clause& c, const std::vector<std::uint8_t>& a);
// Evaluates a clause on the bits of variables listed in `vars` (values in `bits`).
bool clause_satisfied_by(const Clause& c, const std::array<Var, 3>& vars, const std::array<std::uint8_t, 3>& bits);

// First satisfying assignment in lexicographic order (false < true, variable 1 first), by
// backtracking that prunes a branch once a clause is fully assigned and false.
std::optional<std::vector<std::uint8_t>> brute_force_sat(const Cnf& f, Var cap = 24);
// Satisfying assignments extending the fixed prefix, stopping after `limit`.
std::size_t count_extensions(const Cnf& f, const std::vector<std::uint8_t>& prefix, std::size_t limit, Var cap = 24);
// Plain 2^L enumeration for cross-checking tiny formulas.
std::optional<std::vector<std::uint8_t>> enumerate_sat(const Cnf& f);

std::string to_dimacs(const Cnf& f);
std::string clause_text(const Clause& c);
json assignment_to_json(const std::vector<std::uint8_t>& a);

// Machine reading 2P bits (a then b, P bits each, most significant first) and accepting iff
// accept(a, b). States are padded to a count that only depends on P.
TuringMachine truth_table_machine(int P, const std::function<bool(std::uint32_t, std::uint32_t)>& accept);
int truth_table_state_count(int P);

}  // namespace nlg::cl
