#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>

#include "nlg/cooklevin.hpp"

using namespace nlg;
using namespace nlg::cl;

namespace {

std::vector<std::uint8_t> bits(std::initializer_list<int> b) { return {b.begin(), b.end()}; }

std::set<Var> vars_of(const Clause& c) { return {std::llabs(c[0]), std::llabs(c[1]), std::llabs(c[2])}; }

// Random 3-CNF over n variables.
Cnf random_cnf(int n, int m, std::mt19937& rng) {
    Cnf f;
    f.num_vars = n;
    std::uniform_int_distribution<int> var(1, n), sign(0, 1), width(1, 3);
    for (int i = 0; i < m; ++i) {
        std::vector<Var> lits;
        int w = width(rng);
        for (int k = 0; k < w; ++k) lits.push_back(sign(rng) ? var(rng) : -var(rng));
        std::sort(lits.begin(), lits.end(), [](Var a, Var b) { return std::llabs(a) < std::llabs(b); });
        bool taut = false;
        for (std::size_t k = 1; k < lits.size(); ++k)
            if (lits[k] == -lits[k - 1]) taut = true;
        if (!taut) f.clauses.push_back(make_clause(lits));
    }
    return f;
}

std::size_t count_all(const Cnf& f, const std::vector<std::uint8_t>& prefix) {
    std::size_t n = 0;
    std::vector<std::uint8_t> a(static_cast<std::size_t>(f.num_vars));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << f.num_vars); ++x) {
        for (Var v = 1; v <= f.num_vars; ++v) a[v - 1] = x >> (v - 1) & 1;
        if (!std::equal(prefix.begin(), prefix.end(), a.begin())) continue;
        bool ok = true;
        for (const auto& c : f.clauses) {
            bool sat = false;
            for (Var l : c) sat |= (a[std::llabs(l) - 1] != 0) == (l > 0);
            ok &= sat;
        }
        n += ok;
    }
    return n;
}

}  // namespace

TEST_CASE("machines run as expected") {
    auto eq = equality_machine();
    CHECK(simulate(eq, bits({0, 0}), 2).outcome == Outcome::accept);
    CHECK(simulate(eq, bits({1, 1}), 2).outcome == Outcome::accept);
    CHECK(simulate(eq, bits({0, 1}), 2).outcome == Outcome::reject);
    CHECK(simulate(eq, bits({1, 0}), 2).outcome == Outcome::reject);
    CHECK(simulate(eq, bits({0, 0}), 1).outcome == Outcome::timeout);
    CHECK(simulate(always_accept_machine(), {}, 1).outcome == Outcome::accept);
    CHECK(simulate(always_reject_machine(), bits({1}), 3).outcome == Outcome::reject);
    auto par = parity_machine();
    CHECK(simulate(par, bits({0, 1}), 2).outcome == Outcome::accept);
    CHECK(simulate(par, bits({1, 1}), 2).outcome == Outcome::reject);

    // Head stays at the left edge.
    auto lefty = make_machine({"s", "a", "r"}, "s", "a", "r", {{"s", zero, "s", one, left}});
    auto run = simulate(lefty, bits({0}), 3);
    CHECK(run.tableau[1].head == 0);
    CHECK(run.tableau[1].tape[0] == one);
    CHECK(run.outcome == Outcome::reject);
}

TEST_CASE("machine json round trip and defaults") {
    auto eq = equality_machine();
    auto back = machine_from_json(machine_to_json(eq));
    CHECK(back.states == eq.states);
    for (std::size_t i = 0; i < eq.delta.size(); ++i) {
        CHECK(back.delta[i].next == eq.delta[i].next);
        CHECK(back.delta[i].write == eq.delta[i].write);
        CHECK(back.delta[i].move == eq.delta[i].move);
    }
    // Blank under start has no entry: reject and stay.
    const auto& t = eq.step(eq.start, blank);
    CHECK(t.next == eq.reject);
    CHECK(t.move == stay);
    CHECK_THROWS_AS(machine_from_json(json{{"states", {"a"}}}), ValidationError);
    CHECK_THROWS_AS(machine_from_json(json::parse(R"({"states":["s","a","r"],"start":"s","accept":"a","reject":"r",
        "delta":[["s","0","x","0","R"]]})")),
                    ValidationError);
    CHECK_THROWS_AS(machine_from_json(json::parse(R"({"states":["s","a","r"],"start":"s","accept":"a","reject":"r",
        "delta":[["s","0","a","0","U"]]})")),
                    ValidationError);
}

TEST_CASE("layout decodes every variable") {
    Layout lay(2, 3, 5);
    CHECK(lay.W == 4);
    CHECK(lay.B == 5 + 16 + 9);
    CHECK(lay.L == 2 + 3 * 30 + 5 + 16);
    std::set<Var> seen;
    auto expect = [&](Var v, Layout::Kind k, int t, int a, int b) {
        auto d = lay.decode(v);
        CHECK(d.kind == k);
        CHECK(d.t == t);
        CHECK(d.a == a);
        CHECK(d.b == b);
        CHECK(seen.insert(v).second);
    };
    for (int p = 0; p < 2; ++p) expect(lay.witness_var(p), Layout::witness, 0, p, 0);
    for (int t = 0; t <= 3; ++t) {
        for (int q = 0; q < 5; ++q) expect(lay.state_var(t, q), Layout::state, t, q, 0);
        for (int p = 0; p < 4; ++p) expect(lay.head_var(t, p), Layout::head, t, p, 0);
        for (int p = 0; p < 4; ++p)
            for (int s = 0; s < 3; ++s) expect(lay.cell_var(t, p, s), Layout::cell, t, p, s);
        if (t == 3) continue;
        for (int s = 0; s < 3; ++s) {
            expect(lay.read_var(t, s), Layout::read, t, s, 0);
            expect(lay.write_var(t, s), Layout::write, t, s, 0);
            expect(lay.move_var(t, s), Layout::move, t, s, 0);
        }
    }
    CHECK(static_cast<Var>(seen.size()) == lay.L);
    CHECK(*seen.rbegin() == lay.L);
    CHECK_THROWS_AS(lay.decode(lay.L + 1), ValidationError);
    CHECK_THROWS_AS(lay.decode(0), ValidationError);
}

TEST_CASE("clause access matches the compiled formula on every triple") {
    for (int T : {0, 2})
    for (auto m : {equality_machine(), parity_machine(), always_accept_machine()}) {
        const int R = 2;
        auto f = compile(m, T, R);
        CHECK(f.num_vars == f.layout.L);
        std::set<Clause> all(f.clauses.begin(), f.clauses.end());
        CHECK(all.size() == f.clauses.size());
        for (const auto& c : f.clauses) {
            auto vs = vars_of(c);
            std::vector<Var> v(vs.begin(), vs.end());
            while (v.size() < 3) v.push_back(v.back());
            auto got = clause_access(m, T, R, v[0], v[1], v[2]);
            CHECK(std::find(got.begin(), got.end(), c) != got.end());
        }
        const Var L = f.num_vars;
        std::size_t checked = 0, mismatches = 0;
        for (Var i = 1; i <= L; ++i)
            for (Var j = i; j <= L; ++j)
                for (Var k = j; k <= L; ++k) {
                    std::set<Var> s{i, j, k};
                    std::vector<Clause> want;
                    for (const auto& c : f.clauses) {
                        auto vs = vars_of(c);
                        if (std::includes(s.begin(), s.end(), vs.begin(), vs.end())) want.push_back(c);
                    }
                    std::sort(want.begin(), want.end());
                    mismatches += clause_access(m, T, R, i, j, k) != want;
                    ++checked;
                }
        CHECK(mismatches == 0);
        CHECK(checked == static_cast<std::size_t>(L * (L + 1) * (L + 2) / 6));
    }
}

TEST_CASE("tableau of an accepting run satisfies the formula") {
    auto eq = equality_machine();
    auto f = compile(eq, 2, 2);
    for (auto w : {bits({0, 0}), bits({1, 1})}) {
        auto a = witness_to_assignment(eq, 2, w);
        CHECK(check_assignment(f, a).ok);
        CHECK(count_extensions(f, w, 2, 200) == 1);
    }
    for (auto w : {bits({0, 1}), bits({1, 0})}) {
        CHECK_THROWS_AS(witness_to_assignment(eq, 2, w), ValidationError);
        TableauRun run(eq, 2, w);
        CHECK(run.outcome() == Outcome::reject);
        auto r = check_assignment(f, run.assignment());
        CHECK_FALSE(r.ok);
        // Only the acceptance clause fails.
        CHECK(*r.violated == f.clauses.size() - 1);
        CHECK(count_extensions(f, w, 2, 200) == 0);
    }
    // Longer time bound keeps the accept state.
    auto f4 = compile(eq, 4, 2);
    CHECK(check_assignment(f4, witness_to_assignment(eq, 4, bits({1, 1}))).ok);
    CHECK(count_extensions(f4, bits({1, 1}), 2, 500) == 1);
}

TEST_CASE("brute force finds the lexicographically first witness") {
    auto eq = equality_machine();
    auto f = compile(eq, 2, 2);
    CHECK_THROWS_AS(brute_force_sat(f), ValidationError);
    auto sol = brute_force_sat(f, 200);
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == 0);
    CHECK((*sol)[1] == 0);
    CHECK(*sol == witness_to_assignment(eq, 2, bits({0, 0})));

    auto neq = make_machine({"start", "q0", "q1", "accept", "reject"}, "start", "accept", "reject",
                            {{"start", zero, "q0", zero, right},
                             {"start", one, "q1", one, right},
                             {"q0", one, "accept", one, stay},
                             {"q1", zero, "accept", zero, stay}});
    auto g = compile(neq, 2, 2);
    auto s2 = brute_force_sat(g, 200);
    REQUIRE(s2.has_value());
    CHECK((*s2)[0] == 0);
    CHECK((*s2)[1] == 1);

    CHECK_FALSE(brute_force_sat(compile(always_reject_machine(), 2, 2), 200).has_value());
    CHECK(brute_force_sat(compile(always_accept_machine(), 1, 0), 200).has_value());
}

TEST_CASE("backtracking agrees with plain enumeration") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 3 + trial % 10;
        auto f = random_cnf(n, 2 + trial % 25, rng);
        auto a = brute_force_sat(f);
        auto b = enumerate_sat(f);
        CHECK(a.has_value() == b.has_value());
        if (a && b) CHECK(*a == *b);
        CHECK(count_extensions(f, {}, 1u << 20) == count_all(f, {}));
        std::vector<std::uint8_t> prefix{1, 0};
        CHECK(count_extensions(f, prefix, 1u << 20) == count_all(f, prefix));
    }
}

TEST_CASE("dimacs export") {
    Cnf f;
    f.num_vars = 3;
    f.clauses = {make_clause({1, -2}), make_clause({3})};
    CHECK(to_dimacs(f) == "p cnf 3 2\n1 -2 0\n3 0\n");
    CHECK(make_clause({-3, 1, 2}) == Clause{1, 2, -3});
    CHECK(assignment_to_json({1, 0, 1}) == "101");
}

TEST_CASE("truth table machines decide their table within 2P steps") {
    CHECK(truth_table_state_count(1) == 5);
    CHECK(truth_table_state_count(2) == 2 + 1 + 2 + 4 + 2);
    std::mt19937 rng(3);
    for (int P = 1; P <= 3; ++P) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> table(std::size_t{1} << (2 * P));
            for (auto& x : table) x = static_cast<int>(rng() % 2);
            if (trial == 0) std::fill(table.begin(), table.end(), 1);
            if (trial == 1) std::fill(table.begin(), table.end(), 0);
            auto m = truth_table_machine(P, [&](std::uint32_t a, std::uint32_t b) { return table[a << P | b] != 0; });
            CHECK(m.state_count() == truth_table_state_count(P));
            for (std::uint32_t a = 0; a < (1u << P); ++a)
                for (std::uint32_t b = 0; b < (1u << P); ++b) {
                    std::vector<std::uint8_t> in;
                    for (int i = P - 1; i >= 0; --i) in.push_back(a >> i & 1);
                    for (int i = P - 1; i >= 0; --i) in.push_back(b >> i & 1);
                    auto out = simulate(m, in, 2 * P).outcome;
                    CHECK(out == (table[a << P | b] ? Outcome::accept : Outcome::reject));
                }
        }
    }
    CHECK(truth_table_state_count(6) < 1000);
}
