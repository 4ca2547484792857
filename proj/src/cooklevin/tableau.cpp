#include <algorithm>
#include <cstdlib>

#include "nlg/cooklevin.hpp"

namespace nlg::cl {

Layout::Layout(int witness_bits, int time, int states) : R(witness_bits), T(time), Q(states) {
    if (R < 0) throw ValidationError("witness length must be non-negative");
    if (T < 0) throw ValidationError("time bound must be non-negative");
    if (Q < 2) throw ValidationError("machine needs at least two states");
    W = std::max(R, T + 1);
    B = static_cast<Var>(Q) + 4 * static_cast<Var>(W) + 9;
    L = R + static_cast<Var>(T) * B + Q + 4 * static_cast<Var>(W);
}

int Layout::clamp(int p, int d) const {
    if (d == left) return std::max(p - 1, 0);
    if (d == right) return std::min(p + 1, W - 1);
    return p;
}

Layout::Decoded Layout::decode(Var v) const {
    if (v < 1 || v > L) throw ValidationError("variable " + std::to_string(v) + " out of range 1.." + std::to_string(L));
    Decoded d;
    if (v <= R) {
        d.kind = witness;
        d.a = static_cast<int>(v - 1);
        return d;
    }
    Var idx = v - R - 1;
    d.t = static_cast<int>(std::min<Var>(idx / B, T));
    Var off = idx - static_cast<Var>(d.t) * B;
    if (off < Q) {
        d.kind = state;
        d.a = static_cast<int>(off);
        return d;
    }
    off -= Q;
    if (off < W) {
        d.kind = head;
        d.a = static_cast<int>(off);
        return d;
    }
    off -= W;
    if (off < 3 * W) {
        d.kind = cell;
        d.a = static_cast<int>(off / 3);
        d.b = static_cast<int>(off % 3);
        return d;
    }
    off -= 3 * W;
    d.kind = static_cast<Kind>(read + off / 3);
    d.a = static_cast<int>(off % 3);
    return d;
}

Clause make_clause(std::vector<Var> lits) {
    if (lits.empty() || lits.size() > 3) throw ValidationError("clause must have 1 to 3 literals");
    std::sort(lits.begin(), lits.end(), [](Var a, Var b) {
        if (std::llabs(a) != std::llabs(b)) return std::llabs(a) < std::llabs(b);
        return a < b;
    });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    Clause c{};
    for (std::size_t i = 0; i < 3; ++i) c[i] = lits[std::min(i, lits.size() - 1)];
    return c;
}

namespace {

void exclusion(std::vector<Clause>& out, const std::vector<Var>& group) {
    for (std::size_t i = 0; i < group.size(); ++i)
        for (std::size_t j = i + 1; j < group.size(); ++j) out.push_back(make_clause({-group[i], -group[j]}));
}

void one_hot3(std::vector<Clause>& out, Var a, Var b, Var c) {
    exclusion(out, {a, b, c});
    out.push_back(make_clause({a, b, c}));
}

}  // namespace

Cnf compile(const TuringMachine& m, int T, int R) {
    Layout lay(R, T, m.state_count());
    Cnf f;
    f.layout = lay;
    f.num_vars = lay.L;
    auto& out = f.clauses;
    const int Q = lay.Q, W = lay.W;

    out.push_back(make_clause({lay.head_var(0, 0)}));
    out.push_back(make_clause({lay.state_var(0, m.start)}));
    for (int p = 0; p < W; ++p) {
        if (p < R) {
            out.push_back(make_clause({-lay.witness_var(p), lay.cell_var(0, p, one)}));
            out.push_back(make_clause({lay.witness_var(p), lay.cell_var(0, p, zero)}));
        } else {
            out.push_back(make_clause({lay.cell_var(0, p, blank)}));
        }
    }

    for (int t = 0; t <= T; ++t) {
        std::vector<Var> g;
        for (int q = 0; q < Q; ++q) g.push_back(lay.state_var(t, q));
        exclusion(out, g);
        g.clear();
        for (int p = 0; p < W; ++p) g.push_back(lay.head_var(t, p));
        exclusion(out, g);
        for (int p = 0; p < W; ++p) one_hot3(out, lay.cell_var(t, p, 0), lay.cell_var(t, p, 1), lay.cell_var(t, p, 2));
        if (t == T) break;
        one_hot3(out, lay.read_var(t, 0), lay.read_var(t, 1), lay.read_var(t, 2));
        one_hot3(out, lay.write_var(t, 0), lay.write_var(t, 1), lay.write_var(t, 2));
        one_hot3(out, lay.move_var(t, 0), lay.move_var(t, 1), lay.move_var(t, 2));
    }

    for (int t = 0; t < T; ++t) {
        for (int p = 0; p < W; ++p)
            for (int s = 0; s < 3; ++s)
                out.push_back(make_clause({-lay.head_var(t, p), -lay.cell_var(t, p, s), lay.read_var(t, s)}));
        for (int q = 0; q < Q; ++q)
            for (int s = 0; s < 3; ++s) {
                const auto& tr = m.step(q, static_cast<Symbol>(s));
                Var sq = lay.state_var(t, q), rs = lay.read_var(t, s);
                out.push_back(make_clause({-sq, -rs, lay.state_var(t + 1, tr.next)}));
                out.push_back(make_clause({-sq, -rs, lay.write_var(t, tr.write)}));
                out.push_back(make_clause({-sq, -rs, lay.move_var(t, tr.move)}));
            }
        for (int p = 0; p < W; ++p) {
            for (int s = 0; s < 3; ++s)
                out.push_back(make_clause({-lay.head_var(t, p), -lay.write_var(t, s), lay.cell_var(t + 1, p, s)}));
            for (int d = 0; d < 3; ++d)
                out.push_back(
                    make_clause({-lay.head_var(t, p), -lay.move_var(t, d), lay.head_var(t + 1, lay.clamp(p, d))}));
            for (int s = 0; s < 3; ++s)
                out.push_back(make_clause({lay.head_var(t, p), -lay.cell_var(t, p, s), lay.cell_var(t + 1, p, s)}));
        }
    }
    out.push_back(make_clause({lay.state_var(T, m.accept)}));
    return f;
}

namespace {

using D = Layout::Decoded;

// Same one-hot group: state or head at one time, the symbols of one cell, or one aux triple.
bool same_group(const D& u, const D& v) {
    if (u.kind != v.kind || u.kind == Layout::witness || u.t != v.t) return false;
    if (u.kind == Layout::cell) return u.a == v.a;
    return true;
}

void match_one(const Layout& lay, const TuringMachine& m, Var v, std::vector<Clause>& out) {
    D d = lay.decode(v);
    bool unit = (d.kind == Layout::head && d.t == 0 && d.a == 0) ||
                (d.kind == Layout::state && d.t == 0 && d.a == m.start) ||
                (d.kind == Layout::cell && d.t == 0 && d.a >= lay.R && d.b == blank) ||
                (d.kind == Layout::state && d.t == lay.T && d.a == m.accept);
    if (unit) out.push_back(make_clause({v}));
}

void match_two(const Layout& lay, Var u, Var v, std::vector<Clause>& out) {
    D du = lay.decode(u), dv = lay.decode(v);
    if (same_group(du, dv)) out.push_back(make_clause({-u, -v}));
    if (dv.kind == Layout::witness) {
        std::swap(du, dv);
        std::swap(u, v);
    }
    if (du.kind == Layout::witness && dv.kind == Layout::cell && dv.t == 0 && dv.a == du.a) {
        if (dv.b == one) out.push_back(make_clause({-u, v}));
        if (dv.b == zero) out.push_back(make_clause({u, v}));
    }
}

void match_three(const Layout& lay, const TuringMachine& m, std::array<Var, 3> v, std::vector<Clause>& out) {
    std::array<D, 3> d;
    for (int i = 0; i < 3; ++i) d[i] = lay.decode(v[i]);
    if (same_group(d[0], d[1]) && same_group(d[1], d[2]) && d[0].kind != Layout::state && d[0].kind != Layout::head)
        out.push_back(make_clause({v[0], v[1], v[2]}));

    // Try every ordering against the three-variable families.
    std::array<int, 3> o{0, 1, 2};
    do {
        const D &x = d[o[0]], &y = d[o[1]], &z = d[o[2]];
        Var a = v[o[0]], b = v[o[1]], c = v[o[2]];
        if (x.t >= lay.T) continue;
        int t = x.t;
        if (x.kind == Layout::head && y.kind == Layout::cell && z.kind == Layout::read && y.t == t && z.t == t &&
            y.a == x.a && z.a == y.b)
            out.push_back(make_clause({-a, -b, c}));
        if (x.kind == Layout::state && y.kind == Layout::read && y.t == t) {
            const auto& tr = m.step(x.a, static_cast<Symbol>(y.a));
            if ((z.kind == Layout::state && z.t == t + 1 && z.a == tr.next) ||
                (z.kind == Layout::write && z.t == t && z.a == tr.write) ||
                (z.kind == Layout::move && z.t == t && z.a == tr.move))
                out.push_back(make_clause({-a, -b, c}));
        }
        if (x.kind == Layout::head && y.kind == Layout::write && z.kind == Layout::cell && y.t == t &&
            z.t == t + 1 && z.a == x.a && z.b == y.a)
            out.push_back(make_clause({-a, -b, c}));
        if (x.kind == Layout::head && y.kind == Layout::move && z.kind == Layout::head && y.t == t &&
            z.t == t + 1 && z.a == lay.clamp(x.a, y.a))
            out.push_back(make_clause({-a, -b, c}));
        if (x.kind == Layout::head && y.kind == Layout::cell && z.kind == Layout::cell && y.t == t &&
            z.t == t + 1 && y.a == x.a && z.a == x.a && z.b == y.b)
            out.push_back(make_clause({a, -b, c}));
    } while (std::next_permutation(o.begin(), o.end()));
}

}  // namespace

std::vector<Clause> clause_access(const TuringMachine& m, int T, int R, Var i, Var j, Var k) {
    Layout lay(R, T, m.state_count());
    std::vector<Var> vs{i, j, k};
    for (Var v : vs) lay.decode(v);  // range check
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    std::vector<Clause> out;
    const int n = static_cast<int>(vs.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<Var> s;
        for (int b = 0; b < n; ++b)
            if (mask >> b & 1) s.push_back(vs[b]);
        if (s.size() == 1) match_one(lay, m, s[0], out);
        if (s.size() == 2) match_two(lay, s[0], s[1], out);
        if (s.size() == 3) match_three(lay, m, {s[0], s[1], s[2]}, out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TableauRun::TableauRun(const TuringMachine& m, int T, const std::vector<std::uint8_t>& input)
    : layout_(static_cast<int>(input.size()), T, m.state_count()), input_(input) {
    run_ = simulate(m, input, T, layout_.W);
    for (int t = 0; t < T; ++t) {
        const auto& c = run_.tableau[t];
        steps_.push_back(m.step(c.state, c.tape[c.head]));
    }
}

bool TableauRun::bit(Var v) const {
    auto d = layout_.decode(v);
    switch (d.kind) {
        case Layout::witness: return input_[d.a] != 0;
        case Layout::state: return run_.tableau[d.t].state == d.a;
        case Layout::head: return run_.tableau[d.t].head == d.a;
        case Layout::cell: return run_.tableau[d.t].tape[d.a] == d.b;
        default: break;
    }
    const auto& c = run_.tableau[d.t];
    if (d.kind == Layout::read) return c.tape[c.head] == d.a;
    const auto& tr = steps_[d.t];
    if (d.kind == Layout::write) return tr.write == d.a;
    return tr.move == d.a;
}

std::vector<std::uint8_t> TableauRun::assignment() const {
    std::vector<std::uint8_t> a(static_cast<std::size_t>(layout_.L));
    for (Var v = 1; v <= layout_.L; ++v) a[v - 1] = bit(v);
    return a;
}

std::vector<std::uint8_t> witness_to_assignment(const TuringMachine& m, int T, const std::vector<std::uint8_t>& w) {
    TableauRun run(m, T, w);
    if (run.outcome() != Outcome::accept)
        throw ValidationError(std::string("machine does not accept the witness within T steps (") +
                              outcome_name(run.outcome()) + ")");
    return run.assignment();
}

}  // namespace nlg::cl
