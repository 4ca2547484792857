#include <cstdlib>
#include <sstream>

#include "nlg/cooklevin.hpp"

namespace nlg::cl {

namespace {

bool literal_true(Var lit, const std::vector<std::uint8_t>& a) {
    Var v = std::llabs(lit);
    return (a[v - 1] != 0) == (lit > 0);
}

Var max_var(const Clause& c) { return std::max({std::llabs(c[0]), std::llabs(c[1]), std::llabs(c[2])}); }

void check_vars(const Cnf& f) {
    for (const auto& c : f.clauses)
        for (Var l : c)
            if (l == 0 || std::llabs(l) > f.num_vars) throw ValidationError("clause literal out of range");
}

// Depth-first search over assignments in lexicographic order; visit returns false to stop.
template <class Visit>
void search(const Cnf& f, const std::vector<std::uint8_t>& prefix, Var cap, Visit visit) {
    const Var L = f.num_vars;
    if (L - static_cast<Var>(prefix.size()) > cap)
        throw ValidationError("formula has " + std::to_string(L) + " free variables, above the cap " +
                              std::to_string(cap));
    if (static_cast<Var>(prefix.size()) > L) throw ValidationError("prefix longer than the formula");
    check_vars(f);
    std::vector<std::vector<std::size_t>> closing(static_cast<std::size_t>(L) + 1);
    for (std::size_t i = 0; i < f.clauses.size(); ++i) closing[max_var(f.clauses[i])].push_back(i);
    std::vector<std::uint8_t> a(static_cast<std::size_t>(L), 0);
    // tried[v] counts values already tried at v (0, 1 or 2).
    std::vector<std::uint8_t> tried(static_cast<std::size_t>(L) + 2, 0);
    auto consistent = [&](Var v) {
        for (auto i : closing[v])
            if (!clause_satisfied(f.clauses[i], a)) return false;
        return true;
    };
    // Clauses with no variables cannot exist, so index 0 never closes anything.
    Var v = 1;
    const Var fixed = static_cast<Var>(prefix.size());
    while (v >= 1) {
        if (v > L) {
            if (!visit(a)) return;
            --v;
            continue;
        }
        std::uint8_t limit = v <= fixed ? 1 : 2;
        if (tried[v] >= limit) {
            tried[v] = 0;
            --v;
            continue;
        }
        a[v - 1] = v <= fixed ? prefix[v - 1] : tried[v];
        ++tried[v];
        if (consistent(v)) ++v;
    }
}

}  // namespace

bool clause_satisfied(const Clause& c, const std::vector<std::uint8_t>& a) {
    return literal_true(c[0], a) || literal_true(c[1], a) || literal_true(c[2], a);
}

bool clause_satisfied_by(const Clause& c, const std::array<Var, 3>& vars, const std::array<std::uint8_t, 3>& bits) {
    for (Var lit : c) {
        Var v = std::llabs(lit);
        int k = -1;
        for (int i = 0; i < 3; ++i)
            if (vars[i] == v) k = i;
        if (k < 0) throw ValidationError("clause variable not among the given variables");
        if ((bits[k] != 0) == (lit > 0)) return true;
    }
    return false;
}

CheckResult check_assignment(const Cnf& f, const std::vector<std::uint8_t>& a) {
    if (static_cast<Var>(a.size()) != f.num_vars)
        throw ValidationError("assignment has " + std::to_string(a.size()) + " bits, formula has " +
                              std::to_string(f.num_vars) + " variables");
    check_vars(f);
    for (std::size_t i = 0; i < f.clauses.size(); ++i)
        if (!clause_satisfied(f.clauses[i], a)) return {false, i};
    return {};
}

std::optional<std::vector<std::uint8_t>> brute_force_sat(const Cnf& f, Var cap) {
    std::optional<std::vector<std::uint8_t>> out;
    search(f, {}, cap, [&](const std::vector<std::uint8_t>& a) {
        out = a;
        return false;
    });
    return out;
}

std::size_t count_extensions(const Cnf& f, const std::vector<std::uint8_t>& prefix, std::size_t limit, Var cap) {
    std::size_t n = 0;
    if (limit == 0) return 0;
    search(f, prefix, cap, [&](const std::vector<std::uint8_t>&) { return ++n < limit; });
    return n;
}

std::optional<std::vector<std::uint8_t>> enumerate_sat(const Cnf& f) {
    if (f.num_vars > 24) throw ValidationError("enumeration limited to 24 variables");
    check_vars(f);
    std::vector<std::uint8_t> a(static_cast<std::size_t>(f.num_vars));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << f.num_vars); ++x) {
        // Variable 1 is the most significant bit so the order is lexicographic.
        for (Var v = 1; v <= f.num_vars; ++v) a[v - 1] = x >> (f.num_vars - v) & 1;
        if (check_assignment(f, a).ok) return a;
    }
    return std::nullopt;
}

std::string clause_text(const Clause& c) {
    std::ostringstream o;
    for (int i = 0; i < 3; ++i) {
        if (i > 0 && c[i] == c[i - 1]) continue;
        if (i > 0) o << ' ';
        o << c[i];
    }
    return o.str();
}

std::string to_dimacs(const Cnf& f) {
    std::ostringstream o;
    o << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) o << clause_text(c) << " 0\n";
    return o.str();
}

json assignment_to_json(const std::vector<std::uint8_t>& a) {
    std::string s;
    s.reserve(a.size());
    for (auto b : a) s.push_back(b ? '1' : '0');
    return s;
}

}  // namespace nlg::cl
