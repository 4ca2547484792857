#include <algorithm>
#include <cmath>

#include "nlg/optimize.hpp"

namespace nlg {

namespace {

constexpr Question kMaxQuestions = 4096;

struct Edge {
    Question other;
    std::vector<std::uint8_t> win;  // win[a * |A_other| + b], both orders summed
};

struct Search {
    const Game& g;
    Question n = 0;
    std::vector<std::vector<Edge>> edges;     // off-diagonal nontrivial partners
    std::vector<std::vector<Answer>> allowed;  // answers left after dominance pruning
    std::vector<std::int64_t> suffix_pairs;    // ordered nontrivial pairs with both ends >= k
    std::vector<std::vector<std::int64_t>> gain;  // gain[q][a] from assigned partners
    std::vector<Answer> current, best_answers;
    std::int64_t best = -1;
    std::uint64_t nodes = 0;

    explicit Search(const Game& game) : g(game), n(game.question_count()) {}

    // a is dropped when a smaller answer wins everywhere a does.
    void prune_dominated() {
        allowed.resize(n);
        for (Question q = 0; q < n; ++q) {
            Answer na = g.answer_count(q);
            for (Answer a = 0; a < na; ++a) {
                bool dominated = false;
                for (Answer s = 0; s < a && !dominated; ++s) {
                    bool all = true;
                    for (const auto& e : edges[q]) {
                        Answer nb = g.answer_count(e.other);
                        for (Answer b = 0; b < nb && all; ++b)
                            if (e.win[a * nb + b] > e.win[s * nb + b]) all = false;
                        if (!all) break;
                    }
                    dominated = all;
                }
                if (!dominated) allowed[q].push_back(a);
            }
        }
    }

    std::int64_t bound(Question k, std::int64_t fixed) const {
        std::int64_t b = fixed + suffix_pairs[k];
        for (Question q = k; q < n; ++q) {
            std::int64_t m = 0;
            for (Answer a : allowed[q]) m = std::max(m, gain[q][a]);
            b += m;
        }
        return b;
    }

    void assign(Question q, Answer a, int sign) {
        for (const auto& e : edges[q]) {
            if (e.other < q) continue;
            Answer no = g.answer_count(e.other);
            for (Answer b = 0; b < no; ++b) gain[e.other][b] += sign * e.win[a * no + b];
        }
    }

    void dfs(Question k, std::int64_t fixed) {
        ++nodes;
        if (k == n) {
            if (fixed > best) {
                best = fixed;
                best_answers = current;
            }
            return;
        }
        if (bound(k, fixed) <= best) return;
        for (Answer a : allowed[k]) {
            // The diagonal pair always wins for a deterministic answer map.
            std::int64_t add = gain[k][a] + (g.nontrivial(k, k) ? 1 : 0);
            current[k] = a;
            assign(k, a, +1);
            dfs(k + 1, fixed + add);
            assign(k, a, -1);
        }
    }
};

std::int64_t trivial_pairs(const Game& g) {
    double n = static_cast<double>(g.question_count());
    return static_cast<std::int64_t>(std::llround(n * n - g.nontrivial_fraction() * n * n));
}

}  // namespace

double deterministic_value(const Game& g, const std::vector<Answer>& answers) {
    Question n = g.question_count();
    if (answers.size() != n) throw ValidationError("one answer per question is required");
    for (Question q = 0; q < n; ++q)
        if (answers[q] >= g.answer_count(q)) throw ValidationError("answer out of range");
    std::int64_t wins = 0;
    for (Question x = 0; x < n; ++x)
        for (Question y = 0; y < n; ++y) wins += !g.nontrivial(x, y) || g.decide(x, y, answers[x], answers[y]);
    return static_cast<double>(wins) / (static_cast<double>(n) * static_cast<double>(n));
}

ClassicalResult classical_value(const Game& g, double cap) {
    Search s(g);
    if (s.n > kMaxQuestions) throw ValidationError("too many questions for the classical search");
    s.edges.resize(s.n);
    std::vector<std::int64_t> diag(s.n, 0);
    std::vector<std::pair<Question, Question>> pairs;
    g.for_each_nontrivial([&](Question x, Question y) { pairs.emplace_back(x, y); });
    for (auto [x, y] : pairs) {
        if (x == y) {
            diag[x] = 1;
            continue;
        }
        Answer nx = g.answer_count(x), ny = g.answer_count(y);
        Edge ex{y, std::vector<std::uint8_t>(static_cast<std::size_t>(nx) * ny)};
        Edge ey{x, std::vector<std::uint8_t>(static_cast<std::size_t>(ny) * nx)};
        for (Answer a = 0; a < nx; ++a)
            for (Answer b = 0; b < ny; ++b) {
                std::uint8_t w = static_cast<std::uint8_t>(g.decide(x, y, a, b) + g.decide(y, x, b, a));
                ex.win[a * ny + b] = w;
                ey.win[b * nx + a] = w;
            }
        s.edges[x].push_back(std::move(ex));
        s.edges[y].push_back(std::move(ey));
    }
    s.prune_dominated();
    double log_space = 0;
    for (const auto& a : s.allowed) log_space += std::log(static_cast<double>(a.size()));
    if (log_space > std::log(cap) + 1e-9)
        throw ValidationError("classical search space exceeds the cap");

    s.suffix_pairs.assign(s.n + 1, 0);
    for (Question k = s.n; k-- > 0;) {
        std::int64_t add = diag[k];
        for (const auto& e : s.edges[k])
            if (e.other > k) add += 2;
        s.suffix_pairs[k] = s.suffix_pairs[k + 1] + add;
    }
    s.gain.resize(s.n);
    for (Question q = 0; q < s.n; ++q) s.gain[q].assign(g.answer_count(q), 0);
    s.current.assign(s.n, 0);
    s.dfs(0, 0);

    ClassicalResult r;
    double n = static_cast<double>(s.n);
    r.value = static_cast<double>(s.best + trivial_pairs(g)) / (n * n);
    r.answers = s.best_answers;
    r.nodes = s.nodes;
    return r;
}

ClassicalResult classical_value_exhaustive(const Game& g, double cap) {
    Question n = g.question_count();
    double log_space = 0;
    for (Question q = 0; q < n; ++q) log_space += std::log(static_cast<double>(g.answer_count(q)));
    if (log_space > std::log(cap) + 1e-9) throw ValidationError("enumeration space exceeds the cap");
    ClassicalResult r;
    r.value = -1;
    std::vector<Answer> cur(n, 0);
    while (true) {
        ++r.nodes;
        double v = deterministic_value(g, cur);
        if (v > r.value) {
            r.value = v;
            r.answers = cur;
        }
        // Mixed-radix increment, last question fastest.
        Question k = n;
        while (k > 0) {
            --k;
            if (++cur[k] < g.answer_count(k)) break;
            cur[k] = 0;
            if (k == 0) return r;
        }
        if (n == 0) return r;
    }
}

}  // namespace nlg
