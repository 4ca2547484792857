#include <algorithm>
#include <cmath>

#include "nlg/transform.hpp"

namespace nlg {

namespace ans {

int width(Answer a) {
    if (a < 2) return 1;
    if (a < 6) return 2;
    if (a < kLabels) return 3;
    throw ValidationError("answer label out of range");
}

int bit(Answer a, int k) {
    int w = width(a);
    Answer v = w == 1 ? a : w == 2 ? a - 2 : a - 6;
    return static_cast<int>(v >> (w - 1 - k) & 1);
}

std::string label(Answer a) {
    std::string s;
    for (int k = 0; k < width(a); ++k) s.push_back(static_cast<char>('0' + bit(a, k)));
    return s;
}

}  // namespace ans

int answer_bits(const Game& g) {
    Answer m = g.max_answer_count();
    int p = 0;
    while ((std::uint64_t{1} << p) < m) ++p;
    return std::max(p, 1);
}

DeciderCache::DeciderCache(const Game& g, int P, std::size_t capacity) : g_(g), P_(P), capacity_(capacity) {}

std::vector<std::uint8_t> DeciderCache::input(Answer a, Answer b) const {
    std::vector<std::uint8_t> in;
    in.reserve(2 * static_cast<std::size_t>(P_));
    for (int k = P_ - 1; k >= 0; --k) in.push_back(static_cast<std::uint8_t>(a >> k & 1));
    for (int k = P_ - 1; k >= 0; --k) in.push_back(static_cast<std::uint8_t>(b >> k & 1));
    return in;
}

std::shared_ptr<const cl::TuringMachine> DeciderCache::machine(Question x, Question y) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = by_pair_.find({x, y});
        if (it != by_pair_.end()) return it->second;
    }
    Answer nx = g_.answer_count(x), ny = g_.answer_count(y);
    // Answers outside the game's range are not valid encodings and are rejected.
    std::string table(std::size_t{1} << (2 * P_), '0');
    for (Answer a = 0; a < nx; ++a)
        for (Answer b = 0; b < ny; ++b)
            if (g_.decide(x, y, a, b)) table[(static_cast<std::size_t>(a) << P_) | b] = '1';
    std::lock_guard<std::mutex> lock(mu_);
    if (by_pair_.size() >= capacity_) by_pair_.clear();
    if (by_table_.size() >= capacity_) by_table_.clear();
    auto it = by_table_.find(table);
    std::shared_ptr<const cl::TuringMachine> m;
    if (it != by_table_.end()) {
        m = it->second;
    } else {
        int P = P_;
        m = std::make_shared<const cl::TuringMachine>(cl::truth_table_machine(
            P, [&](std::uint32_t a, std::uint32_t b) { return table[(static_cast<std::size_t>(a) << P) | b] == '1'; }));
        by_table_.emplace(table, m);
    }
    by_pair_[{x, y}] = m;
    return m;
}

void attest_time_bound(const Game& g, int T, std::uint64_t seed) {
    int P = answer_bits(g);
    if (P > 8) throw ValidationError("game has no decider machine: answers need more than 8 bits");
    if (T < 2 * P)
        throw ValidationError("time bound " + std::to_string(T) + " is below the decider runtime " +
                              std::to_string(2 * P));
    std::vector<std::pair<Question, Question>> pairs;
    double n = static_cast<double>(g.question_count());
    double ordered = g.nontrivial_fraction() * n * n;
    Rng rng(seed);
    if (ordered <= 64) {
        g.for_each_nontrivial([&](Question x, Question y) {
            pairs.emplace_back(x, y);
            if (x != y) pairs.emplace_back(y, x);
        });
    } else {
        for (int k = 0; k < 32; ++k) pairs.push_back(g.sample_nontrivial(rng));
    }
    DeciderCache cache(g, P, 64);
    for (auto [x, y] : pairs) {
        auto m = cache.machine(x, y);
        Answer nx = g.answer_count(x), ny = g.answer_count(y);
        auto run_one = [&](Answer a, Answer b) {
            auto out = cl::simulate(*m, cache.input(a, b), T).outcome;
            bool want = g.decide(x, y, a, b);
            if (out == cl::Outcome::timeout || (out == cl::Outcome::accept) != want)
                throw ValidationError("decider machine for (" + g.question_label(x) + ", " + g.question_label(y) +
                                      ") does not reproduce the game within T steps");
        };
        if (static_cast<std::uint64_t>(nx) * ny <= 4096) {
            for (Answer a = 0; a < nx; ++a)
                for (Answer b = 0; b < ny; ++b) run_one(a, b);
        } else {
            std::uniform_int_distribution<Answer> da(0, nx - 1), db(0, ny - 1);
            for (int k = 0; k < 4096; ++k) run_one(da(rng), db(rng));
        }
    }
}

AnswerReducedGame::AnswerReducedGame(GamePtr base, int T) : base_(std::move(base)) {
    orac_ = oracularize(base_);
    int P = answer_bits(*base_);
    if (P > 8) throw ValidationError("game has no decider machine: answers need more than 8 bits");
    if (T < 2 * P)
        throw ValidationError("time bound " + std::to_string(T) + " is below the decider runtime " +
                              std::to_string(2 * P));
    shape_.P = P;
    shape_.T = T;
    shape_.layout = cl::Layout(2 * P, T, cl::truth_table_state_count(P));
    shape_.L = static_cast<std::uint64_t>(shape_.layout.L);
    unsigned __int128 L = shape_.L;
    unsigned __int128 per = L + L * L + L * L * L;
    unsigned __int128 total = per * orac_->question_count();
    if (total > static_cast<unsigned __int128>(~std::uint64_t{0}))
        throw ValidationError("answer-reduced question count overflows 64 bits");
    shape_.per_game = static_cast<std::uint64_t>(per);
    count_ = static_cast<Question>(total);
    cache_ = std::make_unique<DeciderCache>(*base_, P);
    double n = static_cast<double>(base_->question_count());
    base_ordered_ = std::round(base_->nontrivial_fraction() * n * n);
}

AnswerReducedGame::Parts AnswerReducedGame::decode(Question q) const {
    if (q >= count_) throw ValidationError("question index out of range");
    Parts p;
    std::uint64_t L = shape_.L;
    p.g = q / shape_.per_game;
    std::uint64_t r = q % shape_.per_game;
    if (r < L) {
        p.part = Part::single;
        p.i = r + 1;
        return p;
    }
    r -= L;
    if (r < L * L) {
        p.part = Part::pair;
        p.i = r / L + 1;
        p.j = r % L + 1;
        return p;
    }
    r -= L * L;
    p.part = Part::triple;
    p.i = r / (L * L) + 1;
    p.j = r / L % L + 1;
    p.k = r % L + 1;
    return p;
}

Question AnswerReducedGame::encode(const Parts& p) const {
    std::uint64_t L = shape_.L;
    auto in = [L](std::uint64_t v) { return v >= 1 && v <= L; };
    std::uint64_t r = 0;
    if (p.part == Part::single) {
        if (!in(p.i)) throw ValidationError("proof index out of range");
        r = p.i - 1;
    } else if (p.part == Part::pair) {
        if (!in(p.i) || !in(p.j)) throw ValidationError("proof index out of range");
        r = L + (p.i - 1) * L + (p.j - 1);
    } else {
        if (!in(p.i) || !in(p.j) || !in(p.k)) throw ValidationError("proof index out of range");
        r = L + L * L + (p.i - 1) * L * L + (p.j - 1) * L + (p.k - 1);
    }
    if (p.g >= orac_->question_count()) throw ValidationError("game part out of range");
    return p.g * shape_.per_game + r;
}

std::string AnswerReducedGame::question_label(Question q) const {
    Parts p = decode(q);
    std::string s = orac_->question_label(p.g) + "#" + std::to_string(p.i);
    if (p.part != Part::single) s += "," + std::to_string(p.j);
    if (p.part == Part::triple) s += "," + std::to_string(p.k);
    return s;
}

std::string AnswerReducedGame::answer_label(Question, Answer a) const { return ans::label(a); }

std::optional<Question> AnswerReducedGame::find_question(const std::string& label) const {
    auto hash = label.rfind('#');
    if (hash == std::string::npos) return std::nullopt;
    auto g = orac_->find_question(label.substr(0, hash));
    if (!g) return std::nullopt;
    std::vector<std::uint64_t> idx;
    std::string rest = label.substr(hash + 1), cur;
    try {
        std::size_t start = 0;
        for (;;) {
            auto comma = rest.find(',', start);
            idx.push_back(std::stoull(rest.substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (idx.empty() || idx.size() > 3) return std::nullopt;
    Parts p;
    p.g = *g;
    p.part = idx.size() == 1 ? Part::single : idx.size() == 2 ? Part::pair : Part::triple;
    p.i = idx[0];
    if (idx.size() > 1) p.j = idx[1];
    if (idx.size() > 2) p.k = idx[2];
    try {
        return encode(p);
    } catch (const ValidationError&) {
        return std::nullopt;
    }
}

int AnswerReducedGame::ordered_verdict(const Parts& q, const Parts& r, Answer a, Answer b, bool check) const {
    if (q.part != Part::single || !orac_->is_pair(q.g)) return -1;
    auto [x, y] = orac_->pair_parts(q.g);
    if (!base_->nontrivial(x, y)) return -1;
    const std::uint64_t i = q.i;
    const std::uint64_t P = static_cast<std::uint64_t>(shape_.P);

    if (r.g == q.g && r.part == Part::triple) {
        if (i != r.i && i != r.j && i != r.k) return -1;
        if (!check) return 1;
        if (ans::width(a) != 1 || ans::width(b) != 3) return 0;
        std::array<cl::Var, 3> vars{static_cast<cl::Var>(r.i), static_cast<cl::Var>(r.j), static_cast<cl::Var>(r.k)};
        std::array<std::uint8_t, 3> bits{};
        for (int t = 0; t < 3; ++t) bits[t] = static_cast<std::uint8_t>(ans::bit(b, t));
        for (int s = 0; s < 3; ++s)
            for (int t = s + 1; t < 3; ++t)
                if (vars[s] == vars[t] && bits[s] != bits[t]) return 0;
        for (int t = 0; t < 3; ++t)
            if (static_cast<std::uint64_t>(vars[t]) == i && bits[t] != ans::bit(a, 0)) return 0;
        auto m = cache_->machine(x, y);
        for (const auto& c : cl::clause_access(*m, shape_.T, 2 * shape_.P, vars[0], vars[1], vars[2]))
            if (!cl::clause_satisfied_by(c, vars, bits)) return 0;
        return 1;
    }

    if (orac_->is_pair(r.g) || r.part != Part::pair) return -1;
    Question z = r.g;
    std::uint64_t target = 0;
    if (z == x && i <= P && (r.i == i || r.j == i))
        target = i;
    else if (z == y && i > P && i <= 2 * P && (r.i == i - P || r.j == i - P))
        target = i - P;
    else
        return -1;
    if (!check) return 1;
    if (ans::width(a) != 1 || ans::width(b) != 2) return 0;
    if (r.i == target && ans::bit(b, 0) != ans::bit(a, 0)) return 0;
    if (r.j == target && ans::bit(b, 1) != ans::bit(a, 0)) return 0;
    return 1;
}

bool AnswerReducedGame::nontrivial(Question x, Question y) const {
    if (x == y) return true;
    Parts p = decode(x), q = decode(y);
    return ordered_verdict(p, q, 0, 0, false) >= 0 || ordered_verdict(q, p, 0, 0, false) >= 0;
}

bool AnswerReducedGame::decide(Question x, Question y, Answer a, Answer b) const {
    if (x == y) return a == b;
    Parts p = decode(x), q = decode(y);
    int v = ordered_verdict(p, q, a, b, true);
    if (v < 0) v = ordered_verdict(q, p, b, a, true);
    return v != 0;
}

json AnswerReducedGame::descriptor() const {
    return transform_descriptor("answer_reduce", json{{"T", shape_.T}}, *base_);
}

double AnswerReducedGame::nontrivial_count() const {
    double L = static_cast<double>(shape_.L), P = shape_.P;
    double row2 = L * (L * L * L - (L - 1) * (L - 1) * (L - 1));
    double row34 = 2 * P * (2 * L - 1);
    return static_cast<double>(count_) + 2 * base_ordered_ * (row2 + row34);
}

double AnswerReducedGame::nontrivial_fraction() const {
    double n = static_cast<double>(count_);
    return nontrivial_count() / (n * n);
}

double AnswerReducedGame::losing_weight() const {
    double L = static_cast<double>(shape_.L);
    auto cube = [](double v) { return v * v * v; };
    // Pairs (i, triple) with i in the triple and the acceptance variable in it too.
    double c_acc = (cube(L) - cube(L - 1)) + (L - 1) * (cube(L) - 2 * cube(L - 1) + cube(L - 2));
    double nx = static_cast<double>(base_->question_count());
    double n = static_cast<double>(count_);
    return 2 * c_acc * nx * nx / (n * n);
}

void AnswerReducedGame::for_each_nontrivial(const std::function<void(Question, Question)>& visit) const {
    double n = static_cast<double>(count_);
    if (nontrivial_count() > 5e7 || n > 5e7)
        throw ValidationError("answer-reduced game too large to enumerate; use sampling");
    std::vector<std::pair<Question, Question>> pairs;
    for (Question q = 0; q < count_; ++q) pairs.emplace_back(q, q);
    const std::uint64_t L = shape_.L, P = static_cast<std::uint64_t>(shape_.P);
    auto add = [&](Question u, Question v) { pairs.emplace_back(std::min(u, v), std::max(u, v)); };
    base_->for_each_nontrivial([&](Question bx, Question by) {
        for (int flip = 0; flip < (bx == by ? 1 : 2); ++flip) {
            Question x = flip ? by : bx, y = flip ? bx : by;
            Question g = orac_->pair_question(x, y);
            for (std::uint64_t i = 1; i <= L; ++i) {
                Question qi = encode({g, Part::single, i, 0, 0});
                for (std::uint64_t j = 1; j <= L; ++j)
                    for (std::uint64_t k = 1; k <= L; ++k)
                        for (std::uint64_t l = 1; l <= L; ++l)
                            if (i == j || i == k || i == l) add(qi, encode({g, Part::triple, j, k, l}));
                for (std::uint64_t j = 1; j <= L; ++j)
                    for (std::uint64_t k = 1; k <= L; ++k) {
                        if (i <= P && (j == i || k == i)) add(qi, encode({x, Part::pair, j, k, 0}));
                        if (i > P && i <= 2 * P && (j == i - P || k == i - P))
                            add(qi, encode({y, Part::pair, j, k, 0}));
                    }
            }
        }
    });
    std::sort(pairs.begin(), pairs.end());
    for (auto [u, v] : pairs) visit(u, v);
}

std::pair<Question, Question> AnswerReducedGame::sample_nontrivial(Rng& rng) const {
    const double L = static_cast<double>(shape_.L), P = shape_.P;
    double row2 = L * (L * L * L - (L - 1) * (L - 1) * (L - 1));
    double row34 = 2 * P * (2 * L - 1);
    double diag = static_cast<double>(count_);
    double total = diag + 2 * base_ordered_ * (row2 + row34);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);
    if (u(rng) * total < diag) {
        std::uniform_int_distribution<Question> pick(0, count_ - 1);
        Question q = pick(rng);
        return {q, q};
    }
    auto [x, y] = base_->sample_nontrivial(rng);
    Question g = orac_->pair_question(x, y);
    const std::uint64_t Li = shape_.L;
    std::uniform_int_distribution<std::uint64_t> pos(1, Li);
    Question q, r;
    if (u(rng) * (row2 + row34) < row2) {
        // Uniform over (i, triple) with i in the triple.
        for (;;) {
            std::uint64_t t[3] = {pos(rng), pos(rng), pos(rng)};
            std::vector<std::uint64_t> distinct(t, t + 3);
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            std::uniform_int_distribution<int> keep(1, 3);
            if (keep(rng) > static_cast<int>(distinct.size())) continue;
            std::uniform_int_distribution<std::size_t> which(0, distinct.size() - 1);
            q = encode({g, Part::single, distinct[which(rng)], 0, 0});
            r = encode({g, Part::triple, t[0], t[1], t[2]});
            break;
        }
    } else {
        std::uniform_int_distribution<std::uint64_t> pick_i(1, static_cast<std::uint64_t>(P));
        std::uniform_int_distribution<std::uint64_t> pick_pair(0, 2 * Li - 2);
        std::uint64_t i = pick_i(rng), c = pick_pair(rng), j, k;
        if (c < Li) {
            j = i;
            k = c + 1;
        } else {
            j = c - Li + 1;
            if (j >= i) ++j;
            k = i;
        }
        bool second = coin(rng) == 1;
        Question iso = second ? y : x;
        q = encode({g, Part::single, second ? i + static_cast<std::uint64_t>(P) : i, 0, 0});
        r = encode({iso, Part::pair, j, k, 0});
    }
    return coin(rng) == 0 ? std::make_pair(q, r) : std::make_pair(r, q);
}

std::shared_ptr<AnswerReducedGame> answer_reduce(GamePtr g, int T) {
    attest_time_bound(*g, T);
    return std::make_shared<AnswerReducedGame>(std::move(g), T);
}

StrategyPtr lift_answer_reduce(const AnswerReducedGame& g, StrategyPtr s, Tolerance tol) {
    auto joint = lift_oracularize(g.oracle(), s, tol);
    const Game& base = g.base();
    const OracleGame& orac = g.oracle();
    const ProofShape shape = g.shape();
    const Index d = s->dim();
    auto bit_of = [shape](Answer a, std::uint64_t j) {
        if (j > static_cast<std::uint64_t>(shape.P)) return 0;
        return static_cast<int>(a >> (shape.P - static_cast<int>(j)) & 1);
    };
    auto build = [&g, &base, &orac, joint, s, shape, d, bit_of](Question q) -> Frame {
        auto p = g.decode(q);
        if (!orac.is_pair(p.g)) {
            if (p.part != AnswerReducedGame::Part::pair) return identity_frame(d, 0, ans::kLabels);
            return relabel(*s->frame(p.g), [&](Answer a) { return ans::two(bit_of(a, p.i), bit_of(a, p.j)); },
                           ans::kLabels);
        }
        auto [x, y] = orac.pair_parts(p.g);
        if (p.part == AnswerReducedGame::Part::pair || !base.nontrivial(x, y))
            return identity_frame(d, 0, ans::kLabels);
        auto f = joint->frame(p.g);
        auto m = g.deciders().machine(x, y);
        std::map<Answer, Answer> label;
        for (Answer c : f->outcome) {
            auto [a, b] = orac.split_pair_answer(p.g, c);
            cl::TableauRun run(*m, shape.T, g.deciders().input(a, b));
            auto v = [&](std::uint64_t idx) { return static_cast<int>(run.bit(static_cast<cl::Var>(idx))); };
            label[c] = p.part == AnswerReducedGame::Part::single ? ans::one(v(p.i))
                                                                   : ans::three(v(p.i), v(p.j), v(p.k));
        }
        return relabel(*f, [&](Answer c) { return label.at(c); }, ans::kLabels);
    };
    return std::make_shared<LazyStrategy>(d, g.question_count(), build, 1024);
}

std::shared_ptr<AnswerReducedGame> gapless_compress(GamePtr g, int T) { return answer_reduce(introspect(std::move(g)), T); }

StrategyPtr lift_gapless_compress(const AnswerReducedGame& g, StrategyPtr s, Tolerance tol) {
    auto intro = dynamic_cast<const IntrospectGame*>(&g.base());
    if (!intro) throw ValidationError("game was not produced by gapless compression");
    return lift_answer_reduce(g, lift_introspection(*intro, std::move(s), tol), tol);
}

}  // namespace nlg
