#include <algorithm>
#include <cmath>

#include "nlg/transform.hpp"

namespace nlg {

OracleGame::OracleGame(GamePtr base) : base_(std::move(base)), n_(base_->question_count()) {
    if (n_ == 0) throw ValidationError("base game has no questions");
    if (n_ > (Question{1} << 31)) throw ValidationError("base game too large to oracularize");
    if (!is_synchronous(*base_)) throw ValidationError("oracularization needs a synchronous base game");
    double n = static_cast<double>(n_);
    base_ordered_ = std::round(base_->nontrivial_fraction() * n * n);
    for (Question x = 0; x < n_; ++x) diagonal_ += base_->nontrivial(x, x) ? 1 : 0;
}

std::pair<Question, Question> OracleGame::pair_parts(Question q) const {
    if (!is_pair(q) || q >= question_count()) throw ValidationError("not a pair question");
    Question k = q - n_;
    return {k / n_, k % n_};
}

Answer OracleGame::pair_answer(Question x, Question y, Answer a, Answer b) const {
    return a * base_->answer_count(y) + b;
}

std::pair<Answer, Answer> OracleGame::split_pair_answer(Question q, Answer c) const {
    auto [x, y] = pair_parts(q);
    Answer ny = base_->answer_count(y);
    return {c / ny, c % ny};
}

Answer OracleGame::answer_count(Question q) const {
    if (q >= question_count()) throw ValidationError("question index out of range");
    if (!is_pair(q)) return base_->answer_count(q);
    auto [x, y] = pair_parts(q);
    std::uint64_t c = static_cast<std::uint64_t>(base_->answer_count(x)) * base_->answer_count(y);
    if (c > 0xffffffffULL) throw ValidationError("pair answer count overflows");
    return static_cast<Answer>(c);
}

std::string OracleGame::question_label(Question q) const {
    if (!is_pair(q)) return base_->question_label(q);
    auto [x, y] = pair_parts(q);
    return "(" + base_->question_label(x) + "|" + base_->question_label(y) + ")";
}

std::string OracleGame::answer_label(Question q, Answer a) const {
    if (a >= answer_count(q)) throw ValidationError("answer out of range");
    if (!is_pair(q)) return base_->answer_label(q, a);
    auto [x, y] = pair_parts(q);
    auto [u, v] = split_pair_answer(q, a);
    return "(" + base_->answer_label(x, u) + "|" + base_->answer_label(y, v) + ")";
}

bool OracleGame::nontrivial(Question q, Question r) const {
    if (q == r) return true;
    if (is_pair(q) == is_pair(r)) return false;
    if (is_pair(r)) std::swap(q, r);
    auto [x, y] = pair_parts(q);
    return (r == x || r == y) && base_->nontrivial(x, y);
}

bool OracleGame::decide(Question q, Question r, Answer a, Answer b) const {
    if (q == r) return a == b;
    if (!nontrivial(q, r)) return true;
    if (is_pair(r)) {
        std::swap(q, r);
        std::swap(a, b);
    }
    auto [x, y] = pair_parts(q);
    auto [u, v] = split_pair_answer(q, a);
    if (r == x && b != u) return false;
    if (r == y && b != v) return false;
    return base_->decide(x, y, u, v);
}

json OracleGame::descriptor() const { return transform_descriptor("oracularize", json::object(), *base_); }

void OracleGame::for_each_nontrivial(const std::function<void(Question, Question)>& visit) const {
    std::vector<std::pair<Question, Question>> pairs;
    for (Question q = 0; q < question_count(); ++q) pairs.emplace_back(q, q);
    base_->for_each_nontrivial([&](Question x, Question y) {
        for (Question p : {pair_question(x, y), pair_question(y, x)}) {
            pairs.emplace_back(x, p);
            if (y != x) pairs.emplace_back(y, p);
            if (x == y) break;
        }
    });
    std::sort(pairs.begin(), pairs.end());
    for (auto [q, r] : pairs) visit(q, r);
}

double OracleGame::nontrivial_fraction() const {
    double n = static_cast<double>(question_count());
    double ordered = n + 2 * diagonal_ + 4 * (base_ordered_ - diagonal_);
    return ordered / (n * n);
}

std::pair<Question, Question> OracleGame::sample_nontrivial(Rng& rng) const {
    double n = static_cast<double>(question_count());
    double total = n + 2 * diagonal_ + 4 * (base_ordered_ - diagonal_);
    std::uniform_real_distribution<double> u(0.0, total);
    std::uniform_int_distribution<int> coin(0, 1);
    if (u(rng) < n) {
        std::uniform_int_distribution<Question> pick(0, question_count() - 1);
        Question q = pick(rng);
        return {q, q};
    }
    // Base pairs weighted by how many isolated questions they touch.
    for (;;) {
        auto [x, y] = base_->sample_nontrivial(rng);
        if (x == y && coin(rng) == 1) continue;
        Question p = pair_question(x, y);
        Question z = (x == y || coin(rng) == 0) ? x : y;
        return coin(rng) == 0 ? std::make_pair(p, z) : std::make_pair(z, p);
    }
}

std::optional<Question> OracleGame::find_question(const std::string& label) const {
    if (label.size() >= 2 && label.front() == '(' && label.back() == ')') {
        std::string inner = label.substr(1, label.size() - 2);
        for (std::size_t k = inner.find('|'); k != std::string::npos; k = inner.find('|', k + 1)) {
            auto x = base_->find_question(inner.substr(0, k));
            auto y = base_->find_question(inner.substr(k + 1));
            if (x && y) return pair_question(*x, *y);
        }
    }
    return base_->find_question(label);
}

std::shared_ptr<OracleGame> oracularize(GamePtr g) { return std::make_shared<OracleGame>(std::move(g)); }

StrategyPtr lift_oracularize(const OracleGame& g, StrategyPtr s, Tolerance tol) {
    check_strategy(g.base(), *s);
    auto rep = is_oracularizable(g.base(), *s, tol);
    if (!rep.ok)
        throw ValidationError("strategy is not oracularizable (largest commutator " + std::to_string(rep.worst) + ")");
    GamePtr base = g.base_ptr();
    Question n = g.base_count();
    Index d = s->dim();
    auto build = [base, s, n, d](Question q) -> Frame {
        if (q < n) return *s->frame(q);
        Question x = (q - n) / n, y = (q - n) % n;
        Answer ny = base->answer_count(y);
        Answer count = base->answer_count(x) * ny;
        if (!base->nontrivial(x, y)) return identity_frame(d, 0, count);
        return refine(*s->frame(x), *s->frame(y), [ny](Answer a, Answer b) { return a * ny + b; }, count);
    };
    return std::make_shared<LazyStrategy>(d, g.question_count(), build, 1024);
}

}  // namespace nlg
