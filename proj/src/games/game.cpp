#include "nlg/game.hpp"

#include <algorithm>
#include <cstdlib>

#include "nlg/parallel.hpp"

namespace nlg {

int thread_count() {
    const char* env = std::getenv("NLG_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return std::clamp(n, 1, 64);
}

void Game::accept_mask(Question x, Question y, const std::vector<Answer>& as, const std::vector<Answer>& bs,
                       std::vector<char>& mask) const {
    mask.resize(as.size() * bs.size());
    for (std::size_t i = 0; i < as.size(); ++i)
        for (std::size_t j = 0; j < bs.size(); ++j) mask[i * bs.size() + j] = decide(x, y, as[i], bs[j]) ? 1 : 0;
}

void Game::build_pair_cache() const {
    std::call_once(pairs_once_, [this] {
        Question n = question_count();
        if (static_cast<double>(n) * static_cast<double>(n) > 4e10)
            throw ValidationError("game too large to enumerate question pairs");
        for (Question x = 0; x < n; ++x)
            for (Question y = x; y < n; ++y)
                if (nontrivial(x, y)) {
                    pairs_.emplace_back(x, y);
                    ordered_pairs_ += (x == y) ? 1 : 2;
                }
    });
}

void Game::for_each_nontrivial(const std::function<void(Question, Question)>& visit) const {
    build_pair_cache();
    for (const auto& [x, y] : pairs_) visit(x, y);
}

double Game::nontrivial_fraction() const {
    build_pair_cache();
    double n = static_cast<double>(question_count());
    return static_cast<double>(ordered_pairs_) / (n * n);
}

std::pair<Question, Question> Game::sample_nontrivial(Rng& rng) const {
    build_pair_cache();
    if (pairs_.empty()) throw ValidationError("game has no nontrivial pairs");
    std::uniform_int_distribution<std::size_t> pick(0, pairs_.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    // Diagonal pairs carry half the weight of off-diagonal ones.
    for (;;) {
        auto [x, y] = pairs_[pick(rng)];
        int c = coin(rng);
        if (x == y) {
            if (c == 0) return {x, y};
            continue;
        }
        return c == 0 ? std::make_pair(x, y) : std::make_pair(y, x);
    }
}

std::optional<Question> Game::find_question(const std::string& label) const {
    Question n = question_count();
    for (Question q = 0; q < n; ++q)
        if (question_label(q) == label) return q;
    return std::nullopt;
}

std::optional<Answer> Game::find_answer(Question q, const std::string& label) const {
    Answer n = answer_count(q);
    for (Answer a = 0; a < n; ++a)
        if (answer_label(q, a) == label) return a;
    return std::nullopt;
}

std::vector<std::string> Game::answer_labels(Question q) const {
    Answer n = answer_count(q);
    std::vector<std::string> out(n);
    for (Answer a = 0; a < n; ++a) out[a] = answer_label(q, a);
    return out;
}

Answer Game::max_answer_count() const {
    Answer best = 0;
    Question n = question_count();
    for (Question q = 0; q < n; ++q) best = std::max(best, answer_count(q));
    return best;
}

FrameStrategy::FrameStrategy(Index dim, std::vector<std::shared_ptr<const Frame>> frames)
    : dim_(dim), frames_(std::move(frames)) {
    for (const auto& f : frames_) {
        if (!f) throw ValidationError("strategy is missing a measurement");
        if (f->dim() != dim_) throw ValidationError("strategy measurements differ in dimension");
    }
}

std::shared_ptr<const Frame> FrameStrategy::frame(Question q) const {
    if (q >= frames_.size()) throw ValidationError("strategy has no measurement for question " + std::to_string(q));
    return frames_[q];
}

LazyStrategy::LazyStrategy(Index dim, Question count, Builder build, std::size_t cache_size)
    : dim_(dim), count_(count), build_(std::move(build)), cache_size_(std::max<std::size_t>(cache_size, 1)) {}

std::shared_ptr<const Frame> LazyStrategy::frame(Question q) const {
    if (q >= count_) throw ValidationError("strategy has no measurement for question " + std::to_string(q));
    {
        std::lock_guard<std::mutex> lock(mu_);
        for (const auto& [key, f] : cache_)
            if (key == q) return f;
    }
    auto f = std::make_shared<const Frame>(build_(q));
    if (f->dim() != dim_) throw ValidationError("lazy strategy built a frame of the wrong dimension");
    std::lock_guard<std::mutex> lock(mu_);
    if (cache_.size() < cache_size_) {
        cache_.emplace_back(q, f);
    } else {
        cache_[next_slot_] = {q, f};
        next_slot_ = (next_slot_ + 1) % cache_size_;
    }
    return f;
}

std::shared_ptr<FrameStrategy> materialize(const Strategy& s) {
    std::vector<std::shared_ptr<const Frame>> frames(s.question_count());
    for (Question q = 0; q < s.question_count(); ++q) frames[q] = s.frame(q);
    return std::make_shared<FrameStrategy>(s.dim(), std::move(frames));
}

std::shared_ptr<FrameStrategy> conjugate_strategy(const Strategy& s, const Matrix& u) {
    std::vector<std::shared_ptr<const Frame>> frames(s.question_count());
    for (Question q = 0; q < s.question_count(); ++q)
        frames[q] = std::make_shared<const Frame>(conjugated(*s.frame(q), u));
    return std::make_shared<FrameStrategy>(s.dim(), std::move(frames));
}

Measurement strategy_measurement(const Game& g, const Strategy& s, Question q) {
    return s.frame(q)->to_measurement(g.answer_labels(q));
}

void check_strategy(const Game& g, const Strategy& s) {
    if (s.question_count() != g.question_count())
        throw ValidationError("strategy covers " + std::to_string(s.question_count()) + " questions, game has " +
                              std::to_string(g.question_count()));
    Question n = g.question_count();
    // Only cheap checks for huge games; frames are validated when built.
    if (n > 100000) return;
    for (Question q = 0; q < n; ++q) {
        auto f = s.frame(q);
        if (f->outcome_count != g.answer_count(q))
            throw ValidationError("answer count mismatch at question " + g.question_label(q));
        if (f->dim() != s.dim()) throw ValidationError("dimension mismatch at question " + g.question_label(q));
    }
}

std::shared_ptr<FrameStrategy> tensor_extend(const Strategy& s1, const Strategy& s2, Question count,
                                             const std::function<TensorSlot(Question)>& plan) {
    std::vector<std::shared_ptr<const Frame>> frames(count);
    for (Question q = 0; q < count; ++q) {
        TensorSlot slot = plan(q);
        frames[q] = std::make_shared<const Frame>(
            kron(*s1.frame(slot.first), *s2.frame(slot.second), slot.combine, slot.count));
    }
    return std::make_shared<FrameStrategy>(s1.dim() * s2.dim(), std::move(frames));
}

}  // namespace nlg
