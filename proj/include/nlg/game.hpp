#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nlg/frame.hpp"
#include "nlg/random.hpp"

namespace nlg {

using Question = std::uint64_t;
using json = nlohmann::json;

// A synchronous game with uniform question distribution. Questions and
// answers are dense indices; labels are only for display and serialization.
class Game {
public:
    virtual ~Game() = default;

    virtual std::string name() const = 0;
    virtual Question question_count() const = 0;
    virtual Answer answer_count(Question q) const = 0;
    virtual std::string question_label(Question q) const = 0;
    virtual std::string answer_label(Question q, Answer a) const = 0;
    virtual bool nontrivial(Question x, Question y) const = 0;
    virtual bool decide(Question x, Question y, Answer a, Answer b) const = 0;
    virtual json descriptor() const = 0;

    // mask[i * bs.size() + j] = decide(x, y, as[i], bs[j]).
    virtual void accept_mask(Question x, Question y, const std::vector<Answer>& as,
                             const std::vector<Answer>& bs, std::vector<char>& mask) const;

    // Unordered nontrivial pairs x <= y in lexicographic order.
    virtual void for_each_nontrivial(const std::function<void(Question, Question)>& visit) const;
    // Fraction of ordered question pairs that are nontrivial.
    virtual double nontrivial_fraction() const;
    // Uniform over ordered nontrivial pairs.
    virtual std::pair<Question, Question> sample_nontrivial(Rng& rng) const;

    virtual std::optional<Question> find_question(const std::string& label) const;
    std::optional<Answer> find_answer(Question q, const std::string& label) const;
    std::vector<std::string> answer_labels(Question q) const;
    Answer max_answer_count() const;

private:
    mutable std::once_flag pairs_once_;
    mutable std::vector<std::pair<Question, Question>> pairs_;
    mutable std::uint64_t ordered_pairs_ = 0;
    void build_pair_cache() const;
};

using GamePtr = std::shared_ptr<const Game>;

// One projective measurement per question on a common space.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual Index dim() const = 0;
    virtual Question question_count() const = 0;
    virtual std::shared_ptr<const Frame> frame(Question q) const = 0;
};

using StrategyPtr = std::shared_ptr<const Strategy>;

class FrameStrategy : public Strategy {
public:
    FrameStrategy(Index dim, std::vector<std::shared_ptr<const Frame>> frames);
    Index dim() const override { return dim_; }
    Question question_count() const override { return frames_.size(); }
    std::shared_ptr<const Frame> frame(Question q) const override;

private:
    Index dim_;
    std::vector<std::shared_ptr<const Frame>> frames_;
};

// Builds frames on demand and keeps a small cache of recent ones.
class LazyStrategy : public Strategy {
public:
    using Builder = std::function<Frame(Question)>;
    LazyStrategy(Index dim, Question count, Builder build, std::size_t cache_size = 256);
    Index dim() const override { return dim_; }
    Question question_count() const override { return count_; }
    std::shared_ptr<const Frame> frame(Question q) const override;

private:
    Index dim_;
    Question count_;
    Builder build_;
    std::size_t cache_size_;
    mutable std::mutex mu_;
    mutable std::vector<std::pair<Question, std::shared_ptr<const Frame>>> cache_;
    mutable std::size_t next_slot_ = 0;
};

// Copies every frame into a FrameStrategy (for strategies that fit in memory).
std::shared_ptr<FrameStrategy> materialize(const Strategy& s);
std::shared_ptr<FrameStrategy> conjugate_strategy(const Strategy& s, const Matrix& u);
Measurement strategy_measurement(const Game& g, const Strategy& s, Question q);

struct PairResult {
    Question x = 0;
    Question y = 0;
    double probability = 0;
};

struct EvaluationReport {
    double value = 0;
    double trivial_mass = 0;
    Question question_count = 0;
    std::vector<PairResult> per_pair;  // unordered pairs x <= y
};

struct SampledReport {
    double estimate = 0;
    double std_error = 0;
    double deficit = 0;
    std::uint64_t samples = 0;
    double nontrivial_fraction = 0;
};

// Winning probability conditioned on the ordered pair (x, y).
double pair_probability(const Game& g, Question x, Question y, const Frame& fx, const Frame& fy);

// Exact value, summing only nontrivial pairs. Throws when |X|^2 exceeds `budget`.
EvaluationReport evaluate(const Game& g, const Strategy& s, double budget = 1e12);

SampledReport sampled_value(const Game& g, const Strategy& s, std::uint64_t samples, std::uint64_t seed);

bool is_synchronous(const Game& g, std::uint64_t exhaustive_cap = 20000000);

struct OracularReport {
    bool ok = true;
    double worst = 0;
};
OracularReport is_oracularizable(const Game& g, const Strategy& s, Tolerance tol = {});
// Same check over uniformly drawn nontrivial pairs, for games too large to enumerate.
OracularReport sampled_oracularizable(const Game& g, const Strategy& s, std::uint64_t samples, std::uint64_t seed,
                                      Tolerance tol = {});

// Per target question: the two source questions, a label combiner and the target answer count.
struct TensorSlot {
    Question first = 0;
    Question second = 0;
    LabelCombine combine;
    Answer count = 0;
};
std::shared_ptr<FrameStrategy> tensor_extend(const Strategy& s1, const Strategy& s2, Question count,
                                             const std::function<TensorSlot(Question)>& plan);

// Checks answer counts and dimensions of a strategy against a game.
void check_strategy(const Game& g, const Strategy& s);

int thread_count();

}  // namespace nlg
