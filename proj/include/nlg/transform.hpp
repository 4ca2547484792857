#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "nlg/builtin_games.hpp"
#include "nlg/cooklevin.hpp"
#include "nlg/game.hpp"

namespace nlg {

// Questions: the base questions x, then pairs (x, y) at |X| + x * |X| + y. A pair
// question is answered by (a, b) with index a * |A_y| + b.
class OracleGame : public Game {
public:
    explicit OracleGame(GamePtr base);

    const Game& base() const { return *base_; }
    GamePtr base_ptr() const { return base_; }
    Question base_count() const { return n_; }
    bool is_pair(Question q) const { return q >= n_; }
    Question pair_question(Question x, Question y) const { return n_ + x * n_ + y; }
    std::pair<Question, Question> pair_parts(Question q) const;
    Answer pair_answer(Question x, Question y, Answer a, Answer b) const;
    std::pair<Answer, Answer> split_pair_answer(Question q, Answer c) const;

    std::string name() const override { return "oracularized(" + base_->name() + ")"; }
    Question question_count() const override { return n_ + n_ * n_; }
    Answer answer_count(Question q) const override;
    std::string question_label(Question q) const override;
    std::string answer_label(Question q, Answer a) const override;
    bool nontrivial(Question x, Question y) const override;
    bool decide(Question x, Question y, Answer a, Answer b) const override;
    json descriptor() const override;

    void for_each_nontrivial(const std::function<void(Question, Question)>& visit) const override;
    double nontrivial_fraction() const override;
    std::pair<Question, Question> sample_nontrivial(Rng& rng) const override;
    std::optional<Question> find_question(const std::string& label) const override;

private:
    GamePtr base_;
    Question n_;
    double base_ordered_ = 0;  // ordered nontrivial pairs of the base game
    double diagonal_ = 0;      // nontrivial diagonal pairs (x, x) of the base game
};

std::shared_ptr<OracleGame> oracularize(GamePtr g);
// Isolated questions keep their measurement; a pair question measures both jointly when
// the pair is nontrivial in the base game and answers (0, 0) otherwise.
StrategyPtr lift_oracularize(const OracleGame& g, StrategyPtr s, Tolerance tol = {1e-8});

// Question Sampling questions, then I, I_A, I_B, I_AS_B, I_AE_B, I_BS_A, I_BE_A.
// A pair (x, a) of the base game flattens to k = offset(x) + a, with K such values.
// Answers: I -> k1 * K + k2, I_W -> k, the four composite questions -> k * |X| + y.
class IntrospectGame : public Game {
public:
    enum Special { I = 0, IA, IB, IASB, IAEB, IBSA, IBEA };

    explicit IntrospectGame(GamePtr base);

    const Game& base() const { return *base_; }
    GamePtr base_ptr() const { return base_; }
    const QuestionSamplingGame& sampling() const { return qs_; }
    int bits() const { return ell_; }
    Question special(Special s) const { return qs_.question_count() + static_cast<Question>(s); }
    bool is_special(Question q) const { return q >= qs_.question_count(); }
    Answer flat_count() const { return K_; }
    Answer flatten(Question x, Answer a) const { return offset_[x] + a; }
    std::pair<Question, Answer> unflatten(Answer k) const;
    // Base question named by an n-bit Question Sampling answer, and back.
    Question question_of(Answer z) const { return from_bits_[z]; }
    Answer bits_of(Question x) const { return to_bits_[x]; }

    std::string name() const override { return "introspected(" + base_->name() + ")"; }
    Question question_count() const override { return qs_.question_count() + 7; }
    Answer answer_count(Question q) const override;
    std::string question_label(Question q) const override;
    std::string answer_label(Question q, Answer a) const override;
    bool nontrivial(Question x, Question y) const override;
    bool decide(Question x, Question y, Answer a, Answer b) const override;
    json descriptor() const override;
    std::optional<Question> find_question(const std::string& label) const override;

private:
    GamePtr base_;
    int ell_;
    QuestionSamplingGame qs_;
    Question nx_;
    Answer K_ = 0;
    std::vector<Answer> offset_;
    std::vector<Question> from_bits_;
    std::vector<Answer> to_bits_;

    bool ordered_decide(Question q, Question r, Answer a, Answer b, bool& handled) const;
    std::string flat_label(Answer k) const;
};

std::shared_ptr<IntrospectGame> introspect(GamePtr g);
StrategyPtr lift_introspection(const IntrospectGame& g, StrategyPtr s, Tolerance tol = {1e-8});

// Proof-question layout shared by the answer-reduced game and its lift.
struct ProofShape {
    int P = 0;  // bits per base answer
    int T = 0;
    cl::Layout layout;
    std::uint64_t L = 0;
    std::uint64_t per_game = 0;  // L + L^2 + L^3
};

// Answer labels: 0,1 are one bit, 2..5 two bits, 6..13 three bits.
namespace ans {
inline constexpr Answer kLabels = 14;
inline Answer one(int b) { return static_cast<Answer>(b); }
inline Answer two(int b1, int b2) { return 2 + static_cast<Answer>(b1 << 1 | b2); }
inline Answer three(int b1, int b2, int b3) { return 6 + static_cast<Answer>(b1 << 2 | b2 << 1 | b3); }
int width(Answer a);       // 1, 2 or 3
int bit(Answer a, int k);  // k-th bit, first is most significant
std::string label(Answer a);
}  // namespace ans

// Decider machines for base pairs, built from the truth table of D(x, y, ., .).
class DeciderCache {
public:
    DeciderCache(const Game& g, int P, std::size_t capacity = 4096);
    std::shared_ptr<const cl::TuringMachine> machine(Question x, Question y) const;
    std::vector<std::uint8_t> input(Answer a, Answer b) const;

private:
    const Game& g_;
    int P_;
    std::size_t capacity_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<Question, Question>, std::shared_ptr<const cl::TuringMachine>> by_pair_;
    mutable std::map<std::string, std::shared_ptr<const cl::TuringMachine>> by_table_;
};

class AnswerReducedGame : public Game {
public:
    enum class Part { single, pair, triple };
    struct Parts {
        Question g = 0;  // question of the oracularized game
        Part part = Part::single;
        std::uint64_t i = 0, j = 0, k = 0;  // 1-based proof indices
    };

    AnswerReducedGame(GamePtr base, int T);

    const Game& base() const { return *base_; }
    const OracleGame& oracle() const { return *orac_; }
    const ProofShape& shape() const { return shape_; }
    const DeciderCache& deciders() const { return *cache_; }
    Parts decode(Question q) const;
    Question encode(const Parts& p) const;
    // Value identity for strategies that win every row except on rejected base answers:
    // value = 1 - gamma * (1 - base value).
    double losing_weight() const;
    double nontrivial_count() const;

    std::string name() const override { return "answer_reduced(" + base_->name() + ")"; }
    Question question_count() const override { return count_; }
    Answer answer_count(Question) const override { return ans::kLabels; }
    std::string question_label(Question q) const override;
    std::string answer_label(Question q, Answer a) const override;
    bool nontrivial(Question x, Question y) const override;
    bool decide(Question x, Question y, Answer a, Answer b) const override;
    json descriptor() const override;

    void for_each_nontrivial(const std::function<void(Question, Question)>& visit) const override;
    double nontrivial_fraction() const override;
    std::pair<Question, Question> sample_nontrivial(Rng& rng) const override;
    std::optional<Question> find_question(const std::string& label) const override;

private:
    GamePtr base_;
    std::shared_ptr<OracleGame> orac_;
    ProofShape shape_;
    Question count_ = 0;
    std::unique_ptr<DeciderCache> cache_;
    double base_ordered_ = 0;

    // Returns -1 when (q, r) is trivial, else the verdict.
    int ordered_verdict(const Parts& q, const Parts& r, Answer a, Answer b, bool check) const;
};

int answer_bits(const Game& g);
// Checks T against the decider machines: every run on sampled (or all) base pairs must halt
// with the decider's verdict within T steps.
void attest_time_bound(const Game& g, int T, std::uint64_t seed = 1);

std::shared_ptr<AnswerReducedGame> answer_reduce(GamePtr g, int T);
// The returned strategy refers to `g`, which must outlive it.
StrategyPtr lift_answer_reduce(const AnswerReducedGame& g, StrategyPtr s, Tolerance tol = {1e-8});

std::shared_ptr<AnswerReducedGame> gapless_compress(GamePtr g, int T);
StrategyPtr lift_gapless_compress(const AnswerReducedGame& g, StrategyPtr s, Tolerance tol = {1e-8});

// {"transform": name, "params": {...}, "base": <game JSON>}; plain game JSON passes through.
GameBundle load_game(const json& j);
// Same, lifting `base_strategy` (or the built-in honest strategy when null) through each transform.
// The lifted strategy may refer to the returned game, so keep the bundle together.
GameBundle load_lifted(const json& j, const json& base_strategy = nullptr);
json transform_descriptor(const std::string& name, const json& params, const Game& base);

}  // namespace nlg
