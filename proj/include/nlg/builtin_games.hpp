#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nlg/game.hpp"

namespace nlg {

struct GameBundle {
    GamePtr game;
    StrategyPtr strategy;  // honest strategy
};

// Magic Square. Questions r1 r2 r3 c1 c2 c3 s11 .. s33 (indices 0..14).
// Equation answers are 3-bit assignments to the equation's variables in
// row-major order, first variable most significant.
namespace ms {
inline constexpr Question kQuestions = 15;
inline constexpr Question kEquations = 6;
Question var(int row, int col);  // 1-based
bool is_equation(Question q);
Answer answer_count(Question q);
std::string question_label(Question q);
std::string answer_label(Question q, Answer a);
// Position (0..2) of variable v inside equation e, or -1.
int position_in(Question e, Question v);
Question equation_variable(Question e, int k);
bool satisfies(Question e, Answer a);
bool nontrivial(Question x, Question y);
bool decide(Question x, Question y, Answer a, Answer b);
Matrix honest_observable(int row, int col);
const Frame& honest_frame(Question q);
}  // namespace ms

class MagicSquareGame : public Game {
public:
    std::string name() const override { return "magic_square"; }
    Question question_count() const override { return ms::kQuestions; }
    Answer answer_count(Question q) const override;
    std::string question_label(Question q) const override;
    std::string answer_label(Question q, Answer a) const override;
    bool nontrivial(Question x, Question y) const override;
    bool decide(Question x, Question y, Answer a, Answer b) const override;
    json descriptor() const override;
};

GameBundle magic_square();

// 2-of-n Magic Square. Question (i, j, x, y) with i != j (1-based copies) has
// index (pair * 15 + x) * 15 + y, ordered pairs enumerated lexicographically.
// Answer (u, v) has index u * |A_y| + v.
class TwoOfNGame : public Game {
public:
    struct Parts {
        int i = 0, j = 0;
        Question x = 0, y = 0;
    };

    explicit TwoOfNGame(int n);
    int copies() const { return n_; }
    Parts decode(Question q) const;
    Question encode(int i, int j, Question x, Question y) const;
    // Answer for copy `which` (0 = first slot, 1 = second slot).
    static Answer slot_answer(const Parts& p, Answer a, int which);

    std::string name() const override { return "two_of_n_ms"; }
    Question question_count() const override { return count_; }
    Answer answer_count(Question q) const override;
    std::string question_label(Question q) const override;
    std::string answer_label(Question q, Answer a) const override;
    bool nontrivial(Question x, Question y) const override;
    bool decide(Question x, Question y, Answer a, Answer b) const override;
    void accept_mask(Question x, Question y, const std::vector<Answer>& as, const std::vector<Answer>& bs,
                     std::vector<char>& mask) const override;
    json descriptor() const override;
    std::optional<Question> find_question(const std::string& label) const override;

private:
    int n_;
    Question count_;
};

// Honest 2-of-n strategy frame for question q on n copies of C^4.
Frame two_of_n_honest_frame(const TwoOfNGame& g, Question q);
GameBundle two_of_n_ms(int n);

// Question Sampling: the 2-of-n questions, then S_A, S_B, E_A, E_B.
// Special answers are n-bit strings, first bit most significant.
class QuestionSamplingGame : public Game {
public:
    enum Special { SA = 0, SB = 1, EA = 2, EB = 3 };

    explicit QuestionSamplingGame(int n);
    int copies() const { return base_.copies(); }
    const TwoOfNGame& base() const { return base_; }
    Question special(Special s) const { return base_.question_count() + static_cast<Question>(s); }
    bool is_special(Question q) const { return q >= base_.question_count(); }

    std::string name() const override { return "question_sampling"; }
    Question question_count() const override { return base_.question_count() + 4; }
    Answer answer_count(Question q) const override;
    std::string question_label(Question q) const override;
    std::string answer_label(Question q, Answer a) const override;
    bool nontrivial(Question x, Question y) const override;
    bool decide(Question x, Question y, Answer a, Answer b) const override;
    void accept_mask(Question x, Question y, const std::vector<Answer>& as, const std::vector<Answer>& bs,
                     std::vector<char>& mask) const override;
    json descriptor() const override;
    std::optional<Question> find_question(const std::string& label) const override;

private:
    TwoOfNGame base_;
    // For a 2-of-n question q and special r: bit position in the special answer, or -1 if trivial.
    int linked_bit(Question q, Question r) const;
};

Frame question_sampling_honest_frame(const QuestionSamplingGame& g, Question q);
GameBundle question_sampling(int n);

// Small explicit game given by tables. Nontrivial pairs are symmetric: listing
// (x, y) with accepted (a, b) also makes (y, x) nontrivial with (b, a).
class TableGame : public Game {
public:
    TableGame(std::string name, std::vector<std::string> questions, std::vector<std::vector<std::string>> answers,
              std::map<std::pair<Question, Question>, std::set<std::pair<Answer, Answer>>> accept);

    std::string name() const override { return name_; }
    Question question_count() const override { return questions_.size(); }
    Answer answer_count(Question q) const override;
    std::string question_label(Question q) const override;
    std::string answer_label(Question q, Answer a) const override;
    bool nontrivial(Question x, Question y) const override;
    bool decide(Question x, Question y, Answer a, Answer b) const override;
    json descriptor() const override;
    // Builtin games built on a table serialize as their builtin spec.
    void set_builtin_spec(json spec) { builtin_spec_ = std::move(spec); }

private:
    std::string name_;
    json builtin_spec_;
    std::vector<std::string> questions_;
    std::vector<std::vector<std::string>> answers_;
    std::map<std::pair<Question, Question>, std::set<std::pair<Answer, Answer>>> accept_;
};

// Game with questions {0,1}^bits, one answer each, no nontrivial pairs.
GameBundle trivial_game(int bits);
// Four questions 00 01 10 11 with binary answers: equality on (00,01), inequality
// on (10,11) (or, when `losing`, inequality on (00,01) too). The honest dim-2
// strategy wins every pair except (00,01) in the losing variant.
GameBundle consistency_game(bool losing);

// Builds a builtin game from {"kind": ..., "n": ...}.
GameBundle builtin_game(const json& spec);

}  // namespace nlg
