#include "nlg/builtin_games.hpp"

namespace nlg {

namespace {

const char* const kSpecialLabels[4] = {"S_A", "S_B", "E_A", "E_B"};

}  // namespace

QuestionSamplingGame::QuestionSamplingGame(int n) : base_(n) {
    if (n % 2 != 0) throw ValidationError("Question Sampling needs an even n");
    if (n > 30) throw ValidationError("Question Sampling answer strings limited to 30 bits");
}

int QuestionSamplingGame::linked_bit(Question q, Question r) const {
    auto p = base_.decode(q);
    int half = copies() / 2;
    auto kind = static_cast<Special>(r - base_.question_count());
    bool first_half = p.i <= half && p.j > half;
    bool second_half = p.i > half && p.j <= half;
    Question odd = 0, even = 0;
    if (kind == SA || kind == SB) {
        odd = ms::var(1, 1);
        even = ms::var(1, 2);
    } else {
        odd = ms::var(2, 2);
        even = ms::var(2, 1);
    }
    int copy = 0;
    if ((kind == SA || kind == EA) && first_half) copy = p.i;
    if ((kind == SB || kind == EB) && second_half) copy = p.i - half;
    if (copy == 0) return -1;
    if (p.x == odd) return 2 * copy - 1;
    if (p.x == even) return 2 * copy;
    return -1;
}

Answer QuestionSamplingGame::answer_count(Question q) const {
    if (is_special(q)) {
        if (q >= question_count()) throw ValidationError("question index out of range");
        return Answer{1} << copies();
    }
    return base_.answer_count(q);
}

std::string QuestionSamplingGame::question_label(Question q) const {
    if (is_special(q)) {
        if (q >= question_count()) throw ValidationError("question index out of range");
        return kSpecialLabels[q - base_.question_count()];
    }
    return base_.question_label(q);
}

std::string QuestionSamplingGame::answer_label(Question q, Answer a) const {
    if (is_special(q)) {
        if (a >= answer_count(q)) throw ValidationError("answer out of range");
        return bit_string(a, copies());
    }
    return base_.answer_label(q, a);
}

bool QuestionSamplingGame::nontrivial(Question x, Question y) const {
    bool sx = is_special(x), sy = is_special(y);
    if (!sx && !sy) return base_.nontrivial(x, y);
    if (sx && sy) return x == y;
    return sx ? linked_bit(y, x) >= 0 : linked_bit(x, y) >= 0;
}

bool QuestionSamplingGame::decide(Question x, Question y, Answer a, Answer b) const {
    bool sx = is_special(x), sy = is_special(y);
    if (!sx && !sy) return base_.decide(x, y, a, b);
    if (sx && sy) return x != y || a == b;
    if (sx) {
        std::swap(x, y);
        std::swap(a, b);
    }
    int bit = linked_bit(x, y);
    if (bit < 0) return true;
    Answer first = TwoOfNGame::slot_answer(base_.decode(x), a, 0);
    return ((b >> (copies() - bit)) & 1u) == first;
}

void QuestionSamplingGame::accept_mask(Question x, Question y, const std::vector<Answer>& as,
                                       const std::vector<Answer>& bs, std::vector<char>& mask) const {
    if (!is_special(x) && !is_special(y)) {
        base_.accept_mask(x, y, as, bs, mask);
        return;
    }
    Game::accept_mask(x, y, as, bs, mask);
}

json QuestionSamplingGame::descriptor() const {
    return json{{"builtin", {{"kind", "question_sampling"}, {"n", copies()}}}};
}

std::optional<Question> QuestionSamplingGame::find_question(const std::string& label) const {
    for (int k = 0; k < 4; ++k)
        if (label == kSpecialLabels[k]) return base_.question_count() + static_cast<Question>(k);
    return base_.find_question(label);
}

Frame question_sampling_honest_frame(const QuestionSamplingGame& g, Question q) {
    if (!g.is_special(q)) return two_of_n_honest_frame(g.base(), q);
    int n = g.copies(), half = n / 2;
    auto kind = static_cast<QuestionSamplingGame::Special>(q - g.base().question_count());
    bool sample = kind == QuestionSamplingGame::SA || kind == QuestionSamplingGame::SB;
    bool first = kind == QuestionSamplingGame::SA || kind == QuestionSamplingGame::EA;
    auto pair_code = [](Answer a, Answer b) { return 2 * a + b; };
    Frame joint = sample ? refine(ms::honest_frame(ms::var(1, 1)), ms::honest_frame(ms::var(1, 2)), pair_code, 4)
                         : refine(ms::honest_frame(ms::var(2, 2)), ms::honest_frame(ms::var(2, 1)), pair_code, 4);
    Answer count = Answer{1} << n;
    Frame acc = identity_frame(1, 0, count);
    for (int c = 1; c <= n; ++c) {
        bool active = first ? c <= half : c > half;
        if (active) {
            int slot = first ? c : c - half;
            int shift = n - 2 * slot;
            acc = kron(acc, joint, [shift](Answer s, Answer v) { return s + (v << shift); }, count);
        } else {
            acc = kron(acc, identity_frame(4), [](Answer s, Answer) { return s; }, count);
        }
    }
    return acc;
}

GameBundle question_sampling(int n) {
    auto game = std::make_shared<QuestionSamplingGame>(n);
    Index dim = 1;
    for (int c = 0; c < n; ++c) dim *= 4;
    if (dim <= 64) {
        std::vector<std::shared_ptr<const Frame>> frames(game->question_count());
        for (Question q = 0; q < game->question_count(); ++q)
            frames[q] = std::make_shared<const Frame>(question_sampling_honest_frame(*game, q));
        return {game, std::make_shared<FrameStrategy>(dim, std::move(frames))};
    }
    auto builder = [game](Question q) { return question_sampling_honest_frame(*game, q); };
    return {game, std::make_shared<LazyStrategy>(dim, game->question_count(), builder)};
}

}  // namespace nlg
