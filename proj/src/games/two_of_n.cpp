#include <sstream>

#include "nlg/builtin_games.hpp"

namespace nlg {

namespace {

Question ms_lookup(const std::string& s) {
    for (Question q = 0; q < ms::kQuestions; ++q)
        if (ms::question_label(q) == s) return q;
    return ms::kQuestions;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

// Copies shared by two questions, with the slot each occupies.
struct Shared {
    int count = 0;
    int slot_p[2] = {0, 0};
    int slot_r[2] = {0, 0};
};

Shared shared_copies(const TwoOfNGame::Parts& p, const TwoOfNGame::Parts& r) {
    Shared s;
    int pc[2] = {p.i, p.j}, rc[2] = {r.i, r.j};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            if (pc[a] == rc[b]) {
                s.slot_p[s.count] = a;
                s.slot_r[s.count] = b;
                ++s.count;
            }
    return s;
}

Question slot_question(const TwoOfNGame::Parts& p, int slot) { return slot == 0 ? p.x : p.y; }

}  // namespace

TwoOfNGame::TwoOfNGame(int n) : n_(n) {
    if (n < 2) throw ValidationError("2-of-n Magic Square needs n >= 2");
    count_ = static_cast<Question>(n) * static_cast<Question>(n - 1) * ms::kQuestions * ms::kQuestions;
}

TwoOfNGame::Parts TwoOfNGame::decode(Question q) const {
    if (q >= count_) throw ValidationError("question index out of range");
    Parts p;
    Question pair = q / (ms::kQuestions * ms::kQuestions);
    Question rest = q % (ms::kQuestions * ms::kQuestions);
    p.x = rest / ms::kQuestions;
    p.y = rest % ms::kQuestions;
    p.i = static_cast<int>(pair / static_cast<Question>(n_ - 1)) + 1;
    int jj = static_cast<int>(pair % static_cast<Question>(n_ - 1));
    p.j = jj + 1 < p.i ? jj + 1 : jj + 2;
    return p;
}

Question TwoOfNGame::encode(int i, int j, Question x, Question y) const {
    if (i < 1 || j < 1 || i > n_ || j > n_ || i == j || x >= ms::kQuestions || y >= ms::kQuestions)
        throw ValidationError("invalid 2-of-n question");
    Question pair = static_cast<Question>(i - 1) * static_cast<Question>(n_ - 1) +
                    static_cast<Question>(j < i ? j - 1 : j - 2);
    return (pair * ms::kQuestions + x) * ms::kQuestions + y;
}

Answer TwoOfNGame::slot_answer(const Parts& p, Answer a, int which) {
    Answer ny = ms::answer_count(p.y);
    return which == 0 ? a / ny : a % ny;
}

Answer TwoOfNGame::answer_count(Question q) const {
    Parts p = decode(q);
    return ms::answer_count(p.x) * ms::answer_count(p.y);
}

std::string TwoOfNGame::question_label(Question q) const {
    Parts p = decode(q);
    return std::to_string(p.i) + "," + std::to_string(p.j) + "," + ms::question_label(p.x) + "," +
           ms::question_label(p.y);
}

std::string TwoOfNGame::answer_label(Question q, Answer a) const {
    Parts p = decode(q);
    if (a >= answer_count(q)) throw ValidationError("answer out of range");
    return ms::answer_label(p.x, slot_answer(p, a, 0)) + "," + ms::answer_label(p.y, slot_answer(p, a, 1));
}

bool TwoOfNGame::nontrivial(Question x, Question y) const {
    Parts p = decode(x), r = decode(y);
    Shared s = shared_copies(p, r);
    if (s.count == 0) return false;
    for (int k = 0; k < s.count; ++k)
        if (!ms::nontrivial(slot_question(p, s.slot_p[k]), slot_question(r, s.slot_r[k]))) return false;
    return true;
}

bool TwoOfNGame::decide(Question x, Question y, Answer a, Answer b) const {
    if (!nontrivial(x, y)) return true;
    Parts p = decode(x), r = decode(y);
    Shared s = shared_copies(p, r);
    for (int k = 0; k < s.count; ++k) {
        Question qx = slot_question(p, s.slot_p[k]), qy = slot_question(r, s.slot_r[k]);
        if (!ms::decide(qx, qy, slot_answer(p, a, s.slot_p[k]), slot_answer(r, b, s.slot_r[k]))) return false;
    }
    return true;
}

void TwoOfNGame::accept_mask(Question x, Question y, const std::vector<Answer>& as, const std::vector<Answer>& bs,
                             std::vector<char>& mask) const {
    mask.assign(as.size() * bs.size(), 1);
    if (!nontrivial(x, y)) return;
    Parts p = decode(x), r = decode(y);
    Shared s = shared_copies(p, r);
    for (std::size_t i = 0; i < as.size(); ++i)
        for (std::size_t j = 0; j < bs.size(); ++j) {
            bool ok = true;
            for (int k = 0; k < s.count && ok; ++k)
                ok = ms::decide(slot_question(p, s.slot_p[k]), slot_question(r, s.slot_r[k]),
                                slot_answer(p, as[i], s.slot_p[k]), slot_answer(r, bs[j], s.slot_r[k]));
            mask[i * bs.size() + j] = ok ? 1 : 0;
        }
}

json TwoOfNGame::descriptor() const { return json{{"builtin", {{"kind", "two_of_n_ms"}, {"n", n_}}}}; }

std::optional<Question> TwoOfNGame::find_question(const std::string& label) const {
    auto parts = split(label, ',');
    if (parts.size() != 4) return std::nullopt;
    try {
        int i = std::stoi(parts[0]), j = std::stoi(parts[1]);
        Question x = ms_lookup(parts[2]), y = ms_lookup(parts[3]);
        if (i < 1 || j < 1 || i > n_ || j > n_ || i == j || x >= ms::kQuestions || y >= ms::kQuestions)
            return std::nullopt;
        return encode(i, j, x, y);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

Frame two_of_n_honest_frame(const TwoOfNGame& g, Question q) {
    auto p = g.decode(q);
    Answer ny = ms::answer_count(p.y);
    Answer count = ms::answer_count(p.x) * ny;
    Frame acc = identity_frame(1, 0, count);
    for (int c = 1; c <= g.copies(); ++c) {
        if (c == p.i) {
            acc = kron(acc, ms::honest_frame(p.x), [ny](Answer s, Answer a) { return s + a * ny; }, count);
        } else if (c == p.j) {
            acc = kron(acc, ms::honest_frame(p.y), [](Answer s, Answer b) { return s + b; }, count);
        } else {
            acc = kron(acc, identity_frame(4), [](Answer s, Answer) { return s; }, count);
        }
    }
    return acc;
}

GameBundle two_of_n_ms(int n) {
    auto game = std::make_shared<TwoOfNGame>(n);
    Index dim = 1;
    for (int c = 0; c < n; ++c) dim *= 4;
    if (dim <= 64) {
        std::vector<std::shared_ptr<const Frame>> frames(game->question_count());
        for (Question q = 0; q < game->question_count(); ++q)
            frames[q] = std::make_shared<const Frame>(two_of_n_honest_frame(*game, q));
        return {game, std::make_shared<FrameStrategy>(dim, std::move(frames))};
    }
    auto builder = [game](Question q) { return two_of_n_honest_frame(*game, q); };
    return {game, std::make_shared<LazyStrategy>(dim, game->question_count(), builder)};
}

}  // namespace nlg
