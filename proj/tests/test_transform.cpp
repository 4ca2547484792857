#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "nlg/json_io.hpp"
#include "nlg/transform.hpp"

using namespace nlg;

namespace {

// One question with binary answers; only the synchronous check.
GamePtr single_question_game() {
    std::map<std::pair<Question, Question>, std::set<std::pair<Answer, Answer>>> acc;
    acc[{0, 0}] = {{0, 0}, {1, 1}};
    return std::make_shared<TableGame>("single", std::vector<std::string>{"q"},
                                       std::vector<std::vector<std::string>>{{"0", "1"}}, acc);
}

// Value summed over every ordered pair with a caller-supplied rule.
double dense_value(const Game& g, const Strategy& s,
                   const std::function<bool(Question, Question, Answer, Answer)>& rule) {
    double n = static_cast<double>(g.question_count()), total = 0;
    for (Question x = 0; x < g.question_count(); ++x)
        for (Question y = 0; y < g.question_count(); ++y) {
            auto fx = s.frame(x), fy = s.frame(y);
            auto w = block_weights(*fx, *fy);
            for (std::size_t i = 0; i < fx->blocks(); ++i)
                for (std::size_t j = 0; j < fy->blocks(); ++j)
                    if (rule(x, y, fx->outcome[i], fy->outcome[j])) total += w(i, j);
        }
    return total / (n * n);
}

// Oracularized rule written out from the construction: labels "(x|y)" and base answers.
bool oracle_rule(const Game& base, Question n, Question q, Question r, Answer a, Answer b) {
    if (q == r) return a == b;
    bool qp = q >= n, rp = r >= n;
    if (qp == rp) return true;
    if (!qp) return oracle_rule(base, n, r, q, b, a);
    Question x = (q - n) / n, y = (q - n) % n;
    if (!base.nontrivial(x, y) || (r != x && r != y)) return true;
    Answer u = a / base.answer_count(y), v = a % base.answer_count(y);
    if (r == x && b != u) return false;
    if (r == y && b != v) return false;
    return base.decide(x, y, u, v);
}

double base_value(const GameBundle& b) { return evaluate(*b.game, *b.strategy).value; }

}  // namespace

TEST_CASE("oracularization sizes and errors") {
    auto single = oracularize(single_question_game());
    CHECK(single->question_count() == 2);
    CHECK(single->question_label(1) == "(q|q)");
    CHECK(is_synchronous(*single));

    auto ms = magic_square();
    auto g = oracularize(ms.game);
    CHECK(g->question_count() == 240);
    CHECK(is_synchronous(*g));
    for (Question q = 0; q < g->question_count(); ++q) CHECK(g->find_question(g->question_label(q)) == q);

    std::map<std::pair<Question, Question>, std::set<std::pair<Answer, Answer>>> acc;
    acc[{0, 0}] = {{0, 1}, {1, 0}};
    auto bad = std::make_shared<TableGame>("bad", std::vector<std::string>{"q"},
                                           std::vector<std::vector<std::string>>{{"0", "1"}}, acc);
    CHECK_THROWS_AS(oracularize(bad), ValidationError);
}

TEST_CASE("oracularized lift matches the dense oracle") {
    for (bool losing : {false, true}) {
        auto b = consistency_game(losing);
        auto g = oracularize(b.game);
        auto s = lift_oracularize(*g, b.strategy);
        auto rep = evaluate(*g, *s);
        double oracle = dense_value(*g, *s, [&](Question q, Question r, Answer a, Answer c) {
            return oracle_rule(*b.game, 4, q, r, a, c);
        });
        CHECK(rep.value == doctest::Approx(oracle).epsilon(1e-12));
        if (!losing) CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-12));
        if (losing) CHECK(rep.value < 1 - 1e-6);
        CHECK(is_oracularizable(*g, *s).ok);

        // Counting and sampling agree with a dense scan.
        std::uint64_t dense = 0;
        for (Question q = 0; q < g->question_count(); ++q)
            for (Question r = 0; r < g->question_count(); ++r) dense += g->nontrivial(q, r);
        CHECK(g->nontrivial_fraction() * 400 == doctest::Approx(static_cast<double>(dense)));
        std::uint64_t listed = 0;
        g->for_each_nontrivial([&](Question q, Question r) { listed += q == r ? 1 : 2; });
        CHECK(listed == dense);

        Rng rng(4);
        std::map<std::pair<Question, Question>, int> freq;
        const int draws = 44000;
        for (int k = 0; k < draws; ++k) {
            auto pr = g->sample_nontrivial(rng);
            CHECK(g->nontrivial(pr.first, pr.second));
            ++freq[pr];
        }
        CHECK(freq.size() == dense);
        double expect = static_cast<double>(draws) / static_cast<double>(dense);
        for (const auto& [k, c] : freq) CHECK(std::abs(c - expect) < 6 * std::sqrt(expect));
    }
}

TEST_CASE("magic square oracularized honest value") {
    auto ms = magic_square();
    auto g = oracularize(ms.game);
    auto s = lift_oracularize(*g, ms.strategy);
    CHECK(evaluate(*g, *s).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("introspection structure") {
    auto t = trivial_game(2);
    auto g = introspect(t.game);
    CHECK(g->question_count() == QuestionSamplingGame(2).question_count() + 7);
    CHECK(g->question_count() == 461);
    CHECK(is_synchronous(*g));
    CHECK_THROWS_AS(introspect(trivial_game(1).game), ValidationError);
    CHECK_THROWS_AS(introspect(trivial_game(3).game), ValidationError);
    CHECK_THROWS_AS(introspect(magic_square().game), ValidationError);

    // Edges among the eleven special questions, from the figure.
    std::set<std::pair<std::string, std::string>> edges = {
        {"I_AS_B", "S_B"}, {"I_AS_B", "I_A"},  {"S_B", "I_B"},    {"I_A", "I_AE_B"},
        {"I_A", "I"},      {"I", "I_B"},       {"I_B", "I_BE_A"}, {"E_B", "I_AE_B"},
        {"I_BE_A", "E_A"}, {"S_A", "I_A"},     {"S_A", "I_BS_A"}, {"I_BS_A", "I_B"}};
    std::vector<std::string> specials = {"S_A",    "S_B",    "E_A",    "E_B",    "I",     "I_A",
                                         "I_B",    "I_AS_B", "I_AE_B", "I_BS_A", "I_BE_A"};
    int found = 0;
    for (const auto& u : specials)
        for (const auto& v : specials) {
            Question q = *g->find_question(u), r = *g->find_question(v);
            bool want = u == v || edges.count({u, v}) || edges.count({v, u});
            CHECK_MESSAGE(g->nontrivial(q, r) == want, u << " " << v);
            found += (u < v) && g->nontrivial(q, r);
        }
    CHECK(found == 12);
    // Special questions never meet the 2-of-n questions.
    for (Question q = 0; q < 450; q += 7) CHECK_FALSE(g->nontrivial(q, g->special(IntrospectGame::I)));
}

TEST_CASE("introspection rows") {
    auto b = consistency_game(true);
    auto g = introspect(b.game);
    Question I = g->special(IntrospectGame::I), IA = g->special(IntrospectGame::IA);
    Question SA = g->sampling().special(QuestionSamplingGame::SA);
    Question IBEA = g->special(IntrospectGame::IBEA), EA = g->sampling().special(QuestionSamplingGame::EA);
    // Base questions 00 01 are a losing pair: answers must differ.
    Answer k00_0 = g->flatten(0, 0), k01_1 = g->flatten(1, 1), k01_0 = g->flatten(1, 0);
    CHECK(g->decide(I, IA, k00_0 * 8 + k01_1, k00_0));
    CHECK_FALSE(g->decide(I, IA, k00_0 * 8 + k01_0, k00_0));
    CHECK_FALSE(g->decide(I, IA, k00_0 * 8 + k01_1, g->flatten(0, 1)));
    CHECK(g->decide(IA, I, k00_0, k00_0 * 8 + k01_1));
    // Trivial base pair: anything goes.
    Answer k10_0 = g->flatten(2, 0);
    CHECK(g->decide(I, IA, k00_0 * 8 + k10_0, g->flatten(3, 1)));
    // I_A against S_A compares the sampled question.
    CHECK(g->decide(IA, SA, g->flatten(2, 1), 2));
    CHECK_FALSE(g->decide(IA, SA, g->flatten(2, 1), 1));
    // I_BE_A against E_A compares the third component.
    CHECK(g->decide(IBEA, EA, g->flatten(1, 0) * 4 + 3, 3));
    CHECK_FALSE(g->decide(IBEA, EA, g->flatten(1, 0) * 4 + 3, 2));
    CHECK(g->answer_label(IA, g->flatten(2, 1)) == "(10:1)");
}

TEST_CASE("introspection lift values") {
    SUBCASE("trivial base") {
        auto t = trivial_game(2);
        auto g = introspect(t.game);
        auto s = lift_introspection(*g, t.strategy);
        CHECK(s->dim() == 16);
        CHECK(evaluate(*g, *s).value == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("value one base") {
        auto b = consistency_game(false);
        auto g = introspect(b.game);
        auto s = lift_introspection(*g, b.strategy);
        CHECK(s->dim() == 32);
        auto rep = evaluate(*g, *s);
        CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(is_oracularizable(*g, *s, {1e-8}).ok);
    }
    SUBCASE("losing base") {
        auto b = consistency_game(true);
        double v = base_value(b);
        CHECK(v < 1);
        auto g = introspect(b.game);
        auto s = lift_introspection(*g, b.strategy);
        auto rep = evaluate(*g, *s);
        double n = static_cast<double>(g->question_count());
        // Only (I, I_A) and (I, I_B), both orders, can lose, each with probability 1 - v.
        CHECK(rep.value == doctest::Approx(1 - 4 * (1 - v) / (n * n)).epsilon(1e-12));
        CHECK(rep.value >= v);
        Question I = g->special(IntrospectGame::I);
        for (const auto& pr : rep.per_pair) {
            bool row = (pr.x == I || pr.y == I) && pr.x != pr.y;
            if (!row) CHECK(pr.probability == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("answer reduction wiring") {
    auto b = consistency_game(true);
    auto g = answer_reduce(b.game, 2);
    const auto& sh = g->shape();
    CHECK(sh.P == 1);
    CHECK(sh.L == 71);
    CHECK(g->answer_count(0) == 14);
    std::set<std::string> labels;
    for (Answer a = 0; a < 14; ++a) labels.insert(g->answer_label(0, a));
    CHECK(labels.size() == 14);
    CHECK(g->question_count() == 20 * (71 + 71 * 71 + 71 * 71 * 71));
    CHECK_THROWS_AS(answer_reduce(b.game, 1), ValidationError);

    using P = AnswerReducedGame::Part;
    const auto& orac = g->oracle();
    Question xy = orac.pair_question(0, 1);
    auto m = g->deciders().machine(0, 1);
    auto f = cl::compile(*m, 2, 2);
    // Row 2 against the full formula restricted to the triple's variables.
    Rng rng(9);
    std::uniform_int_distribution<std::uint64_t> pos(1, 71);
    int accepted = 0;
    for (int trial = 0; trial < 400; ++trial) {
        std::uint64_t t[3] = {pos(rng), pos(rng), pos(rng)};
        if (trial % 3 == 0) t[1] = t[0];
        std::uint64_t i = t[trial % 3];
        Question q = g->encode({xy, P::single, i, 0, 0});
        Question r = g->encode({xy, P::triple, t[0], t[1], t[2]});
        CHECK(g->nontrivial(q, r));
        for (int rbit = 0; rbit < 2; ++rbit)
            for (int s = 0; s < 8; ++s) {
                int bits[3] = {s >> 2 & 1, s >> 1 & 1, s & 1};
                bool ok = true;
                std::map<std::uint64_t, int> val;
                for (int k = 0; k < 3; ++k) {
                    if (val.count(t[k]) && val[t[k]] != bits[k]) ok = false;
                    val[t[k]] = bits[k];
                }
                if (val[i] != rbit) ok = false;
                for (const auto& c : f.clauses) {
                    bool inside = true, sat = false;
                    for (auto lit : c) {
                        auto v = static_cast<std::uint64_t>(std::llabs(lit));
                        if (!val.count(v)) inside = false;
                        else if ((val[v] == 1) == (lit > 0)) sat = true;
                    }
                    if (inside && !sat) ok = false;
                }
                bool got = g->decide(q, r, ans::one(rbit), ans::three(bits[0], bits[1], bits[2]));
                CHECK(got == ok);
                CHECK(g->decide(r, q, ans::three(bits[0], bits[1], bits[2]), ans::one(rbit)) == ok);
                accepted += ok;
            }
        // Index outside the triple: trivial.
        std::uint64_t other = 1;
        while (other == t[0] || other == t[1] || other == t[2]) ++other;
        Question q2 = g->encode({xy, P::single, other, 0, 0});
        CHECK_FALSE(g->nontrivial(q2, r));
        CHECK(g->decide(q2, r, ans::one(1), ans::three(0, 0, 0)));
    }
    CHECK(accepted > 0);

    // Rows 3 and 4: isolated answers are (a_j, a_k).
    Question single1 = g->encode({xy, P::single, 1, 0, 0}), single2 = g->encode({xy, P::single, 2, 0, 0});
    Question iso_x = g->encode({0, P::pair, 1, 5, 0}), iso_y = g->encode({1, P::pair, 7, 1, 0});
    CHECK(g->nontrivial(single1, iso_x));
    CHECK(g->decide(single1, iso_x, ans::one(1), ans::two(1, 0)));
    CHECK_FALSE(g->decide(single1, iso_x, ans::one(0), ans::two(1, 0)));
    CHECK(g->nontrivial(single2, iso_y));
    CHECK(g->decide(single2, iso_y, ans::one(1), ans::two(0, 1)));
    CHECK_FALSE(g->decide(single2, iso_y, ans::one(1), ans::two(1, 0)));
    CHECK_FALSE(g->nontrivial(single2, iso_x));
    CHECK_FALSE(g->nontrivial(single1, iso_y));
    // Trivial base pair (00, 10): no rows.
    Question tr = orac.pair_question(0, 2);
    CHECK_FALSE(g->nontrivial(g->encode({tr, P::single, 1, 0, 0}), g->encode({tr, P::triple, 1, 2, 3})));
}

TEST_CASE("answer reduction counts") {
    auto g = answer_reduce(single_question_game(), 2);
    const std::uint64_t L = g->shape().L;
    CHECK(g->question_count() == 2 * (L + L * L + L * L * L));
    // Partners of one single question, counted by brute force over every question.
    using P = AnswerReducedGame::Part;
    Question q = g->encode({1, P::single, 1, 0, 0});
    std::uint64_t partners = 0;
    for (Question r = 0; r < g->question_count(); ++r) partners += g->nontrivial(q, r);
    std::uint64_t triples = 0;
    for (std::uint64_t a = 1; a <= L; ++a)
        for (std::uint64_t b = 1; b <= L; ++b)
            for (std::uint64_t c = 1; c <= L; ++c) triples += (a == 1 || b == 1 || c == 1);
    std::uint64_t pairs = 0;
    for (std::uint64_t a = 1; a <= L; ++a)
        for (std::uint64_t b = 1; b <= L; ++b) pairs += (a == 1 || b == 1);
    CHECK(partners == 1 + triples + pairs);

    std::uint64_t listed = 0, diag = 0;
    bool all_nontrivial = true;
    std::uint64_t stride = 0;
    g->for_each_nontrivial([&](Question u, Question v) {
        listed += u == v ? 1 : 2;
        diag += u == v;
        if (++stride % 9973 == 0) all_nontrivial = all_nontrivial && g->nontrivial(u, v) && u <= v;
    });
    CHECK(all_nontrivial);
    CHECK(diag == g->question_count());
    CHECK(static_cast<double>(listed) == doctest::Approx(g->nontrivial_count()).epsilon(1e-15));
    // The single-question base has rows 3 and 4 for one index each.
    double expect = static_cast<double>(g->question_count()) + 2.0 * (static_cast<double>(L) * static_cast<double>(triples) + 2.0 * static_cast<double>(pairs));
    CHECK(static_cast<double>(listed) == doctest::Approx(expect).epsilon(1e-15));

    Rng rng(3);
    for (int k = 0; k < 2000; ++k) {
        auto pr = g->sample_nontrivial(rng);
        CHECK(g->nontrivial(pr.first, pr.second));
    }
    for (Question q2 : {Question{0}, Question{5}, q, g->question_count() - 1})
        CHECK(g->find_question(g->question_label(q2)) == q2);
    CHECK(is_synchronous(*g));
}

TEST_CASE("answer reduction honest lift") {
    auto b = consistency_game(false);
    auto g = answer_reduce(b.game, 2);
    auto s = lift_answer_reduce(*g, b.strategy);
    auto rep = sampled_value(*g, *s, 20000, 11);
    CHECK(rep.estimate == 1.0);
    CHECK(rep.std_error < 1e-12);
}

TEST_CASE("answer reduction losing lift") {
    auto b = consistency_game(true);
    double v = base_value(b);
    auto g = answer_reduce(b.game, 2);
    auto s = lift_answer_reduce(*g, b.strategy);
    auto rep = sampled_value(*g, *s, 100000, 12);
    double target = 1 - g->losing_weight() * (1 - v);
    CHECK(rep.std_error > 0);
    CHECK(std::abs(rep.estimate - target) <= 3 * rep.std_error);
    CHECK(rep.estimate + 3 * rep.std_error >= 0.5 + 0.5 * v);
}

TEST_CASE("answer reduction rejects what the machines cannot decide") {
    auto b = consistency_game(false);
    CHECK_THROWS_AS(answer_reduce(b.game, 1), ValidationError);
    CHECK_NOTHROW(attest_time_bound(*b.game, 2));
    CHECK(answer_bits(*b.game) == 1);
    CHECK(answer_bits(*magic_square().game) == 3);
}

TEST_CASE("gapless compression of a trivial game") {
    auto t = trivial_game(2);
    auto g = gapless_compress(t.game, 12);
    auto s = lift_gapless_compress(*g, t.strategy);
    auto rep = sampled_value(*g, *s, 3000, 5);
    CHECK(rep.estimate == 1.0);
}

TEST_CASE("transform descriptors load back") {
    auto b = consistency_game(true);
    auto orac = oracularize(b.game);
    auto j = game_to_json(*orac);
    CHECK(j["transform"] == "oracularize");
    auto back = load_game(parse_json_text(dump_json(j))).game;
    CHECK(back->question_count() == orac->question_count());
    for (Question q = 0; q < back->question_count(); ++q)
        for (Question r = 0; r < back->question_count(); ++r)
            CHECK(back->nontrivial(q, r) == orac->nontrivial(q, r));

    auto red = answer_reduce(b.game, 3);
    auto k = game_to_json(*red);
    CHECK(k["params"]["T"] == 3);
    auto red2 = load_game(k).game;
    CHECK(red2->question_count() == red->question_count());
    CHECK(load_game(json{{"transform", "introspect"}, {"base", game_to_json(*b.game)}}).game->question_count() == 461);
    CHECK_THROWS_AS(load_game(json{{"transform", "answer_reduce"}, {"base", game_to_json(*b.game)}}), ValidationError);
    CHECK_THROWS_AS(load_game(json{{"transform", "shrink"}, {"base", game_to_json(*b.game)}}), ValidationError);
}
