#include <doctest.h>

#include <cmath>
#include <set>

#include "nlg/builtin_games.hpp"
#include "nlg/json_io.hpp"
#include "nlg/ncpo.hpp"

using namespace nlg;

namespace {

// Magic Square rules rebuilt from question labels.
std::vector<std::string> equation_cells(const std::string& label) {
    std::vector<std::string> cells;
    char k = label[1];
    for (char o = '1'; o <= '3'; ++o) cells.push_back(label[0] == 'r' ? std::string("s") + k + o : std::string("s") + o + k);
    return cells;
}

bool oracle_ms_decide(const std::string& x, const std::string& y, const std::string& a, const std::string& b) {
    if (x == y) return a == b;
    auto check = [](const std::string& e, const std::string& v, const std::string& ea, const std::string& vb) {
        auto cells = equation_cells(e);
        for (int k = 0; k < 3; ++k)
            if (cells[k] == v) {
                int ones = 0;
                for (char c : ea) ones += c == '1';
                int want = e == "c3" ? 1 : 0;
                return ones % 2 == want && std::string(1, ea[k]) == vb;
            }
        return true;
    };
    if (x[0] != 's' && y[0] == 's') return check(x, y, a, b);
    if (y[0] != 's' && x[0] == 's') return check(y, x, b, a);
    return true;
}

// Dense value over every ordered pair, no pair skipping.
double dense_value(const Game& g, const Strategy& s, bool use_oracle_ms = false) {
    Question n = g.question_count();
    std::vector<Measurement> ms;
    for (Question q = 0; q < n; ++q) ms.push_back(strategy_measurement(g, s, q));
    double total = 0;
    for (Question x = 0; x < n; ++x)
        for (Question y = 0; y < n; ++y)
            for (Answer a = 0; a < g.answer_count(x); ++a)
                for (Answer b = 0; b < g.answer_count(y); ++b) {
                    bool win = use_oracle_ms ? oracle_ms_decide(g.question_label(x), g.question_label(y),
                                                                g.answer_label(x, a), g.answer_label(y, b))
                                             : g.decide(x, y, a, b);
                    if (win) total += tau(Matrix(ms[x][a] * ms[y][b])).real();
                }
    return total / static_cast<double>(n * n);
}

StrategyPtr deterministic(const Game& g, const std::vector<Answer>& answers) {
    std::vector<std::shared_ptr<const Frame>> frames;
    for (Question q = 0; q < g.question_count(); ++q)
        frames.push_back(std::make_shared<const Frame>(identity_frame(1, answers[q], g.answer_count(q))));
    return std::make_shared<FrameStrategy>(1, frames);
}

}  // namespace

TEST_CASE("magic square honest strategy") {
    auto [g, s] = magic_square();
    CHECK(g->question_count() == 15);
    CHECK(s->dim() == 4);
    auto r = evaluate(*g, *s);
    CHECK(std::abs(r.value - 1.0) < 1e-10);
    CHECK(is_synchronous(*g));
    auto orac = is_oracularizable(*g, *s);
    CHECK(orac.ok);
    CHECK(orac.worst < 1e-12);
    // 15 diagonal pairs plus 18 equation/variable incidences per orientation.
    std::size_t ordered = 0;
    g->for_each_nontrivial([&](Question x, Question y) { ordered += x == y ? 1 : 2; });
    CHECK(ordered == 15 + 2 * 18);
    CHECK(std::abs(r.value - dense_value(*g, *s, true)) < 1e-12);
}

TEST_CASE("magic square all-zeros strategy matches enumeration") {
    auto [g, honest] = magic_square();
    auto zeros = deterministic(*g, std::vector<Answer>(15, 0));
    auto r = evaluate(*g, *zeros);
    double oracle = 0;
    for (Question x = 0; x < 15; ++x)
        for (Question y = 0; y < 15; ++y) {
            std::string a = g->question_label(x)[0] == 's' ? "0" : "000";
            std::string b = g->question_label(y)[0] == 's' ? "0" : "000";
            oracle += oracle_ms_decide(g->question_label(x), g->question_label(y), a, b) ? 1 : 0;
        }
    oracle /= 225;
    CHECK(std::abs(r.value - oracle) < 1e-12);
    CHECK(r.value < 1);

    auto sv = sampled_value(*g, *zeros, 100000, 42);
    CHECK(std::abs(sv.estimate - r.value) <= 3 * sv.std_error);
    auto sv2 = sampled_value(*g, *zeros, 100000, 42);
    CHECK(sv.estimate == sv2.estimate);

    auto honest_sample = sampled_value(*g, *honest, 10000, 1);
    CHECK(std::abs(honest_sample.estimate - 1.0) < 1e-10);
    CHECK(honest_sample.std_error < 1e-10);
}

TEST_CASE("report identity and averaging bound") {
    auto [g, s] = magic_square();
    Rng rng(99);
    std::vector<std::shared_ptr<const Frame>> frames;
    for (Question q = 0; q < 15; ++q) frames.push_back(std::make_shared<const Frame>(frame_from_measurement(
                                          random_projective(4, g->answer_count(q), rng))));
    FrameStrategy random_strategy(4, frames);
    auto r = evaluate(*g, random_strategy);
    double sum = r.trivial_mass;
    for (const auto& p : r.per_pair) sum += (p.x == p.y ? 1.0 : 2.0) * p.probability / 225;
    CHECK(std::abs(sum - r.value) < 1e-12);
    for (const auto& p : r.per_pair) CHECK(p.probability >= 1 - 225 * (1 - r.value) - 1e-12);
    CHECK(std::abs(r.value - dense_value(*g, random_strategy)) < 1e-12);

    auto u = haar_unitary(4, rng);
    auto rotated = conjugate_strategy(random_strategy, u);
    CHECK(std::abs(evaluate(*g, *rotated).value - r.value) < 1e-10);
}

TEST_CASE("perturbed variable breaks oracularizability") {
    auto [g, s] = magic_square();
    auto frames = materialize(*s);
    Rng rng(4);
    std::vector<std::shared_ptr<const Frame>> fs;
    for (Question q = 0; q < 15; ++q) fs.push_back(frames->frame(q));
    fs[ms::var(2, 2)] = std::make_shared<const Frame>(frame_from_measurement(random_projective(4, 2, rng)));
    FrameStrategy broken(4, fs);
    CHECK(is_oracularizable(*g, broken).worst > 1e-3);
}

TEST_CASE("two of n") {
    auto [g2, s2] = two_of_n_ms(2);
    CHECK(g2->question_count() == 450);
    CHECK(s2->dim() == 16);
    CHECK(std::abs(evaluate(*g2, *s2).value - 1.0) < 1e-10);
    CHECK(is_oracularizable(*g2, *s2).ok);
    auto tg = std::dynamic_pointer_cast<const TwoOfNGame>(g2);
    REQUIRE(tg);
    Question q = tg->encode(2, 1, ms::var(1, 1), 3);
    CHECK(g2->question_label(q) == "2,1,s11,c1");
    CHECK(g2->find_question("2,1,s11,c1").value() == q);

    auto [g3, s3] = two_of_n_ms(3);
    CHECK(s3->dim() == 64);
    CHECK(g3->question_count() == 6 * 225);

    // Tensor two honest MS strategies into the n = 2 honest strategy.
    auto [ms_game, ms_s] = magic_square();
    auto ext = tensor_extend(*ms_s, *ms_s, g2->question_count(), [&](Question t) {
        auto p = tg->decode(t);
        Answer ny = ms::answer_count(p.y);
        TensorSlot slot;
        slot.count = g2->answer_count(t);
        if (p.i == 1) {
            slot.first = p.x;
            slot.second = p.y;
            slot.combine = [ny](Answer a, Answer b) { return a * ny + b; };
        } else {
            slot.first = p.y;
            slot.second = p.x;
            slot.combine = [ny](Answer b, Answer a) { return a * ny + b; };
        }
        return slot;
    });
    CHECK(ext->dim() == 16);
    for (Question t = 0; t < g2->question_count(); t += 7)
        CHECK(closeness(strategy_measurement(*g2, *ext, t), strategy_measurement(*g2, *s2, t)) < 1e-10);
}

TEST_CASE("question sampling honest strategy") {
    auto [g, s] = question_sampling(2);
    auto qg = std::dynamic_pointer_cast<const QuestionSamplingGame>(g);
    REQUIRE(qg);
    CHECK(s->dim() == 16);
    CHECK(is_synchronous(*g));
    CHECK(std::abs(evaluate(*g, *s).value - 1.0) < 1e-10);
    CHECK(is_oracularizable(*g, *s).ok);
    auto sa = s->frame(qg->special(QuestionSamplingGame::SA));
    auto sb = s->frame(qg->special(QuestionSamplingGame::SB));
    for (Answer x = 0; x < 4; ++x) {
        CHECK(std::abs(tau(sa->element(x)).real() - 0.25) < 1e-10);
        CHECK(sa->rank(static_cast<std::size_t>(sa->find_block(x))) == 4);
        for (Answer y = 0; y < 4; ++y)
            CHECK(std::abs(tau(Matrix(sa->element(x) * sb->element(y))).real() - 1.0 / 16) < 1e-10);
    }
    CHECK_THROWS_AS(question_sampling(3), ValidationError);
}

TEST_CASE("synchronous detection") {
    std::vector<std::string> qs = {"q"};
    std::vector<std::vector<std::string>> as = {{"0", "1"}};
    TableGame loose("loose", qs, as, {});
    CHECK_FALSE(is_synchronous(loose));
    auto [t, ts] = trivial_game(2);
    CHECK(is_synchronous(*t));
    CHECK(evaluate(*t, *ts).value == 1.0);
}

TEST_CASE("consistency games") {
    auto [g, s] = consistency_game(false);
    CHECK(std::abs(evaluate(*g, *s).value - 1.0) < 1e-12);
    auto [gl, sl] = consistency_game(true);
    CHECK(std::abs(evaluate(*gl, *sl).value - 0.875) < 1e-12);
    CHECK(is_oracularizable(*gl, *sl).ok);
}

TEST_CASE("json round trip") {
    auto [g, s] = magic_square();
    auto gj = game_to_json(*g);
    auto back = game_from_json(parse_json_text(dump_json(gj)));
    CHECK(back.game->question_count() == 15);
    for (bool frames : {false, true}) {
        auto sj = strategy_to_json(*g, *s, frames);
        auto parsed = strategy_from_json(*g, parse_json_text(dump_json(sj)));
        CHECK(std::abs(evaluate(*g, *parsed).value - 1.0) < 1e-10);
        CHECK(dump_json(strategy_to_json(*g, *parsed, frames)).size() > 0);
    }

    auto [cg, cs] = consistency_game(true);
    auto table = game_from_json(parse_json_text(dump_json(game_to_json(*cg))));
    CHECK(std::abs(evaluate(*table.game, *cs).value - 0.875) < 1e-12);

    auto bad = parse_json_text(R"({"dim": 4, "measurements": {"r1": []}})");
    try {
        strategy_from_json(*g, bad);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("/measurements/r1") != std::string::npos);
    }
    auto bad_table = parse_json_text(
        R"({"table": {"questions": ["a", "b"], "answers": {"a": ["0"], "b": ["0"]}, "nontrivial_pairs": [["a", "b"]]}})");
    CHECK_THROWS_AS(game_from_json(bad_table), ValidationError);
    CHECK_THROWS_AS(parse_json_text("{"), ValidationError);
}

TEST_CASE("ncpo program") {
    std::vector<std::string> qs = {"q"};
    std::vector<std::vector<std::string>> as = {{"a"}};
    TableGame single("single", qs, as, {});
    auto p = game_to_ncpo(single);
    CHECK(p.variables.size() == 2);
    CHECK(p.objective.size() == 1);
    CHECK(p.selfadjoint.size() == 2);
    CHECK(p.positive.size() == 2);
    CHECK(p.complete.size() == 2);
    CHECK(p.commute.size() == 1);
    auto text = ncpo_to_text(p);
    CHECK(ncpo_to_text(parse_ncpo(text)) == text);

    auto [g, s] = magic_square();
    auto mp = game_to_ncpo(*g);
    std::size_t per_player = 6 * 8 + 9 * 2;
    CHECK(mp.variables.size() == 2 * per_player);
    CHECK(mp.commute.size() == per_player * per_player);
    CHECK(mp.complete.size() == 30);
    std::size_t terms = 0;
    for (Question x = 0; x < 15; ++x)
        for (Question y = 0; y < 15; ++y)
            for (Answer a = 0; a < g->answer_count(x); ++a)
                for (Answer b = 0; b < g->answer_count(y); ++b)
                    terms += oracle_ms_decide(g->question_label(x), g->question_label(y), g->answer_label(x, a),
                                              g->answer_label(y, b));
    CHECK(mp.objective.size() == terms);
    CHECK_THROWS_AS(parse_ncpo("ncpo x\nvariables 1\n"), ValidationError);
}
