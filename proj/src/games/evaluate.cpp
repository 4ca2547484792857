#include <algorithm>
#include <cmath>

#include "nlg/game.hpp"
#include "nlg/parallel.hpp"

namespace nlg {

double pair_probability(const Game& g, Question x, Question y, const Frame& fx, const Frame& fy) {
    if (fx.dim() != fy.dim()) throw ValidationError("measurements differ in dimension");
    Eigen::MatrixXd w = block_weights(fx, fy);
    std::vector<char> mask;
    g.accept_mask(x, y, fx.outcome, fy.outcome, mask);
    KahanSum sum;
    std::size_t nb = fy.blocks();
    for (std::size_t i = 0; i < fx.blocks(); ++i)
        for (std::size_t j = 0; j < nb; ++j)
            if (mask[i * nb + j]) sum.add(w(static_cast<Index>(i), static_cast<Index>(j)));
    return sum.value();
}

EvaluationReport evaluate(const Game& g, const Strategy& s, double budget) {
    Question n = g.question_count();
    double nn = static_cast<double>(n) * static_cast<double>(n);
    if (nn > budget) throw ValidationError("exact evaluation exceeds the question-pair budget; use sampling");
    if (s.question_count() != n) throw ValidationError("strategy does not cover the game's questions");

    EvaluationReport rep;
    rep.question_count = n;
    g.for_each_nontrivial([&](Question x, Question y) { rep.per_pair.push_back({x, y, 0.0}); });

    parallel_chunks(rep.per_pair.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t k = begin; k < end; ++k) {
            auto& pr = rep.per_pair[k];
            auto fx = s.frame(pr.x);
            auto fy = s.frame(pr.y);
            if (fx->outcome_count != g.answer_count(pr.x) || fy->outcome_count != g.answer_count(pr.y))
                throw ValidationError("strategy answer labels do not match the game");
            pr.probability = pair_probability(g, pr.x, pr.y, *fx, *fy);
        }
    });

    std::uint64_t ordered = 0;
    KahanSum won;
    for (const auto& pr : rep.per_pair) {
        double weight = pr.x == pr.y ? 1.0 : 2.0;
        ordered += pr.x == pr.y ? 1 : 2;
        won.add(weight * pr.probability);
    }
    std::uint64_t total = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
    rep.trivial_mass = static_cast<double>(total - ordered) / nn;
    rep.value = rep.trivial_mass + won.value() / nn;
    return rep;
}

SampledReport sampled_value(const Game& g, const Strategy& s, std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw ValidationError("samples must be positive");
    if (s.question_count() != g.question_count()) throw ValidationError("strategy does not cover the game's questions");
    SampledReport rep;
    rep.samples = samples;
    rep.nontrivial_fraction = g.nontrivial_fraction();
    Rng rng(seed);
    // Welford on the loss 1 - p keeps precision when p is close to one.
    double mean = 0, m2 = 0;
    for (std::uint64_t k = 0; k < samples; ++k) {
        auto [x, y] = g.sample_nontrivial(rng);
        auto fx = s.frame(x);
        auto fy = s.frame(y);
        double loss = 1.0 - pair_probability(g, x, y, *fx, *fy);
        double delta = loss - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (loss - mean);
    }
    double m = rep.nontrivial_fraction;
    rep.deficit = m * mean;
    rep.estimate = 1.0 - rep.deficit;
    double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
    rep.std_error = m * std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
    return rep;
}

bool is_synchronous(const Game& g, std::uint64_t exhaustive_cap) {
    Question n = g.question_count();
    auto check = [&](Question x, const std::vector<Answer>& as, const std::vector<Answer>& bs) {
        std::vector<char> mask;
        g.accept_mask(x, x, as, bs, mask);
        for (std::size_t i = 0; i < as.size(); ++i)
            for (std::size_t j = 0; j < bs.size(); ++j)
                if (static_cast<bool>(mask[i * bs.size() + j]) != (as[i] == bs[j])) return false;
        return true;
    };
    auto all = [](Answer k) {
        std::vector<Answer> v(k);
        for (Answer a = 0; a < k; ++a) v[a] = a;
        return v;
    };
    double total = 0;
    if (n <= 1000000)
        for (Question x = 0; x < n && total <= static_cast<double>(exhaustive_cap); ++x) {
            double k = g.answer_count(x);
            total += k * k;
        }
    if (n <= 1000000 && total <= static_cast<double>(exhaustive_cap)) {
        for (Question x = 0; x < n; ++x) {
            auto v = all(g.answer_count(x));
            if (!check(x, v, v)) return false;
        }
        return true;
    }
    // Too large to enumerate: fixed-seed sample of questions and answer pairs.
    Rng rng(0x5eedULL);
    std::uniform_int_distribution<Question> qd(0, n - 1);
    for (int k = 0; k < 4000; ++k) {
        Question x = qd(rng);
        Answer na = g.answer_count(x);
        if (static_cast<std::uint64_t>(na) * na <= 4096) {
            auto v = all(na);
            if (!check(x, v, v)) return false;
            continue;
        }
        std::uniform_int_distribution<Answer> ad(0, na - 1);
        std::vector<Answer> as, bs;
        for (int t = 0; t < 64; ++t) {
            as.push_back(ad(rng));
            bs.push_back(ad(rng));
        }
        if (!check(x, as, as) || !check(x, as, bs)) return false;
    }
    return true;
}

OracularReport is_oracularizable(const Game& g, const Strategy& s, Tolerance tol) {
    std::vector<std::pair<Question, Question>> pairs;
    g.for_each_nontrivial([&](Question x, Question y) {
        if (x != y) pairs.emplace_back(x, y);
    });
    std::vector<double> worst(pairs.size(), 0.0);
    parallel_chunks(pairs.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t k = begin; k < end; ++k)
            worst[k] = max_commutator(*s.frame(pairs[k].first), *s.frame(pairs[k].second));
    });
    OracularReport rep;
    for (double w : worst) rep.worst = std::max(rep.worst, w);
    rep.ok = rep.worst <= tol.eps;
    return rep;
}

OracularReport sampled_oracularizable(const Game& g, const Strategy& s, std::uint64_t samples, std::uint64_t seed,
                                      Tolerance tol) {
    Rng rng(seed);
    OracularReport rep;
    for (std::uint64_t k = 0; k < samples; ++k) {
        auto [x, y] = g.sample_nontrivial(rng);
        if (x == y) continue;
        rep.worst = std::max(rep.worst, max_commutator(*s.frame(x), *s.frame(y)));
    }
    rep.ok = rep.worst <= tol.eps;
    return rep;
}

}  // namespace nlg
