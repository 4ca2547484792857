#include <algorithm>
#include <numeric>

#include "nlg/optimize.hpp"
#include "nlg/parallel.hpp"

namespace nlg {

namespace {

using Elements = std::vector<Matrix>;

struct Problem {
    const Game& g;
    Question n;
    std::vector<std::vector<Question>> partners;  // y != q with (q, y) nontrivial
};

Problem make_problem(const Game& g) {
    Problem p{g, g.question_count(), {}};
    p.partners.resize(p.n);
    g.for_each_nontrivial([&](Question x, Question y) {
        if (x == y) return;
        p.partners[x].push_back(y);
        p.partners[y].push_back(x);
    });
    for (auto& v : p.partners) std::sort(v.begin(), v.end());
    return p;
}

Elements elements_of(const Frame& f) {
    Elements out(f.outcome_count, Matrix::Zero(f.dim(), f.dim()));
    for (std::size_t b = 0; b < f.blocks(); ++b) out[f.outcome[b]] = f.block(b) * f.block(b).adjoint();
    return out;
}

std::vector<Matrix> coefficients(const Problem& p, const std::vector<Elements>& elems, Question q, Index d) {
    const Game& g = p.g;
    double scale = 1.0 / (static_cast<double>(p.n) * static_cast<double>(p.n));
    std::vector<Matrix> c(g.answer_count(q), Matrix::Zero(d, d));
    for (Question y : p.partners[q])
        for (Answer a = 0; a < g.answer_count(q); ++a)
            for (Answer b = 0; b < g.answer_count(y); ++b) {
                int w = g.decide(q, y, a, b) + g.decide(y, q, b, a);
                if (w) c[a] += (w * scale) * elems[y][b];
            }
    return c;
}

double objective(const std::vector<Matrix>& c, const Frame& f) {
    double total = 0;
    for (std::size_t b = 0; b < f.blocks(); ++b) {
        auto blk = f.block(b);
        total += (blk.adjoint() * c[f.outcome[b]] * blk).trace().real();
    }
    return total / static_cast<double>(f.dim());
}

// Orthonormal columns of a frame with their labels, for regrouping.
std::vector<Answer> column_labels(const Frame& f) {
    std::vector<Answer> out;
    for (std::size_t b = 0; b < f.blocks(); ++b)
        for (Index k = 0; k < f.rank(b); ++k) out.push_back(f.outcome[b]);
    return out;
}

// Re-splits the span of outcomes a and b along the eigenspaces of the compressed C_a - C_b.
Frame split_pair(const Frame& f, const std::vector<Matrix>& c, Answer a, Answer b) {
    auto labels = column_labels(f);
    std::vector<Index> cols;
    for (Index k = 0; k < static_cast<Index>(labels.size()); ++k)
        if (labels[k] == a || labels[k] == b) cols.push_back(k);
    if (cols.empty()) return f;
    Matrix v(f.dim(), static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) v.col(static_cast<Index>(k)) = f.basis.col(cols[k]);
    Matrix h = v.adjoint() * (c[a] - c[b]) * v;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    Matrix rotated = v * es.eigenvectors();
    Matrix basis = f.basis;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        basis.col(cols[k]) = rotated.col(static_cast<Index>(k));
        labels[cols[k]] = es.eigenvalues()(static_cast<Index>(k)) >= 0 ? a : b;
    }
    return frame_from_columns(basis, labels, f.outcome_count);
}

// Eigenvectors of the symmetrized weighted pencil, each sent to its best answer.
Frame spectral_proposal(const Frame& f, const std::vector<Matrix>& c) {
    Index d = f.dim();
    Matrix w = Matrix::Zero(d, d);
    auto elems = elements_of(f);
    for (std::size_t a = 0; a < c.size(); ++a) w += c[a] * elems[a] + elems[a] * c[a];
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (w + w.adjoint()));
    std::vector<Answer> labels(static_cast<std::size_t>(d));
    for (Index k = 0; k < d; ++k) {
        auto v = es.eigenvectors().col(k);
        double best = -1e300;
        for (std::size_t a = 0; a < c.size(); ++a) {
            double r = (v.adjoint() * c[a] * v)(0, 0).real();
            if (r > best + 1e-15) {
                best = r;
                labels[static_cast<std::size_t>(k)] = static_cast<Answer>(a);
            }
        }
    }
    return frame_from_columns(es.eigenvectors(), labels, f.outcome_count);
}

Frame update(const Frame& f, const std::vector<Matrix>& c) {
    if (c.size() == 1) return f;
    if (c.size() == 2) return binary_update(c[0], c[1]);
    Frame cur = f;
    double val = objective(c, cur);
    Frame proposal = spectral_proposal(cur, c);
    double pv = objective(c, proposal);
    if (pv > val) {
        cur = std::move(proposal);
        val = pv;
    }
    for (int round = 0; round < 4; ++round) {
        double before = val;
        for (Answer a = 0; a < c.size(); ++a)
            for (Answer b = a + 1; b < c.size(); ++b) {
                Frame next = split_pair(cur, c, a, b);
                double nv = objective(c, next);
                if (nv >= val) {
                    cur = std::move(next);
                    val = nv;
                }
            }
        if (val - before < 1e-14) break;
    }
    return cur;
}

Frame random_frame(Index d, Answer count, Rng& rng) {
    std::vector<Answer> labels(static_cast<std::size_t>(d));
    for (Index k = 0; k < d; ++k) labels[static_cast<std::size_t>(k)] = static_cast<Answer>((k * count) / d);
    return frame_from_columns(haar_unitary(d, rng), labels, count);
}

struct RestartResult {
    std::vector<std::shared_ptr<const Frame>> frames;
    double value = -1;
    std::vector<SeesawStep> trace;
};

RestartResult run_restart(const Problem& p, const SeesawConfig& cfg, int restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    Rng rng(seq);
    const Index d = cfg.dim;
    RestartResult out;
    std::vector<Elements> elems;
    for (Question q = 0; q < p.n; ++q) {
        auto f = std::make_shared<const Frame>(random_frame(d, p.g.answer_count(q), rng));
        elems.push_back(elements_of(*f));
        out.frames.push_back(std::move(f));
    }
    auto value_now = [&] { return evaluate(p.g, FrameStrategy(d, out.frames)).value; };
    out.value = value_now();
    out.trace.push_back({restart, 0, out.value});
    for (int it = 1; it <= cfg.max_iters; ++it) {
        for (Question q = 0; q < p.n; ++q) {
            if (p.partners[q].empty()) continue;
            auto c = coefficients(p, elems, q, d);
            Frame next = update(*out.frames[q], c);
            // Keep the old measurement when the update is not an improvement.
            if (objective(c, next) + 1e-15 < objective(c, *out.frames[q])) continue;
            out.frames[q] = std::make_shared<const Frame>(std::move(next));
            elems[q] = elements_of(*out.frames[q]);
        }
        double v = value_now();
        out.trace.push_back({restart, it, v});
        double gain = v - out.value;
        out.value = std::max(out.value, v);
        if (gain < cfg.improvement_tol) break;
    }
    return out;
}

}  // namespace

Frame binary_update(const Matrix& c0, const Matrix& c1) {
    Matrix h = c0 - c1;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    std::vector<Answer> labels(static_cast<std::size_t>(h.rows()));
    for (Index k = 0; k < h.rows(); ++k) labels[static_cast<std::size_t>(k)] = es.eigenvalues()(k) >= 0 ? 0 : 1;
    return frame_from_columns(es.eigenvectors(), labels, 2);
}

std::vector<Matrix> seesaw_coefficients(const Game& g, const std::vector<std::shared_ptr<const Frame>>& frames,
                                        Question q) {
    if (frames.size() != g.question_count()) throw ValidationError("one frame per question is required");
    Problem p{g, g.question_count(), std::vector<std::vector<Question>>(g.question_count())};
    for (Question y = 0; y < p.n; ++y)
        if (y != q && g.nontrivial(q, y)) p.partners[q].push_back(y);
    std::vector<Elements> elems(p.n);
    for (Question y : p.partners[q]) elems[y] = elements_of(*frames[y]);
    return coefficients(p, elems, q, frames[q]->dim());
}

SeesawResult seesaw(const Game& g, const SeesawConfig& cfg) {
    if (cfg.dim < 1) throw ValidationError("seesaw dimension must be at least 1");
    if (cfg.restarts < 1 || cfg.max_iters < 1) throw ValidationError("seesaw needs at least one restart and iteration");
    Problem p = make_problem(g);
    std::vector<RestartResult> runs(static_cast<std::size_t>(cfg.restarts));
    parallel_chunks(runs.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t r = begin; r < end; ++r) runs[r] = run_restart(p, cfg, static_cast<int>(r));
    });
    SeesawResult res;
    res.value = -1;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (runs[r].value > res.value) {
            res.value = runs[r].value;
            res.best_restart = static_cast<int>(r);
        }
        res.trace.insert(res.trace.end(), runs[r].trace.begin(), runs[r].trace.end());
    }
    res.strategy = std::make_shared<FrameStrategy>(cfg.dim, runs[static_cast<std::size_t>(res.best_restart)].frames);
    res.value = evaluate(g, *res.strategy).value;
    return res;
}

}  // namespace nlg
