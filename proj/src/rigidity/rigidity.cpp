#include "nlg/rigidity.hpp"

#include <cmath>
#include <limits>

namespace nlg {

namespace {

std::string cell(int r, int c) { return std::to_string(r) + std::to_string(c); }

double deficit_of(const Game& g, const Strategy& s) {
    double n = static_cast<double>(g.question_count());
    if (n * n > 2e8) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 - evaluate(g, s).value;
}

void finish(ResidualReport& r) {
    r.max_residual = 0;
    for (const auto& [k, v] : r.relations) r.max_residual = std::max(r.max_residual, v);
}

Frame binary_frame(const Strategy& s, Question q) {
    auto f = s.frame(q);
    if (f->outcome_count != 2) throw ValidationError("expected a two-outcome measurement");
    return *f;
}

// Observable of bit k (1-based, first bit most significant) of an n-bit answer.
Matrix bit_observable(const Frame& f, int n, int k) {
    int shift = n - k;
    return frame_observable(relabel(f, [shift](Answer a) { return (a >> shift) & 1u; }, 2));
}

std::vector<Matrix> elements(const Frame& f) {
    std::vector<Matrix> out;
    for (Answer a = 0; a < f.outcome_count; ++a) out.push_back(f.element(a));
    return out;
}

}  // namespace

Matrix frame_observable(const Frame& f) {
    if (f.outcome_count != 2) throw ValidationError("observable needs a two-outcome measurement");
    Index d = f.dim();
    return 2.0 * f.element(0) - Matrix::Identity(d, d);
}

ResidualReport ms_residuals(const Strategy& s) {
    if (s.question_count() != ms::kQuestions) throw ValidationError("strategy does not cover the Magic Square questions");
    Matrix o[4][4];
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c) o[r][c] = frame_observable(binary_frame(s, ms::var(r, c)));
    Index d = s.dim();
    Matrix id = Matrix::Identity(d, d);
    ResidualReport rep;
    for (int i = 1; i <= 3; ++i) {
        rep.relations["R1.row." + std::to_string(i)] = tau_norm(Matrix(o[i][1] * o[i][2] * o[i][3] - id));
        double sign = i == 3 ? -1.0 : 1.0;
        rep.relations["R1.col." + std::to_string(i)] = tau_norm(Matrix(o[1][i] * o[2][i] * o[3][i] - sign * id));
    }
    for (int a = 0; a < 9; ++a)
        for (int b = a + 1; b < 9; ++b) {
            int r1 = a / 3 + 1, c1 = a % 3 + 1, r2 = b / 3 + 1, c2 = b % 3 + 1;
            std::string key = cell(r1, c1) + "_" + cell(r2, c2);
            if (r1 == r2 || c1 == c2)
                rep.relations["R2.comm." + key] = commutator_norm(o[r1][c1], o[r2][c2]);
            else
                rep.relations["R3.anticomm." + key] = anticommutator_norm(o[r1][c1], o[r2][c2]);
        }
    finish(rep);
    MagicSquareGame g;
    rep.value_deficit = deficit_of(g, s);
    return rep;
}

std::map<std::string, double> pair_family_relations(const ObservablePairs& family) {
    std::map<std::string, double> rel;
    std::size_t n = family.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::string ks = std::to_string(k + 1);
        rel["pair.anticomm." + ks] = anticommutator_norm(family[k].first, family[k].second);
        for (std::size_t l = 0; l < n; ++l) {
            if (l == k) continue;
            std::string key = ks + "_" + std::to_string(l + 1);
            if (k < l) {
                rel["pair.comm.AA." + key] = commutator_norm(family[k].first, family[l].first);
                rel["pair.comm.BB." + key] = commutator_norm(family[k].second, family[l].second);
            }
            rel["pair.comm.AB." + key] = commutator_norm(family[k].first, family[l].second);
        }
    }
    return rel;
}

ObservablePairs ms_pair_family(const Strategy& s) {
    auto obs = [&](int r, int c) { return frame_observable(binary_frame(s, ms::var(r, c))); };
    return {{obs(1, 1), obs(2, 2)}, {obs(1, 2), obs(2, 1)}};
}

ObservablePairs two_of_n_pair_family(const TwoOfNGame& g, const Strategy& s) {
    if (s.question_count() != g.question_count()) throw ValidationError("strategy does not cover the 2-of-n questions");
    int n = g.copies();
    auto marginal = [&](int i, Question x) {
        int succ = i < n ? i + 1 : 1;
        auto f = s.frame(g.encode(i, succ, x, x));
        Answer ny = ms::answer_count(x);
        return frame_observable(relabel(*f, [ny](Answer a) { return a / ny; }, 2));
    };
    ObservablePairs fam;
    for (int i = 1; i <= n; ++i) {
        fam.push_back({marginal(i, ms::var(1, 1)), marginal(i, ms::var(2, 2))});
        fam.push_back({marginal(i, ms::var(1, 2)), marginal(i, ms::var(2, 1))});
    }
    return fam;
}

ObservablePairs qs_pair_family(const QuestionSamplingGame& g, const Strategy& s) {
    if (s.question_count() != g.question_count()) throw ValidationError("strategy does not cover the QS questions");
    int n = g.copies();
    ObservablePairs fam;
    for (auto [samp, eras] : {std::pair{QuestionSamplingGame::SA, QuestionSamplingGame::EA},
                              std::pair{QuestionSamplingGame::SB, QuestionSamplingGame::EB}}) {
        auto fs = s.frame(g.special(samp));
        auto fe = s.frame(g.special(eras));
        for (int k = 1; k <= n; ++k) fam.push_back({bit_observable(*fs, n, k), bit_observable(*fe, n, k)});
    }
    return fam;
}

ResidualReport two_of_n_residuals(const TwoOfNGame& g, const Strategy& s) {
    ResidualReport rep;
    rep.relations = pair_family_relations(two_of_n_pair_family(g, s));
    finish(rep);
    rep.value_deficit = deficit_of(g, s);
    return rep;
}

ResidualReport qs_residuals(const QuestionSamplingGame& g, const Strategy& s) {
    if (s.question_count() != g.question_count()) throw ValidationError("strategy does not cover the QS questions");
    int n = g.copies();
    Answer count = Answer{1} << n;
    const char* names[4] = {"S_A", "S_B", "E_A", "E_B"};
    std::vector<Matrix> el[4];
    std::vector<Matrix> fourier[4];
    for (int w = 0; w < 4; ++w) {
        auto f = s.frame(g.special(static_cast<QuestionSamplingGame::Special>(w)));
        el[w] = elements(*f);
        fourier[w] = fourier_observables(f->to_measurement(g.answer_labels(g.special(static_cast<QuestionSamplingGame::Special>(w)))));
    }
    auto bits = [n](Answer v) { return bit_string(v, n); };
    const int SA = 0, SB = 1, EA = 2, EB = 3;
    double single = std::ldexp(1.0, -n), joint = std::ldexp(1.0, -2 * n);
    ResidualReport rep;
    for (Answer x = 0; x < count; ++x)
        for (Answer y = 0; y < count; ++y) {
            std::string xy = "x=" + bits(x) + ",y=" + bits(y);
            rep.relations["QS.item1.S." + xy] = commutator_norm(el[SA][x], el[SB][y]);
            rep.relations["QS.item1.E." + xy] = commutator_norm(el[EA][x], el[EB][y]);
            rep.relations["QS.item2.S_A.E_B." + xy] = commutator_norm(el[SA][x], el[EB][y]);
            rep.relations["QS.item2.S_B.E_A." + xy] = commutator_norm(el[SB][x], el[EA][y]);
            rep.relations["QS.item4.pair.S." + xy] = std::abs(tau(Matrix(el[SA][x] * el[SB][y])).real() - joint);
            rep.relations["QS.item4.pair.E." + xy] = std::abs(tau(Matrix(el[EA][x] * el[EB][y])).real() - joint);
        }
    for (int w = 0; w < 2; ++w) {
        int samp = w == 0 ? SA : SB, eras = w == 0 ? EA : EB;
        for (Answer u = 0; u < count; ++u)
            for (Answer x = 0; x < count; ++x) {
                std::string ux = ".u=" + bits(u) + ",x=" + bits(x);
                const Matrix& oe = fourier[eras][u];
                const Matrix& os = fourier[samp][u];
                rep.relations[std::string("QS.item3.") + names[eras] + ux] =
                    tau_norm(Matrix(oe * el[samp][x] * oe - el[samp][x ^ u]));
                rep.relations[std::string("QS.item3.") + names[samp] + ux] =
                    tau_norm(Matrix(os * el[eras][x] * os - el[eras][x ^ u]));
            }
        for (Answer x = 0; x < count; ++x) {
            std::string xs = ".x=" + bits(x);
            rep.relations[std::string("QS.item4.tau.") + names[samp] + xs] = std::abs(tau(el[samp][x]).real() - single);
            rep.relations[std::string("QS.item4.tau.") + names[eras] + xs] = std::abs(tau(el[eras][x]).real() - single);
        }
    }
    finish(rep);
    rep.value_deficit = deficit_of(g, s);
    return rep;
}

DimensionCertificate dimension_certificate(const ObservablePairs& family, Tolerance tol) {
    if (family.empty()) throw ValidationError("empty observable family");
    for (const auto& [a, b] : family)
        if (!is_unitary(a, tol) || !is_unitary(b, tol) || !is_hermitian(a, tol) || !is_hermitian(b, tol))
            throw ValidationError("family entries must be Hermitian unitaries");
    DimensionCertificate c;
    c.pairs = static_cast<int>(family.size());
    for (const auto& [k, v] : pair_family_relations(family)) c.eps = std::max(c.eps, v);
    return c;
}

ExtractedProjection extract_projection(const QuestionSamplingGame& g, const Strategy& s, Tolerance tol) {
    auto sa = s.frame(g.special(QuestionSamplingGame::SA))->element(0);
    auto sb = s.frame(g.special(QuestionSamplingGame::SB))->element(0);
    Matrix p = sa * sb * sa;
    p = 0.5 * (p + p.adjoint());
    Index d = p.rows();
    Measurement povm{{"0", "1"}, {p, Matrix(Matrix::Identity(d, d) - p)}, MeasurementKind::povm};
    Measurement proj = projectivize(povm, tol);
    ExtractedProjection out;
    out.projection = proj[0];
    out.trace = tau(out.projection).real();
    return out;
}

json residual_report_to_json(const ResidualReport& r) {
    json rel = json::object();
    for (const auto& [k, v] : r.relations) rel[k] = v;
    json out{{"relations", rel}, {"max_residual", r.max_residual}};
    if (std::isnan(r.value_deficit))
        out["value_deficit"] = nullptr;
    else
        out["value_deficit"] = r.value_deficit;
    return out;
}

}  // namespace nlg
