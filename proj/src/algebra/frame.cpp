#include "nlg/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace nlg {

long Frame::find_block(Answer a) const {
    auto it = std::lower_bound(outcome.begin(), outcome.end(), a);
    if (it == outcome.end() || *it != a) return -1;
    return static_cast<long>(it - outcome.begin());
}

Matrix Frame::element(Answer a) const {
    long b = find_block(a);
    if (b < 0) return Matrix::Zero(dim(), dim());
    auto u = block(static_cast<std::size_t>(b));
    return u * u.adjoint();
}

Measurement Frame::to_measurement(const std::vector<std::string>& labels) const {
    if (labels.size() != outcome_count) throw ValidationError("label count does not match frame outcomes");
    std::vector<Matrix> el(outcome_count, Matrix::Zero(dim(), dim()));
    for (std::size_t b = 0; b < blocks(); ++b) {
        auto u = block(b);
        el[outcome[b]] = u * u.adjoint();
    }
    return Measurement{labels, std::move(el), MeasurementKind::projective};
}

Frame frame_from_columns(Matrix basis, const std::vector<Answer>& column_label, Answer count) {
    Index n = basis.cols();
    if (static_cast<Index>(column_label.size()) != n) throw ValidationError("one label per column required");
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return column_label[a] < column_label[b]; });
    Frame f;
    f.outcome_count = count;
    f.basis.resize(basis.rows(), n);
    for (Index c = 0; c < n; ++c) {
        Answer lab = column_label[order[c]];
        if (lab >= count) throw ValidationError("frame label out of range");
        f.basis.col(c) = basis.col(order[c]);
        if (f.outcome.empty() || f.outcome.back() != lab) {
            f.outcome.push_back(lab);
            f.start.push_back(c);
        }
    }
    f.start.push_back(n);
    return f;
}

Frame frame_from_measurement(const Measurement& m, Tolerance tol) {
    if (!is_projective(m, tol)) throw ValidationError("measurement is not projective within tolerance");
    Index d = m.dim();
    Matrix cols(d, d);
    std::vector<Answer> labels;
    Index filled = 0;
    for (std::size_t a = 0; a < m.size(); ++a) {
        Matrix h = 0.5 * (m[a] + m[a].adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        for (Index k = 0; k < d; ++k) {
            if (es.eigenvalues()[k] <= 0.5) continue;
            if (filled == d) throw ValidationError("projective ranks exceed the dimension");
            cols.col(filled++) = es.eigenvectors().col(k);
            labels.push_back(static_cast<Answer>(a));
        }
    }
    if (filled != d) throw ValidationError("projective ranks do not sum to the dimension");
    // Snap to the nearest unitary so blocks are exactly orthogonal.
    Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix unitary = svd.matrixU() * svd.matrixV().adjoint();
    return frame_from_columns(std::move(unitary), labels, static_cast<Answer>(m.size()));
}

Frame identity_frame(Index d, Answer label, Answer count) {
    Frame f;
    f.basis = Matrix::Identity(d, d);
    f.outcome = {label};
    f.start = {0, d};
    f.outcome_count = count;
    return f;
}

Frame relabel(const Frame& f, const LabelMap& map, Answer count) {
    std::vector<Answer> labels(static_cast<std::size_t>(f.basis.cols()));
    for (std::size_t b = 0; b < f.blocks(); ++b) {
        Answer lab = map(f.outcome[b]);
        for (Index c = f.start[b]; c < f.start[b + 1]; ++c) labels[static_cast<std::size_t>(c)] = lab;
    }
    return frame_from_columns(f.basis, labels, count);
}

Frame conjugated(const Frame& f, const Matrix& u) {
    Frame g = f;
    g.basis = u * f.basis;
    return g;
}

static Eigen::VectorXcd kron_vec(const Eigen::Ref<const Eigen::VectorXcd>& a,
                                 const Eigen::Ref<const Eigen::VectorXcd>& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

Frame kron(const Frame& f, const Frame& g, const LabelCombine& combine, Answer count) {
    Index d1 = f.dim(), d2 = g.dim();
    Matrix basis(d1 * d2, d1 * d2);
    std::vector<Answer> labels;
    labels.reserve(static_cast<std::size_t>(d1 * d2));
    Index c = 0;
    for (std::size_t i = 0; i < f.blocks(); ++i)
        for (std::size_t j = 0; j < g.blocks(); ++j) {
            Answer lab = combine(f.outcome[i], g.outcome[j]);
            for (Index p = f.start[i]; p < f.start[i + 1]; ++p)
                for (Index q = g.start[j]; q < g.start[j + 1]; ++q) {
                    basis.col(c++) = kron_vec(f.basis.col(p), g.basis.col(q));
                    labels.push_back(lab);
                }
        }
    return frame_from_columns(std::move(basis), labels, count);
}

Frame refine(const Frame& f, const Frame& g, const LabelCombine& combine, Answer count) {
    if (f.dim() != g.dim()) throw ValidationError("refine needs frames of one dimension");
    Index d = f.dim();
    Matrix gram = f.basis.adjoint() * g.basis;
    Matrix basis(d, d);
    std::vector<Answer> labels;
    labels.reserve(static_cast<std::size_t>(d));
    Index c = 0;
    for (std::size_t i = 0; i < f.blocks(); ++i) {
        Index r = f.rank(i);
        auto rows = gram.middleRows(f.start[i], r);
        // Weighted sum of the compressed g-projections; eigenvalues sit at block indices.
        Matrix h = Matrix::Zero(r, r);
        for (std::size_t j = 1; j < g.blocks(); ++j) {
            auto cj = rows.middleCols(g.start[j], g.rank(j));
            h.noalias() += static_cast<double>(j) * (cj * cj.adjoint());
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        Matrix vecs = f.block(i) * es.eigenvectors();
        for (Index k = 0; k < r; ++k) {
            double ev = std::round(es.eigenvalues()[k]);
            ev = std::clamp(ev, 0.0, static_cast<double>(g.blocks() - 1));
            basis.col(c++) = vecs.col(k);
            labels.push_back(combine(f.outcome[i], g.outcome[static_cast<std::size_t>(ev)]));
        }
    }
    return frame_from_columns(std::move(basis), labels, count);
}

Frame compose(const Frame& outer, const std::function<const Frame&(Answer)>& inner,
              const LabelCombine& combine, Answer count) {
    Index d1 = outer.dim();
    Index d2 = -1;
    Matrix basis;
    std::vector<Answer> labels;
    Index c = 0;
    for (std::size_t i = 0; i < outer.blocks(); ++i) {
        const Frame& in = inner(outer.outcome[i]);
        if (d2 < 0) {
            d2 = in.dim();
            basis.resize(d1 * d2, d1 * d2);
            labels.reserve(static_cast<std::size_t>(d1 * d2));
        } else if (in.dim() != d2) {
            throw ValidationError("inner frames must share one dimension");
        }
        for (std::size_t j = 0; j < in.blocks(); ++j) {
            Answer lab = combine(outer.outcome[i], in.outcome[j]);
            for (Index p = outer.start[i]; p < outer.start[i + 1]; ++p)
                for (Index q = in.start[j]; q < in.start[j + 1]; ++q) {
                    basis.col(c++) = kron_vec(outer.basis.col(p), in.basis.col(q));
                    labels.push_back(lab);
                }
        }
    }
    return frame_from_columns(std::move(basis), labels, count);
}

Eigen::MatrixXd block_weights(const Frame& f, const Frame& g) {
    if (f.dim() != g.dim()) throw ValidationError("frames of different dimension");
    double d = static_cast<double>(f.dim());
    Matrix gram = f.basis.adjoint() * g.basis;
    Eigen::MatrixXd w(static_cast<Index>(f.blocks()), static_cast<Index>(g.blocks()));
    for (std::size_t i = 0; i < f.blocks(); ++i)
        for (std::size_t j = 0; j < g.blocks(); ++j)
            w(static_cast<Index>(i), static_cast<Index>(j)) =
                gram.block(f.start[i], g.start[j], f.rank(i), g.rank(j)).squaredNorm() / d;
    return w;
}

double max_commutator(const Frame& f, const Frame& g) {
    if (f.dim() != g.dim()) throw ValidationError("frames of different dimension");
    Index d = f.dim();
    Matrix gram = f.basis.adjoint() * g.basis;
    double worst = 0;
    Matrix h(d, d);
    for (std::size_t j = 0; j < g.blocks(); ++j) {
        auto cj = gram.middleCols(g.start[j], g.rank(j));
        h.noalias() = cj * cj.adjoint();
        for (std::size_t i = 0; i < f.blocks(); ++i) {
            Index s = f.start[i], e = f.start[i + 1];
            // [P, Q] in the f basis only keeps entries linking block i to the rest.
            double off = h.block(s, 0, e - s, s).squaredNorm() + h.block(s, e, e - s, d - e).squaredNorm();
            worst = std::max(worst, 2.0 * off / static_cast<double>(d));
        }
    }
    return std::sqrt(worst);
}

}  // namespace nlg
