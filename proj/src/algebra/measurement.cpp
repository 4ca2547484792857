#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "nlg/algebra.hpp"

namespace nlg {

const char* kind_name(MeasurementKind k) {
    switch (k) {
        case MeasurementKind::povm: return "povm";
        case MeasurementKind::projective: return "projective";
        case MeasurementKind::general: return "general";
    }
    return "general";
}

MeasurementKind kind_from_name(const std::string& s) {
    if (s == "povm") return MeasurementKind::povm;
    if (s == "projective") return MeasurementKind::projective;
    if (s == "general") return MeasurementKind::general;
    throw ValidationError("unknown measurement kind '" + s + "'");
}

std::size_t Measurement::index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw ValidationError("no outcome labelled '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
}

Measurement make_measurement(std::vector<std::string> labels, std::vector<Matrix> elements,
                             MeasurementKind kind, Tolerance tol) {
    if (labels.size() != elements.size())
        throw ValidationError("label count does not match element count");
    if (elements.empty()) throw ValidationError("measurement has no outcomes");
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("duplicate outcome label");
    Index d = elements.front().rows();
    if (d < 1) throw ValidationError("operator dimension must be positive");
    for (const auto& e : elements) {
        if (e.rows() != d || e.cols() != d)
            throw ValidationError("elements must be square and of equal dimension");
        if (!e.allFinite()) throw ValidationError("non-finite operator entry");
    }
    Measurement m{std::move(labels), std::move(elements), kind};
    if (kind == MeasurementKind::povm && !is_povm(m, tol))
        throw ValidationError("elements do not form a POVM within tolerance");
    if (kind == MeasurementKind::projective && !is_projective(m, tol))
        throw ValidationError("elements do not form a projective measurement within tolerance");
    return m;
}

cplx tau(const Matrix& a) {
    if (a.rows() != a.cols()) throw ValidationError("tracial state needs a square operator");
    return a.trace() / static_cast<double>(a.rows());
}

double tau_norm(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw ValidationError("tau norm needs a non-empty square operator");
    return std::sqrt(a.squaredNorm() / static_cast<double>(a.rows()));
}

double tau_norm(const Measurement& m) {
    double s = 0;
    for (const auto& e : m.elements) {
        double n = tau_norm(e);
        s += n * n;
    }
    return std::sqrt(s);
}

bool is_hermitian(const Matrix& a, Tolerance tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol.eps;
}

bool is_psd(const Matrix& a, Tolerance tol) {
    if (!is_hermitian(a, tol)) return false;
    Matrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol.eps;
}

bool is_projection(const Matrix& a, Tolerance tol) {
    if (!is_hermitian(a, tol)) return false;
    return (a * a - a).cwiseAbs().maxCoeff() <= tol.eps;
}

bool is_unitary(const Matrix& a, Tolerance tol) {
    if (a.rows() != a.cols()) return false;
    Matrix id = Matrix::Identity(a.rows(), a.cols());
    return (a.adjoint() * a - id).cwiseAbs().maxCoeff() <= tol.eps;
}

bool is_povm(const Measurement& m, Tolerance tol) {
    if (m.elements.empty()) return false;
    Index d = m.dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& e : m.elements) {
        if (!is_psd(e, tol)) return false;
        sum += e;
    }
    return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol.eps;
}

bool is_projective(const Measurement& m, Tolerance tol) {
    if (!is_povm(m, tol)) return false;
    for (const auto& e : m.elements)
        if (!is_projection(e, tol)) return false;
    return true;
}

static void require_compatible(const Measurement& m, const Measurement& n) {
    if (m.labels != n.labels) throw ValidationError("outcome label sets differ");
    if (m.dim() != n.dim()) throw ValidationError("operator dimensions differ");
}

double closeness(const Measurement& m, const Measurement& n) {
    require_compatible(m, n);
    double s = 0;
    for (std::size_t a = 0; a < m.size(); ++a) s += (m[a] - n[a]).squaredNorm();
    return std::sqrt(s / static_cast<double>(m.dim()));
}

double inconsistency(const Measurement& m, const Measurement& n, Tolerance tol) {
    require_compatible(m, n);
    double d = static_cast<double>(m.dim());
    double s = 0;
    for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = 0; b < n.size(); ++b)
            if (a != b) s += (m[a].cwiseProduct(n[b].transpose())).sum().real() / d;
    if (s < 0 && s >= -tol.eps) s = 0;
    return std::max(s, 0.0);
}

Measurement data_process(const Measurement& m, const std::vector<std::string>& target_labels,
                         const std::vector<std::size_t>& f) {
    if (f.size() != m.size()) throw ValidationError("label map is not total on the outcome set");
    if (target_labels.empty()) throw ValidationError("empty target label set");
    Index d = m.dim();
    std::vector<Matrix> out(target_labels.size(), Matrix::Zero(d, d));
    for (std::size_t a = 0; a < f.size(); ++a) {
        if (f[a] >= target_labels.size()) throw ValidationError("label map leaves the target set");
        out[f[a]] += m[a];
    }
    MeasurementKind kind = m.kind;
    return Measurement{target_labels, std::move(out), kind};
}

Matrix binary_to_observable(const Measurement& m, Tolerance tol) {
    if (m.size() != 2) throw ValidationError("observable needs exactly two outcomes");
    if (!is_projective(m, tol)) throw ValidationError("observable needs a complete projective measurement");
    std::size_t zero = m.index_of("0"), one = m.index_of("1");
    return m[zero] - m[one];
}

std::string bit_string(std::uint64_t v, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int k = 0; k < n; ++k)
        if ((v >> (n - 1 - k)) & 1u) s[static_cast<std::size_t>(k)] = '1';
    return s;
}

int parse_bit_string(const std::string& s, std::uint64_t& out) {
    if (s.empty() || s.size() > 63) return -1;
    out = 0;
    for (char c : s) {
        if (c != '0' && c != '1') return -1;
        out = (out << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return static_cast<int>(s.size());
}

std::vector<Matrix> fourier_observables(const Measurement& m, Tolerance tol) {
    if (!is_projective(m, tol)) throw ValidationError("Fourier observables need a projective measurement");
    int n = -1;
    std::vector<std::uint64_t> value(m.size());
    for (std::size_t a = 0; a < m.size(); ++a) {
        int len = parse_bit_string(m.labels[a], value[a]);
        if (len < 0 || (n >= 0 && len != n)) throw ValidationError("outcomes must be bit strings of one length");
        n = len;
    }
    std::uint64_t count = std::uint64_t{1} << n;
    if (m.size() != count) throw ValidationError("outcome set is not all of {0,1}^n");
    std::vector<Matrix> obs(count, Matrix::Zero(m.dim(), m.dim()));
    for (std::uint64_t u = 0; u < count; ++u)
        for (std::size_t a = 0; a < m.size(); ++a) {
            double sign = (__builtin_popcountll(u & value[a]) & 1) ? -1.0 : 1.0;
            obs[u] += sign * m[a];
        }
    return obs;
}

double commutator_norm(const Matrix& a, const Matrix& b) { return tau_norm(Matrix(a * b - b * a)); }

double anticommutator_norm(const Matrix& a, const Matrix& b) { return tau_norm(Matrix(a * b + b * a)); }

Matrix spectral_projector(const Matrix& h, double cut) {
    Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    Matrix p = Matrix::Zero(h.rows(), h.cols());
    for (Index k = 0; k < vals.size(); ++k)
        if (vals[k] > cut) p.noalias() += vecs.col(k) * vecs.col(k).adjoint();
    return p;
}

Measurement projectivize(const Measurement& m, Tolerance tol) {
    if (!is_povm(m, tol)) throw ValidationError("projectivize needs a POVM");
    if (is_projective(m, tol)) {
        Measurement out = m;
        out.kind = MeasurementKind::projective;
        return out;
    }
    Index d = m.dim();
    std::size_t last = 0;
    for (std::size_t a = 1; a < m.size(); ++a)
        if (m.labels[a] > m.labels[last]) last = a;
    Matrix id = Matrix::Identity(d, d);
    Matrix fixed = Matrix::Zero(d, d);
    std::vector<Matrix> out(m.size(), Matrix::Zero(d, d));
    for (std::size_t a = 0; a < m.size(); ++a) {
        if (a == last) continue;
        Matrix rounded = spectral_projector(m[a]);
        Matrix comp = id - fixed;
        Matrix p = spectral_projector(Matrix(comp * rounded * comp));
        out[a] = p;
        fixed += p;
    }
    out[last] = id - fixed;
    // Clean the residual complement so it is an exact projector numerically.
    out[last] = spectral_projector(out[last]);
    return Measurement{m.labels, std::move(out), MeasurementKind::projective};
}

Measurement paste(const std::vector<Measurement>& ms, Tolerance tol) {
    if (ms.empty()) throw ValidationError("paste needs at least one measurement");
    for (const auto& m : ms) {
        if (m.labels != ms.front().labels) throw ValidationError("paste inputs need one outcome set");
        if (m.dim() != ms.front().dim()) throw ValidationError("paste inputs need one dimension");
        if (!is_projective(m, tol)) throw ValidationError("paste inputs must be projective");
    }
    if (ms.size() == 1) {
        Measurement out = ms.front();
        out.kind = MeasurementKind::projective;
        return out;
    }
    std::size_t k = ms.size(), a = ms.front().size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= a;
    Index d = ms.front().dim();
    std::vector<std::string> labels(total);
    std::vector<Matrix> q(total);
    for (std::size_t t = 0; t < total; ++t) {
        std::size_t rest = t;
        std::vector<std::size_t> digits(k);
        for (std::size_t i = k; i-- > 0;) {
            digits[i] = rest % a;
            rest /= a;
        }
        Matrix p = Matrix::Identity(d, d);
        std::string label;
        for (std::size_t i = 0; i < k; ++i) {
            p = p * ms[i][digits[i]];
            if (i) label += ",";
            label += ms[i].labels[digits[i]];
        }
        labels[t] = label;
        q[t] = p * p.adjoint();
    }
    Measurement povm{labels, std::move(q), MeasurementKind::povm};
    Tolerance loose{std::max(tol.eps, 1e-9)};
    return projectivize(povm, loose);
}

}  // namespace nlg
