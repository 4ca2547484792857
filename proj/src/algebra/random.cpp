#include "nlg/random.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace nlg {

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            double re = n01(rng);
            double im = n01(rng);
            m(i, j) = cplx(re, im);
        }
    return m;
}

Matrix haar_unitary(Index d, Rng& rng) {
    Matrix z = random_gaussian(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < d; ++k) {
        cplx diag = r(k, k);
        double a = std::abs(diag);
        if (a > 0) q.col(k) *= diag / a;
    }
    return q;
}

Matrix random_hermitian(Index d, Rng& rng) {
    Matrix z = random_gaussian(d, d, rng);
    Matrix h = 0.5 * (z + z.adjoint());
    double n = tau_norm(h);
    if (n == 0) return Matrix::Identity(d, d);
    return h / n;
}

Matrix exp_i_hermitian(const Matrix& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    Eigen::VectorXcd phase(h.rows());
    for (Index k = 0; k < h.rows(); ++k) phase[k] = std::polar(1.0, t * es.eigenvalues()[k]);
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::to_string(i);
    return out;
}

Measurement random_projective(Index d, std::size_t outcomes, Rng& rng) {
    Matrix u = haar_unitary(d, rng);
    std::vector<Matrix> el(outcomes, Matrix::Zero(d, d));
    for (Index c = 0; c < d; ++c) {
        auto a = static_cast<std::size_t>(c) % outcomes;
        el[a].noalias() += u.col(c) * u.col(c).adjoint();
    }
    return Measurement{index_labels(outcomes), std::move(el), MeasurementKind::projective};
}

Measurement random_povm(Index d, std::size_t outcomes, Rng& rng) {
    // A_a = G_a G_a^*, then S^{-1/2} A_a S^{-1/2} with S the sum.
    std::vector<Matrix> el(outcomes);
    Matrix s = Matrix::Zero(d, d);
    for (auto& e : el) {
        Matrix g = random_gaussian(d, d, rng);
        e = g * g.adjoint();
        s += e;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    Eigen::VectorXd inv = es.eigenvalues().cwiseSqrt().cwiseInverse();
    Matrix w = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
    // The last element is the exact complement, so the sum is the identity up to rounding.
    Matrix rest = Matrix::Identity(d, d);
    for (std::size_t a = 0; a + 1 < outcomes; ++a) {
        el[a] = w * el[a] * w;
        el[a] = 0.5 * (el[a] + el[a].adjoint());
        rest -= el[a];
    }
    el.back() = 0.5 * (rest + rest.adjoint());
    return Measurement{index_labels(outcomes), std::move(el), MeasurementKind::povm};
}

Measurement random_operator_set(Index d, std::size_t outcomes, Rng& rng) {
    std::vector<Matrix> el(outcomes);
    for (auto& e : el) e = random_gaussian(d, d, rng) / std::sqrt(2.0 * static_cast<double>(d));
    return Measurement{index_labels(outcomes), std::move(el), MeasurementKind::general};
}

}  // namespace nlg
