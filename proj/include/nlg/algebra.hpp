#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlg/error.hpp"

namespace nlg {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct Tolerance {
    double eps = 1e-9;
};

enum class MeasurementKind { povm, projective, general };

const char* kind_name(MeasurementKind k);
MeasurementKind kind_from_name(const std::string& s);

// A finite family of equally sized square operators indexed by ordered labels.
struct Measurement {
    std::vector<std::string> labels;
    std::vector<Matrix> elements;
    MeasurementKind kind = MeasurementKind::general;

    Index dim() const { return elements.empty() ? 0 : elements.front().rows(); }
    std::size_t size() const { return elements.size(); }
    const Matrix& operator[](std::size_t a) const { return elements[a]; }
    std::size_t index_of(const std::string& label) const;
};

// Checks shapes and the invariant implied by `kind`; throws ValidationError.
Measurement make_measurement(std::vector<std::string> labels, std::vector<Matrix> elements,
                             MeasurementKind kind, Tolerance tol = {});

// Normalized trace tr(A)/dim.
cplx tau(const Matrix& a);
double tau_norm(const Matrix& a);
double tau_norm(const Measurement& m);

bool is_hermitian(const Matrix& a, Tolerance tol = {});
bool is_psd(const Matrix& a, Tolerance tol = {});
bool is_projection(const Matrix& a, Tolerance tol = {});
bool is_unitary(const Matrix& a, Tolerance tol = {});
bool is_povm(const Measurement& m, Tolerance tol = {});
bool is_projective(const Measurement& m, Tolerance tol = {});

double closeness(const Measurement& m, const Measurement& n);
double inconsistency(const Measurement& m, const Measurement& n, Tolerance tol = {});

// Element b of the result is the sum of m_a over f[a] == b.
Measurement data_process(const Measurement& m, const std::vector<std::string>& target_labels,
                         const std::vector<std::size_t>& f);

Matrix binary_to_observable(const Measurement& m, Tolerance tol = {});

// Observables indexed by u in {0,1}^n; u is read as an n-bit integer, first bit most significant.
std::vector<Matrix> fourier_observables(const Measurement& m, Tolerance tol = {});

double commutator_norm(const Matrix& a, const Matrix& b);
double anticommutator_norm(const Matrix& a, const Matrix& b);

// Projector onto the span of eigenvectors of a Hermitian matrix with eigenvalue above `cut`.
Matrix spectral_projector(const Matrix& h, double cut = 0.5);

Measurement projectivize(const Measurement& m, Tolerance tol = {});
Measurement paste(const std::vector<Measurement>& ms, Tolerance tol = {});

std::string bit_string(std::uint64_t v, int n);
int parse_bit_string(const std::string& s, std::uint64_t& out);

}  // namespace nlg
