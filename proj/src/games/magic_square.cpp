#include <array>
#include <mutex>

#include <unsupported/Eigen/KroneckerProduct>

#include "nlg/builtin_games.hpp"

namespace nlg {
namespace ms {

namespace {

// Variables of each equation, as variable question indices.
const std::array<std::array<Question, 3>, 6> kEqVars = {{
    {6, 7, 8},
    {9, 10, 11},
    {12, 13, 14},
    {6, 9, 12},
    {7, 10, 13},
    {8, 11, 14},
}};

const char* const kLabels[15] = {"r1", "r2", "r3", "c1", "c2", "c3", "s11", "s12", "s13",
                                 "s21", "s22", "s23", "s31", "s32", "s33"};

struct AcceptTable {
    // accept[x][y][a][b]
    std::array<std::array<std::array<std::array<bool, 8>, 8>, 15>, 15> bits{};
    std::array<std::array<bool, 15>, 15> nontrivial{};
};

const AcceptTable& table() {
    static const AcceptTable t = [] {
        AcceptTable t;
        for (Question x = 0; x < 15; ++x)
            for (Question y = 0; y < 15; ++y) {
                bool nt = x == y || (is_equation(x) && position_in(x, y) >= 0) ||
                          (is_equation(y) && position_in(y, x) >= 0);
                t.nontrivial[x][y] = nt;
                for (Answer a = 0; a < answer_count(x); ++a)
                    for (Answer b = 0; b < answer_count(y); ++b) {
                        bool ok = true;
                        if (x == y) {
                            ok = a == b;
                        } else if (is_equation(x) && position_in(x, y) >= 0) {
                            int k = position_in(x, y);
                            ok = satisfies(x, a) && ((a >> (2 - k)) & 1u) == b;
                        } else if (is_equation(y) && position_in(y, x) >= 0) {
                            int k = position_in(y, x);
                            ok = satisfies(y, b) && ((b >> (2 - k)) & 1u) == a;
                        }
                        t.bits[x][y][a][b] = ok;
                    }
            }
        return t;
    }();
    return t;
}

Matrix pauli_z() {
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    return z;
}

Matrix pauli_x() {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = 1;
    x(1, 0) = 1;
    return x;
}

Matrix kron2(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

}  // namespace

Question var(int row, int col) { return static_cast<Question>(6 + 3 * (row - 1) + (col - 1)); }

bool is_equation(Question q) { return q < kEquations; }

Answer answer_count(Question q) {
    if (q >= kQuestions) throw ValidationError("not a Magic Square question");
    return is_equation(q) ? 8 : 2;
}

std::string question_label(Question q) {
    if (q >= kQuestions) throw ValidationError("not a Magic Square question");
    return kLabels[q];
}

std::string answer_label(Question q, Answer a) {
    if (a >= answer_count(q)) throw ValidationError("answer out of range");
    return bit_string(a, is_equation(q) ? 3 : 1);
}

int position_in(Question e, Question v) {
    if (!is_equation(e)) return -1;
    for (int k = 0; k < 3; ++k)
        if (kEqVars[e][static_cast<std::size_t>(k)] == v) return k;
    return -1;
}

Question equation_variable(Question e, int k) { return kEqVars.at(e).at(static_cast<std::size_t>(k)); }

bool satisfies(Question e, Answer a) {
    int parity = __builtin_popcount(a) & 1;
    // The last column multiplies to -1, so its bits sum to 1.
    return parity == (e == 5 ? 1 : 0);
}

bool nontrivial(Question x, Question y) { return table().nontrivial[x][y]; }

bool decide(Question x, Question y, Answer a, Answer b) { return table().bits[x][y][a][b]; }

Matrix honest_observable(int row, int col) {
    Matrix z = pauli_z(), x = pauli_x(), id = Matrix::Identity(2, 2);
    switch (3 * (row - 1) + (col - 1)) {
        case 0: return kron2(z, id);
        case 1: return kron2(id, z);
        case 2: return kron2(z, z);
        case 3: return kron2(id, x);
        case 4: return kron2(x, id);
        case 5: return kron2(x, x);
        case 6: return kron2(z, x);
        case 7: return kron2(x, z);
        case 8: return kron2(Matrix(x * z), Matrix(z * x));
    }
    throw ValidationError("Magic Square cell out of range");
}

const Frame& honest_frame(Question q) {
    static const std::array<Frame, 15> frames = [] {
        std::array<Frame, 15> f;
        Matrix id = Matrix::Identity(4, 4);
        for (int r = 1; r <= 3; ++r)
            for (int c = 1; c <= 3; ++c) {
                Matrix o = honest_observable(r, c);
                Measurement m{{"0", "1"}, {0.5 * (id + o), 0.5 * (id - o)}, MeasurementKind::projective};
                f[var(r, c)] = frame_from_measurement(m);
            }
        for (Question e = 0; e < 6; ++e) {
            Frame two = refine(f[kEqVars[e][0]], f[kEqVars[e][1]], [](Answer a, Answer b) { return 2 * a + b; }, 4);
            f[e] = refine(two, f[kEqVars[e][2]], [](Answer a, Answer b) { return 2 * a + b; }, 8);
        }
        return f;
    }();
    if (q >= kQuestions) throw ValidationError("not a Magic Square question");
    return frames[q];
}

}  // namespace ms

Answer MagicSquareGame::answer_count(Question q) const { return ms::answer_count(q); }
std::string MagicSquareGame::question_label(Question q) const { return ms::question_label(q); }
std::string MagicSquareGame::answer_label(Question q, Answer a) const { return ms::answer_label(q, a); }
bool MagicSquareGame::nontrivial(Question x, Question y) const { return ms::nontrivial(x, y); }
bool MagicSquareGame::decide(Question x, Question y, Answer a, Answer b) const { return ms::decide(x, y, a, b); }
json MagicSquareGame::descriptor() const { return json{{"builtin", {{"kind", "magic_square"}}}}; }

GameBundle magic_square() {
    std::vector<std::shared_ptr<const Frame>> frames;
    for (Question q = 0; q < ms::kQuestions; ++q) frames.push_back(std::make_shared<const Frame>(ms::honest_frame(q)));
    return {std::make_shared<MagicSquareGame>(), std::make_shared<FrameStrategy>(4, std::move(frames))};
}

}  // namespace nlg
