#pragma once

#include <cstdint>
#include <vector>

#include "nlg/game.hpp"

namespace nlg {

struct SeesawConfig {
    Index dim = 2;
    int restarts = 1;
    int max_iters = 200;
    std::uint64_t seed = 0;
    double improvement_tol = 1e-12;
};

struct SeesawStep {
    int restart = 0;
    int iteration = 0;
    double value = 0;
};

struct SeesawResult {
    std::shared_ptr<FrameStrategy> strategy;
    double value = 0;
    int best_restart = 0;
    std::vector<SeesawStep> trace;
};

SeesawResult seesaw(const Game& g, const SeesawConfig& cfg);

// Coefficient matrices C_a for question q with every other measurement fixed:
// value = const + sum_a tau(C_a M^q_a).
std::vector<Matrix> seesaw_coefficients(const Game& g, const std::vector<std::shared_ptr<const Frame>>& frames,
                                        Question q);

// Best two-outcome projective measurement for coefficients (C_0, C_1).
Frame binary_update(const Matrix& c0, const Matrix& c1);

struct ClassicalResult {
    double value = 0;
    std::vector<Answer> answers;  // one per question
    std::uint64_t nodes = 0;
};

// Exact best deterministic synchronous strategy (dim 1).
ClassicalResult classical_value(const Game& g, double cap = 1e8);
// Plain enumeration of every answer map; for cross-checks on tiny games.
ClassicalResult classical_value_exhaustive(const Game& g, double cap = 1e7);
double deterministic_value(const Game& g, const std::vector<Answer>& answers);

// Conjugates each measurement by exp(i * magnitude * H_q) with H_q random Hermitian of unit tau-norm.
std::shared_ptr<FrameStrategy> perturb_strategy(const Strategy& s, double magnitude, std::uint64_t seed);

}  // namespace nlg
