#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nlg/builtin_games.hpp"

namespace nlg {

struct ResidualReport {
    std::map<std::string, double> relations;
    double max_residual = 0;
    // 1 - value of the audited strategy; NaN when the game is too large to evaluate exactly.
    double value_deficit = 0;
};

using ObservablePairs = std::vector<std::pair<Matrix, Matrix>>;

// Observable P_0 - P_1 of a two-outcome frame.
Matrix frame_observable(const Frame& f);

// Magic Square relations from the variable observables. Keys: R1.row.i, R1.col.j,
// R2.comm.ij_kl, R3.anticomm.ij_kl.
ResidualReport ms_residuals(const Strategy& s);

// Anticommutation within each pair and commutation across pairs.
std::map<std::string, double> pair_family_relations(const ObservablePairs& family);

ObservablePairs ms_pair_family(const Strategy& s);
// A/B pairs built from the marginals of questions (i, succ(i), x, x).
ObservablePairs two_of_n_pair_family(const TwoOfNGame& g, const Strategy& s);
// Single-bit sampling and erasure observables, one pair per bit of each of S_A and S_B.
ObservablePairs qs_pair_family(const QuestionSamplingGame& g, const Strategy& s);

ResidualReport two_of_n_residuals(const TwoOfNGame& g, const Strategy& s);
ResidualReport qs_residuals(const QuestionSamplingGame& g, const Strategy& s);

struct DimensionCertificate {
    int pairs = 0;
    double eps = 0;
};
DimensionCertificate dimension_certificate(const ObservablePairs& family, Tolerance tol = {});

struct ExtractedProjection {
    Matrix projection;
    double trace = 0;
};
ExtractedProjection extract_projection(const QuestionSamplingGame& g, const Strategy& s, Tolerance tol = {});

json residual_report_to_json(const ResidualReport& r);

}  // namespace nlg
