#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nlg/algebra.hpp"

namespace nlg {

using Answer = std::uint32_t;

// A projective measurement stored as an orthonormal basis whose columns are
// grouped by outcome. Outcomes of rank zero have no block.
struct Frame {
    Matrix basis;
    std::vector<Answer> outcome;  // one per block, strictly increasing
    std::vector<Index> start;     // block boundaries, size blocks()+1
    Answer outcome_count = 0;

    Index dim() const { return basis.rows(); }
    std::size_t blocks() const { return outcome.size(); }
    Index rank(std::size_t b) const { return start[b + 1] - start[b]; }
    auto block(std::size_t b) const { return basis.middleCols(start[b], rank(b)); }
    long find_block(Answer a) const;
    Matrix element(Answer a) const;
    Measurement to_measurement(const std::vector<std::string>& labels) const;
};

// Groups columns by label (stable). Labels must be < count.
Frame frame_from_columns(Matrix basis, const std::vector<Answer>& column_label, Answer count);
Frame frame_from_measurement(const Measurement& m, Tolerance tol = {});
Frame identity_frame(Index d, Answer label = 0, Answer count = 1);

using LabelMap = std::function<Answer(Answer)>;
using LabelCombine = std::function<Answer(Answer, Answer)>;

Frame relabel(const Frame& f, const LabelMap& map, Answer count);
Frame conjugated(const Frame& f, const Matrix& u);

// Measurement on the tensor product; outcome combine(a, b).
Frame kron(const Frame& f, const Frame& g, const LabelCombine& combine, Answer count);

// Joint frame of two commuting frames on the same space; outcome combine(a, b).
Frame refine(const Frame& f, const Frame& g, const LabelCombine& combine, Answer count);

// Frame on the tensor product that measures `outer`, then inner(x) on the second factor.
Frame compose(const Frame& outer, const std::function<const Frame&(Answer)>& inner,
              const LabelCombine& combine, Answer count);

// weight(i, j) = tau(P_i Q_j) for block i of f and block j of g.
Eigen::MatrixXd block_weights(const Frame& f, const Frame& g);

// max over outcome pairs of the tau-norm of the commutator [P_a, Q_b].
double max_commutator(const Frame& f, const Frame& g);

}  // namespace nlg
