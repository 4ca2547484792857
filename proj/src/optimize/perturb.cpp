#include "nlg/optimize.hpp"

namespace nlg {

std::shared_ptr<FrameStrategy> perturb_strategy(const Strategy& s, double magnitude, std::uint64_t seed) {
    if (!(magnitude >= 0)) throw ValidationError("perturbation magnitude must be non-negative");
    Rng rng(seed);
    Index d = s.dim();
    std::vector<std::shared_ptr<const Frame>> frames;
    for (Question q = 0; q < s.question_count(); ++q) {
        // Draw even at magnitude 0 so the stream per question does not depend on it.
        Matrix h = random_hermitian(d, rng);
        auto f = s.frame(q);
        if (magnitude == 0)
            frames.push_back(f);
        else
            frames.push_back(std::make_shared<const Frame>(conjugated(*f, exp_i_hermitian(h, magnitude))));
    }
    return std::make_shared<FrameStrategy>(d, std::move(frames));
}

}  // namespace nlg
