#include <algorithm>
#include <array>

#include "nlg/transform.hpp"

namespace nlg {

namespace {

const std::array<const char*, 7> kSpecialLabels = {"I", "I_A", "I_B", "I_AS_B", "I_AE_B", "I_BS_A", "I_BE_A"};

using S = IntrospectGame::Special;
using QS = QuestionSamplingGame;

// Player a special question is about: 0 for A, 1 for B.
int side(S s) { return (s == S::IA || s == S::IASB || s == S::IAEB) ? 0 : 1; }
bool composite(S s) { return s == S::IASB || s == S::IAEB || s == S::IBSA || s == S::IBEA; }
bool erases(S s) { return s == S::IAEB || s == S::IBEA; }
QS::Special sample_of(int w) { return w == 0 ? QS::SA : QS::SB; }
QS::Special erase_of(int w) { return w == 0 ? QS::EA : QS::EB; }

}  // namespace

IntrospectGame::IntrospectGame(GamePtr base)
    : base_(std::move(base)),
      ell_([&] {
          Question n = base_->question_count();
          int l = 0;
          while ((Question{1} << l) < n) ++l;
          if ((Question{1} << l) != n) throw ValidationError("introspection needs the question set {0,1}^l");
          if (l < 2 || l % 2 != 0) throw ValidationError("introspection needs an even question length l >= 2");
          if (l > 12) throw ValidationError("question length too large for introspection");
          return l;
      }()),
      qs_(ell_),
      nx_(base_->question_count()) {
    from_bits_.assign(nx_, nx_);
    to_bits_.assign(nx_, 0);
    for (Question x = 0; x < nx_; ++x) {
        std::uint64_t v = 0;
        if (parse_bit_string(base_->question_label(x), v) != ell_)
            throw ValidationError("base question '" + base_->question_label(x) + "' is not an " +
                                  std::to_string(ell_) + "-bit string");
        if (from_bits_[v] != nx_) throw ValidationError("base question labels repeat");
        from_bits_[v] = x;
        to_bits_[x] = static_cast<Answer>(v);
    }
    if (!is_synchronous(*base_)) throw ValidationError("introspection needs a synchronous base game");
    std::uint64_t k = 0;
    for (Question x = 0; x < nx_; ++x) {
        offset_.push_back(static_cast<Answer>(k));
        k += base_->answer_count(x);
    }
    if (k * k > 0xffffffffULL) throw ValidationError("base answers too many for introspection");
    K_ = static_cast<Answer>(k);
}

std::pair<Question, Answer> IntrospectGame::unflatten(Answer k) const {
    auto it = std::upper_bound(offset_.begin(), offset_.end(), k);
    Question x = static_cast<Question>(it - offset_.begin()) - 1;
    return {x, k - offset_[x]};
}

Answer IntrospectGame::answer_count(Question q) const {
    if (q >= question_count()) throw ValidationError("question index out of range");
    if (!is_special(q)) return qs_.answer_count(q);
    auto s = static_cast<S>(q - qs_.question_count());
    if (s == S::I) return K_ * K_;
    if (composite(s)) return K_ * static_cast<Answer>(nx_);
    return K_;
}

std::string IntrospectGame::question_label(Question q) const {
    if (!is_special(q)) return qs_.question_label(q);
    if (q >= question_count()) throw ValidationError("question index out of range");
    return kSpecialLabels[q - qs_.question_count()];
}

std::string IntrospectGame::flat_label(Answer k) const {
    auto [x, a] = unflatten(k);
    return base_->question_label(x) + ":" + base_->answer_label(x, a);
}

std::string IntrospectGame::answer_label(Question q, Answer a) const {
    if (a >= answer_count(q)) throw ValidationError("answer out of range");
    if (!is_special(q)) return qs_.answer_label(q, a);
    auto s = static_cast<S>(q - qs_.question_count());
    if (s == S::I) return "(" + flat_label(a / K_) + "," + flat_label(a % K_) + ")";
    if (composite(s))
        return "(" + flat_label(a / static_cast<Answer>(nx_)) + "," +
               base_->question_label(a % static_cast<Answer>(nx_)) + ")";
    return "(" + flat_label(a) + ")";
}

// Returns true if (q, r) in this order is one of the special rows; `handled` tells whether it was.
bool IntrospectGame::ordered_decide(Question q, Question r, Answer a, Answer b, bool& handled) const {
    handled = false;
    if (!is_special(q)) return true;
    auto s = static_cast<S>(q - qs_.question_count());
    Answer nx = static_cast<Answer>(nx_);
    if (s == S::I) {
        if (r != special(S::IA) && r != special(S::IB)) return true;
        handled = true;
        int w = r == special(S::IA) ? 0 : 1;
        auto [xa, aa] = unflatten(a / K_);
        auto [xb, ab] = unflatten(a % K_);
        if (!base_->nontrivial(xa, xb)) return true;
        auto [z, c] = unflatten(b);
        Question xw = w == 0 ? xa : xb;
        Answer aw = w == 0 ? aa : ab;
        return z == xw && c == aw && base_->decide(xa, xb, aa, ab);
    }
    if (!composite(s)) {
        int w = side(s);
        Question sw = qs_.special(sample_of(w));
        if (r == sw) {
            handled = true;
            return question_of(b) == unflatten(a).first;
        }
        for (S t : {w == 0 ? S::IASB : S::IBSA, w == 0 ? S::IAEB : S::IBEA})
            if (r == special(t)) {
                handled = true;
                return b / nx == a;
            }
        return true;
    }
    int other = 1 - side(s);
    Question target = qs_.special(erases(s) ? erase_of(other) : sample_of(other));
    if (r != target) return true;
    handled = true;
    return question_of(b) == a % nx;
}

bool IntrospectGame::nontrivial(Question q, Question r) const {
    if (q == r) return true;
    if (!is_special(q) && !is_special(r)) return qs_.nontrivial(q, r);
    bool handled = false;
    ordered_decide(q, r, 0, 0, handled);
    if (handled) return true;
    ordered_decide(r, q, 0, 0, handled);
    return handled;
}

bool IntrospectGame::decide(Question q, Question r, Answer a, Answer b) const {
    if (q == r) return a == b;
    if (!is_special(q) && !is_special(r)) return qs_.decide(q, r, a, b);
    bool handled = false;
    bool v = ordered_decide(q, r, a, b, handled);
    if (handled) return v;
    v = ordered_decide(r, q, b, a, handled);
    return handled ? v : true;
}

json IntrospectGame::descriptor() const { return transform_descriptor("introspect", json::object(), *base_); }

std::optional<Question> IntrospectGame::find_question(const std::string& label) const {
    for (std::size_t k = 0; k < kSpecialLabels.size(); ++k)
        if (label == kSpecialLabels[k]) return special(static_cast<S>(k));
    return qs_.find_question(label);
}

std::shared_ptr<IntrospectGame> introspect(GamePtr g) { return std::make_shared<IntrospectGame>(std::move(g)); }

StrategyPtr lift_introspection(const IntrospectGame& g, StrategyPtr s, Tolerance tol) {
    const Game& base = g.base();
    check_strategy(base, *s);
    auto rep = is_oracularizable(base, *s, tol);
    if (!rep.ok)
        throw ValidationError("strategy is not oracularizable (largest commutator " + std::to_string(rep.worst) + ")");

    const QS& qs = g.sampling();
    auto bundle = question_sampling(g.bits());
    StrategyPtr honest = bundle.strategy;
    const Index d = s->dim();
    const Index dim = honest->dim() * d;
    const Question nx = base.question_count();
    const Answer K = g.flat_count();
    const int n = g.bits();
    const Answer mask = (Answer{1} << n) - 1;

    std::vector<Question> question_of(std::size_t{1} << n);
    std::vector<Answer> offset(nx), counts(nx);
    for (Answer z = 0; z <= mask; ++z) question_of[z] = g.question_of(z);
    for (Question x = 0; x < nx; ++x) {
        offset[x] = g.flatten(x, 0);
        counts[x] = base.answer_count(x);
    }
    std::vector<std::shared_ptr<const Frame>> player(nx);
    for (Question x = 0; x < nx; ++x) player[x] = s->frame(x);

    // Joint answers (a, b) of (x, y), or a constant (0, 0) when the pair is trivial.
    auto joint = std::make_shared<std::vector<Frame>>();
    for (Question x = 0; x < nx; ++x)
        for (Question y = 0; y < nx; ++y) {
            Answer ny = counts[y];
            if (base.nontrivial(x, y))
                joint->push_back(refine(*player[x], *player[y], [ny](Answer a, Answer b) { return a * ny + b; },
                                        counts[x] * ny));
            else
                joint->push_back(identity_frame(d, 0, counts[x] * ny));
        }

    std::array<std::shared_ptr<const Frame>, 4> special;
    for (int k = 0; k < 4; ++k) special[k] = honest->frame(qs.special(static_cast<QS::Special>(k)));
    Answer span = mask + 1;
    auto pair_code = [span](Answer u, Answer v) { return u * span + v; };

    Question qs_count = qs.question_count();
    auto build = [=](Question q) -> Frame {
        if (q < qs_count) {
            return kron(*honest->frame(q), identity_frame(d), [](Answer a, Answer) { return a; },
                        honest->frame(q)->outcome_count);
        }
        auto sp = static_cast<S>(q - qs_count);
        if (sp == S::I) {
            Frame outer = refine(*special[QS::SA], *special[QS::SB], pair_code, span * span);
            return compose(
                outer, [&](Answer o) -> const Frame& { return (*joint)[question_of[o / span] * nx + question_of[o % span]]; },
                [&](Answer o, Answer c) {
                    Question x = question_of[o / span], y = question_of[o % span];
                    return (offset[x] + c / counts[y]) * K + offset[y] + c % counts[y];
                },
                K * K);
        }
        int w = side(sp);
        const Frame& sample = *special[sample_of(w)];
        if (!composite(sp)) {
            return compose(
                sample, [&](Answer z) -> const Frame& { return *player[question_of[z]]; },
                [&](Answer z, Answer a) { return offset[question_of[z]] + a; }, K);
        }
        const Frame& second = *special[erases(sp) ? erase_of(1 - w) : sample_of(1 - w)];
        Frame outer = refine(sample, second, pair_code, span * span);
        Answer nxa = static_cast<Answer>(nx);
        return compose(
            outer, [&](Answer o) -> const Frame& { return *player[question_of[o / span]]; },
            [&](Answer o, Answer a) {
                return (offset[question_of[o / span]] + a) * nxa + static_cast<Answer>(question_of[o % span]);
            },
            K * nxa);
    };
    return std::make_shared<LazyStrategy>(dim, g.question_count(), build, 1024);
}

}  // namespace nlg
