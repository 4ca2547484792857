#include <cmath>

#include "nlg/builtin_games.hpp"

namespace nlg {

TableGame::TableGame(std::string name, std::vector<std::string> questions,
                     std::vector<std::vector<std::string>> answers,
                     std::map<std::pair<Question, Question>, std::set<std::pair<Answer, Answer>>> accept)
    : name_(std::move(name)), questions_(std::move(questions)), answers_(std::move(answers)) {
    if (questions_.empty()) throw ValidationError("table game needs at least one question");
    if (answers_.size() != questions_.size()) throw ValidationError("table game needs an answer list per question");
    for (const auto& a : answers_)
        if (a.empty()) throw ValidationError("every question needs at least one answer");
    for (const auto& [key, acc] : accept) {
        auto [x, y] = key;
        if (x >= questions_.size() || y >= questions_.size()) throw ValidationError("pair names an unknown question");
        std::set<std::pair<Answer, Answer>> flipped;
        for (auto [a, b] : acc) {
            if (a >= answers_[x].size() || b >= answers_[y].size())
                throw ValidationError("accepted answer out of range");
            flipped.insert({b, a});
        }
        auto merge = [&](std::pair<Question, Question> k, const std::set<std::pair<Answer, Answer>>& v) {
            auto it = accept_.find(k);
            if (it == accept_.end())
                accept_[k] = v;
            else if (it->second != v)
                throw ValidationError("accept sets of (x, y) and (y, x) disagree");
        };
        merge({x, y}, acc);
        merge({y, x}, flipped);
    }
}

Answer TableGame::answer_count(Question q) const { return static_cast<Answer>(answers_.at(q).size()); }
std::string TableGame::question_label(Question q) const { return questions_.at(q); }
std::string TableGame::answer_label(Question q, Answer a) const { return answers_.at(q).at(a); }

bool TableGame::nontrivial(Question x, Question y) const { return accept_.count({x, y}) > 0; }

bool TableGame::decide(Question x, Question y, Answer a, Answer b) const {
    auto it = accept_.find({x, y});
    if (it == accept_.end()) return true;
    return it->second.count({a, b}) > 0;
}

json TableGame::descriptor() const {
    if (!builtin_spec_.is_null()) return json{{"builtin", builtin_spec_}};
    json answers = json::object();
    for (std::size_t q = 0; q < questions_.size(); ++q) answers[questions_[q]] = answers_[q];
    json pairs = json::array();
    json accept = json::object();
    for (const auto& [key, acc] : accept_) {
        if (key.first > key.second) continue;
        const std::string& x = questions_[key.first];
        const std::string& y = questions_[key.second];
        pairs.push_back({x, y});
        json list = json::array();
        for (auto [a, b] : acc) list.push_back({answers_[key.first][a], answers_[key.second][b]});
        accept[x + "|" + y] = list;
    }
    return json{{"table",
                 {{"name", name_}, {"questions", questions_}, {"answers", answers}, {"nontrivial_pairs", pairs},
                  {"accept", accept}}}};
}

GameBundle trivial_game(int bits) {
    if (bits < 1 || bits > 16) throw ValidationError("trivial game needs 1..16 question bits");
    std::vector<std::string> qs;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) qs.push_back(bit_string(v, bits));
    std::vector<std::vector<std::string>> as(qs.size(), std::vector<std::string>{"0"});
    auto game = std::make_shared<TableGame>("trivial", qs, as,
                                            std::map<std::pair<Question, Question>, std::set<std::pair<Answer, Answer>>>{});
    game->set_builtin_spec(json{{"kind", "trivial"}, {"n", bits}});
    auto frame = std::make_shared<const Frame>(identity_frame(1));
    std::vector<std::shared_ptr<const Frame>> frames(qs.size(), frame);
    return {game, std::make_shared<FrameStrategy>(1, std::move(frames))};
}

GameBundle consistency_game(bool losing) {
    std::vector<std::string> qs = {"00", "01", "10", "11"};
    std::vector<std::vector<std::string>> as(4, std::vector<std::string>{"0", "1"});
    std::set<std::pair<Answer, Answer>> equal = {{0, 0}, {1, 1}}, differ = {{0, 1}, {1, 0}};
    std::map<std::pair<Question, Question>, std::set<std::pair<Answer, Answer>>> acc;
    for (Question q = 0; q < 4; ++q) acc[{q, q}] = equal;
    acc[{0, 1}] = losing ? differ : equal;
    acc[{2, 3}] = differ;
    auto game = std::make_shared<TableGame>(losing ? "consistency_losing" : "consistency", qs, as, acc);
    game->set_builtin_spec(json{{"kind", "consistency"}, {"losing", losing}});

    double h = 1.0 / std::sqrt(2.0);
    Matrix hadamard(2, 2);
    hadamard << h, h, h, -h;
    auto z = std::make_shared<const Frame>(frame_from_columns(Matrix::Identity(2, 2), {0, 1}, 2));
    auto x = std::make_shared<const Frame>(frame_from_columns(hadamard, {0, 1}, 2));
    auto xf = std::make_shared<const Frame>(frame_from_columns(hadamard, {1, 0}, 2));
    return {game, std::make_shared<FrameStrategy>(2, std::vector<std::shared_ptr<const Frame>>{z, z, x, xf})};
}

GameBundle builtin_game(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
        throw ValidationError("builtin game needs a string 'kind'");
    std::string kind = spec["kind"];
    auto int_param = [&](const char* key, int fallback) {
        if (!spec.contains(key)) return fallback;
        if (!spec[key].is_number_integer()) throw ValidationError(std::string("builtin parameter '") + key + "' must be an integer");
        return spec[key].get<int>();
    };
    if (kind == "magic_square") return magic_square();
    if (kind == "two_of_n_ms") return two_of_n_ms(int_param("n", 2));
    if (kind == "question_sampling") return question_sampling(int_param("n", 2));
    if (kind == "trivial") return trivial_game(int_param("n", 2));
    if (kind == "consistency") {
        bool losing = spec.contains("losing") && spec["losing"].is_boolean() && spec["losing"].get<bool>();
        return consistency_game(losing);
    }
    throw ValidationError("unknown builtin game kind '" + kind + "'");
}

}  // namespace nlg
