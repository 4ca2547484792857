#include "nlg/json_io.hpp"
#include "nlg/transform.hpp"

namespace nlg {

namespace {

struct Step {
    std::string name;
    json params;
};

Step read_step(const json& j) {
    if (!j["transform"].is_string()) throw ValidationError("at /transform: expected a string");
    if (!j.contains("base")) throw ValidationError("at /base: missing base game");
    Step s{j["transform"], j.value("params", json::object())};
    if (!s.params.is_object()) throw ValidationError("at /params: expected an object");
    if (s.name != "oracularize" && s.name != "introspect" && s.name != "answer_reduce" &&
        s.name != "gapless_compress")
        throw ValidationError("at /transform: unknown transform '" + s.name + "'");
    return s;
}

int time_bound(const json& params) {
    if (!params.contains("T") || !params["T"].is_number_integer())
        throw ValidationError("at /params/T: expected an integer time bound");
    return params["T"].get<int>();
}

GamePtr apply_step(const Step& s, GamePtr base) {
    if (s.name == "oracularize") return oracularize(base);
    if (s.name == "introspect") return introspect(base);
    if (s.name == "answer_reduce") return answer_reduce(base, time_bound(s.params));
    return gapless_compress(base, time_bound(s.params));
}

StrategyPtr lift_step(const Step& s, const Game& g, StrategyPtr base) {
    if (s.name == "oracularize") return lift_oracularize(dynamic_cast<const OracleGame&>(g), base);
    if (s.name == "introspect") return lift_introspection(dynamic_cast<const IntrospectGame&>(g), base);
    if (s.name == "answer_reduce") return lift_answer_reduce(dynamic_cast<const AnswerReducedGame&>(g), base);
    return lift_gapless_compress(dynamic_cast<const AnswerReducedGame&>(g), base);
}

}  // namespace

json transform_descriptor(const std::string& name, const json& params, const Game& base) {
    return json{{"transform", name}, {"params", params}, {"base", game_to_json(base)}};
}

GameBundle load_game(const json& j) {
    if (!j.is_object() || !j.contains("transform")) return game_from_json(j);
    Step s = read_step(j);
    return {apply_step(s, load_game(j["base"]).game), nullptr};
}

GameBundle load_lifted(const json& j, const json& base_strategy) {
    if (!j.is_object() || !j.contains("transform")) {
        GameBundle b = game_from_json(j);
        if (!base_strategy.is_null()) b.strategy = strategy_from_json(*b.game, base_strategy);
        if (!b.strategy) throw ValidationError("the base game has no built-in strategy; pass one");
        return b;
    }
    Step s = read_step(j);
    GameBundle inner = load_lifted(j["base"], base_strategy);
    GamePtr g = apply_step(s, inner.game);
    return {g, lift_step(s, *g, inner.strategy)};
}

}  // namespace nlg
