#pragma once

#include <string>

#include "nlg/builtin_games.hpp"
#include "nlg/game.hpp"

namespace nlg {

// Serializes with 17 significant digits for every floating-point number.
std::string dump_json(const json& j, int indent = 2);
json parse_json_text(const std::string& text);
json read_json_file(const std::string& path);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& pointer);
json measurement_to_json(const Measurement& m);
Measurement measurement_from_json(const json& j, const std::string& pointer, Tolerance tol = {});

// {"builtin": {...}} or {"table": {...}}. The strategy is set for builtins.
GameBundle game_from_json(const json& j);
json game_to_json(const Game& g);

// "measurements" lists elements per question in answer order; "frames" stores an
// orthonormal basis plus one answer label per column.
json strategy_to_json(const Game& g, const Strategy& s, bool frames = false);
std::shared_ptr<FrameStrategy> strategy_from_json(const Game& g, const json& j, Tolerance tol = {});

json report_to_json(const Game& g, const EvaluationReport& r, bool with_pairs = true);
json sampled_to_json(const SampledReport& r);

}  // namespace nlg
