#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nlg/json_io.hpp"
#include "nlg/ncpo.hpp"
#include "nlg/optimize.hpp"
#include "nlg/rigidity.hpp"
#include "nlg/transform.hpp"

using namespace nlg;

namespace {

// Lifted strategies are written out question by question; past this they only make sense via eval.
constexpr Question kMaxSerializedQuestions = 200000;

struct GameSource {
    std::string path;
    std::string builtin;
    int n = -1;
    bool losing = false;

    void add(CLI::App* app) {
        auto* g = app->add_option("--game", path, "game JSON (builtin, table or transform descriptor)");
        auto* b = app->add_option("--builtin", builtin, "builtin game kind");
        g->excludes(b);
        app->add_option("--n", n, "size parameter of the builtin game");
        app->add_flag("--losing", losing, "losing variant of the consistency game");
    }

    json document() const {
        if (!path.empty()) return read_json_file(path);
        if (builtin.empty()) throw ValidationError("pass --game or --builtin");
        json spec{{"kind", builtin}};
        if (n >= 0) spec["n"] = n;
        if (losing) spec["losing"] = true;
        return json{{"builtin", spec}};
    }
};

struct Output {
    std::string path;
    void add(CLI::App* app) { app->add_option("-o,--out", path, "write here instead of stdout"); }
    void emit(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out) throw ValidationError("cannot write " + path);
        out << text;
    }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

cl::TuringMachine machine_from(const std::string& path, const std::string& builtin) {
    if (!path.empty()) return cl::machine_from_json(read_json_file(path));
    if (builtin == "accept") return cl::always_accept_machine();
    if (builtin == "reject") return cl::always_reject_machine();
    if (builtin == "equality") return cl::equality_machine();
    if (builtin == "parity") return cl::parity_machine();
    if (builtin.empty()) throw ValidationError("pass --machine or --machine-builtin");
    throw ValidationError("unknown builtin machine '" + builtin + "'");
}

json answers_to_json(const Game& g, const std::vector<Answer>& answers) {
    json out = json::object();
    for (Question q = 0; q < g.question_count(); ++q) out[g.question_label(q)] = g.answer_label(q, answers[q]);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synchronous nonlocal games workbench"};
    app.require_subcommand(1);
    std::function<void()> action;

    // game
    auto* game = app.add_subcommand("game", "build and print games");
    game->require_subcommand(1);
    GameSource show_src;
    Output show_out;
    auto* show = game->add_subcommand("show", "print game JSON");
    show_src.add(show);
    show_out.add(show);
    show->callback([&] {
        action = [&] { show_out.emit(dump_json(game_to_json(*load_game(show_src.document()).game)) + "\n"); };
    });
    GameSource honest_src;
    Output honest_out;
    bool honest_frames = false;
    auto* honest = game->add_subcommand("honest", "print the built-in honest strategy");
    honest_src.add(honest);
    honest_out.add(honest);
    honest->add_flag("--frames", honest_frames, "basis-and-labels form instead of measurement elements");
    honest->callback([&] {
        action = [&] {
            GameBundle b = load_lifted(honest_src.document());
            if (b.game->question_count() > kMaxSerializedQuestions)
                throw ValidationError("too many questions to write a strategy; evaluate the descriptor instead");
            honest_out.emit(dump_json(strategy_to_json(*b.game, *b.strategy, honest_frames)) + "\n");
        };
    });

    // eval
    auto* eval = app.add_subcommand("eval", "value of a strategy");
    GameSource eval_src;
    Output eval_out;
    std::string eval_strategy, eval_base;
    std::uint64_t eval_samples = 0, eval_seed = 0;
    bool eval_no_pairs = false;
    eval_src.add(eval);
    eval_out.add(eval);
    auto* es = eval->add_option("--strategy", eval_strategy, "strategy JSON for the game itself");
    auto* eb = eval->add_option("--base-strategy", eval_base, "strategy JSON for the innermost base game, lifted");
    es->excludes(eb);
    auto* samples_opt = eval->add_option("--sample", eval_samples, "Monte Carlo over this many nontrivial pairs");
    auto* eval_seed_opt = eval->add_option("--seed", eval_seed, "random seed");
    eval->add_flag("--no-pairs", eval_no_pairs, "omit per-pair probabilities");
    eval->callback([&] {
        action = [&] {
            json doc = eval_src.document();
            GameBundle b;
            if (!eval_strategy.empty()) {
                b = load_game(doc);
                b.strategy = strategy_from_json(*b.game, read_json_file(eval_strategy));
            } else {
                b = load_lifted(doc, eval_base.empty() ? json(nullptr) : read_json_file(eval_base));
            }
            if (samples_opt->count()) {
                if (!eval_seed_opt->count()) throw CLI::RequiredError("--seed");
                eval_out.emit(dump_json(sampled_to_json(sampled_value(*b.game, *b.strategy, eval_samples, eval_seed))) +
                              "\n");
            } else {
                eval_out.emit(dump_json(report_to_json(*b.game, evaluate(*b.game, *b.strategy), !eval_no_pairs)) + "\n");
            }
        };
    });

    // rigidity
    auto* rig = app.add_subcommand("rigidity", "residuals of the rigidity relations");
    std::string rig_kind, rig_strategy;
    int rig_n = 2;
    double rig_perturb = 0;
    std::uint64_t rig_seed = 0;
    Output rig_out;
    rig->add_option("--kind", rig_kind, "ms, two_of_n or qs")->required()->check(CLI::IsMember({"ms", "two_of_n", "qs"}));
    rig->add_option("--n", rig_n, "size of two_of_n or qs");
    rig->add_option("--strategy", rig_strategy, "strategy JSON (default: honest)");
    auto* rig_perturb_opt = rig->add_option("--perturb", rig_perturb, "perturb the strategy by this magnitude");
    auto* rig_seed_opt = rig->add_option("--seed", rig_seed, "seed for --perturb");
    rig_out.add(rig);
    rig->callback([&] {
        action = [&] {
            GameBundle b = rig_kind == "ms" ? magic_square() : rig_kind == "qs" ? question_sampling(rig_n) : two_of_n_ms(rig_n);
            StrategyPtr s = b.strategy;
            if (!rig_strategy.empty()) s = strategy_from_json(*b.game, read_json_file(rig_strategy));
            if (rig_perturb_opt->count()) {
                if (!rig_seed_opt->count()) throw CLI::RequiredError("--seed");
                s = perturb_strategy(*s, rig_perturb, rig_seed);
            }
            ResidualReport r;
            if (rig_kind == "ms")
                r = ms_residuals(*s);
            else if (rig_kind == "qs")
                r = qs_residuals(dynamic_cast<const QuestionSamplingGame&>(*b.game), *s);
            else
                r = two_of_n_residuals(dynamic_cast<const TwoOfNGame&>(*b.game), *s);
            rig_out.emit(dump_json(residual_report_to_json(r)) + "\n");
        };
    });

    // transform
    auto* tr = app.add_subcommand("transform", "oracularize, introspect, answer-reduce or compress a game");
    GameSource tr_src;
    Output tr_out;
    std::string tr_name, tr_lift, tr_lift_out;
    int tr_T = -1;
    bool tr_frames = false;
    tr_src.add(tr);
    tr_out.add(tr);
    tr->add_option("--transform", tr_name, "transform name")
        ->required()
        ->check(CLI::IsMember({"oracularize", "introspect", "answer_reduce", "gapless_compress"}));
    tr->add_option("--T", tr_T, "time bound for answer reduction");
    auto* lift_opt = tr->add_option("--lift", tr_lift, "base strategy JSON to lift, or 'honest'");
    tr->add_option("--lift-out", tr_lift_out, "where to write the lifted strategy")->needs(lift_opt);
    tr->add_flag("--frames", tr_frames, "write the lifted strategy as frames");
    tr->callback([&] {
        action = [&] {
            json params = json::object();
            if (tr_name == "answer_reduce" || tr_name == "gapless_compress") {
                if (tr_T < 0) throw CLI::RequiredError("--T");
                params["T"] = tr_T;
            }
            json desc{{"transform", tr_name}, {"params", params}, {"base", tr_src.document()}};
            if (!tr_lift.empty()) {
                if (tr_lift_out.empty()) throw CLI::RequiredError("--lift-out");
                GameBundle b = load_lifted(desc, tr_lift == "honest" ? json(nullptr) : read_json_file(tr_lift));
                if (b.game->question_count() > kMaxSerializedQuestions)
                    throw ValidationError("lifted game has " + std::to_string(b.game->question_count()) +
                                          " questions, too many to write; use eval --base-strategy on the descriptor");
                write_file(tr_lift_out, dump_json(strategy_to_json(*b.game, *b.strategy, tr_frames)) + "\n");
                tr_out.emit(dump_json(game_to_json(*b.game)) + "\n");
            } else {
                tr_out.emit(dump_json(game_to_json(*load_game(desc).game)) + "\n");
            }
        };
    });

    // cooklevin
    auto* cook = app.add_subcommand("cooklevin", "tableau formulas of Turing machines");
    cook->require_subcommand(1);
    std::string m_path, m_builtin, witness;
    int cT = -1, cR = -1;
    long long ci = 0, cj = 0, ck = 0;
    Output cook_out;
    auto add_machine = [&](CLI::App* sub) {
        auto* mp = sub->add_option("--machine", m_path, "machine JSON");
        auto* mb = sub->add_option("--machine-builtin", m_builtin, "accept, reject, equality or parity");
        mp->excludes(mb);
        sub->add_option("--T", cT, "time bound")->required()->check(CLI::NonNegativeNumber);
        cook_out.add(sub);
    };
    auto* compile_cmd = cook->add_subcommand("compile", "DIMACS formula");
    add_machine(compile_cmd);
    compile_cmd->add_option("--R", cR, "witness length")->required()->check(CLI::NonNegativeNumber);
    compile_cmd->callback([&] {
        action = [&] { cook_out.emit(cl::to_dimacs(cl::compile(machine_from(m_path, m_builtin), cT, cR))); };
    });
    auto* clause_cmd = cook->add_subcommand("clause", "clauses on exactly a triple of variables");
    add_machine(clause_cmd);
    clause_cmd->add_option("--R", cR, "witness length")->required()->check(CLI::NonNegativeNumber);
    clause_cmd->add_option("--i", ci)->required();
    clause_cmd->add_option("--j", cj)->required();
    clause_cmd->add_option("--k", ck)->required();
    clause_cmd->callback([&] {
        action = [&] {
            auto cs = cl::clause_access(machine_from(m_path, m_builtin), cT, cR, static_cast<cl::Var>(ci),
                                        static_cast<cl::Var>(cj), static_cast<cl::Var>(ck));
            std::string text;
            for (const auto& c : cs) text += cl::clause_text(c) + "\n";
            cook_out.emit(cs.empty() ? "null\n" : text);
        };
    });
    auto* witness_cmd = cook->add_subcommand("witness", "satisfying assignment from an accepted witness");
    add_machine(witness_cmd);
    witness_cmd->add_option("--witness", witness, "witness bits, e.g. 0110")->required();
    witness_cmd->callback([&] {
        action = [&] {
            auto a = cl::witness_to_assignment(machine_from(m_path, m_builtin), cT, cl::parse_bits(witness));
            cook_out.emit(dump_json(cl::assignment_to_json(a)) + "\n");
        };
    });

    // seesaw
    auto* ss = app.add_subcommand("seesaw", "see-saw lower bound");
    GameSource ss_src;
    Output ss_out;
    SeesawConfig cfg;
    std::string trace_path;
    bool ss_frames = false;
    ss_src.add(ss);
    ss_out.add(ss);
    ss->add_option("--dim", cfg.dim, "Hilbert space dimension")->check(CLI::PositiveNumber);
    ss->add_option("--restarts", cfg.restarts)->check(CLI::PositiveNumber);
    ss->add_option("--max-iters", cfg.max_iters)->check(CLI::PositiveNumber);
    ss->add_option("--tol", cfg.improvement_tol, "stop when a sweep gains less than this");
    ss->add_option("--seed", cfg.seed)->required();
    ss->add_option("--trace", trace_path, "CSV of per-sweep values");
    ss->add_flag("--frames", ss_frames, "write the strategy as frames");
    ss->callback([&] {
        action = [&] {
            GameBundle b = load_game(ss_src.document());
            auto r = seesaw(*b.game, cfg);
            if (!trace_path.empty()) {
                std::ostringstream csv;
                csv.precision(17);
                csv << "restart,iteration,value\n";
                for (const auto& t : r.trace) csv << t.restart << "," << t.iteration << "," << t.value << "\n";
                write_file(trace_path, csv.str());
            }
            json out{{"value", r.value},
                     {"best_restart", r.best_restart},
                     {"dim", cfg.dim},
                     {"strategy", strategy_to_json(*b.game, *r.strategy, ss_frames)}};
            ss_out.emit(dump_json(out) + "\n");
        };
    });

    // classical
    auto* cls = app.add_subcommand("classical", "best deterministic strategy");
    GameSource cls_src;
    Output cls_out;
    double cap = 1e8;
    cls_src.add(cls);
    cls_out.add(cls);
    cls->add_option("--cap", cap, "largest search space allowed after pruning");
    cls->callback([&] {
        action = [&] {
            GameBundle b = load_game(cls_src.document());
            auto r = classical_value(*b.game, cap);
            json out{{"value", r.value}, {"nodes", r.nodes}, {"answers", answers_to_json(*b.game, r.answers)}};
            cls_out.emit(dump_json(out) + "\n");
        };
    });

    // ncpo
    auto* nc = app.add_subcommand("ncpo", "noncommutative polynomial program text");
    GameSource nc_src;
    Output nc_out;
    nc_src.add(nc);
    nc_out.add(nc);
    nc->callback([&] { action = [&] { nc_out.emit(ncpo_to_text(game_to_ncpo(*load_game(nc_src.document()).game))); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (action) action();
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
