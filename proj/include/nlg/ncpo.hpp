#pragma once

#include <string>
#include <vector>

#include "nlg/game.hpp"

namespace nlg {

// Noncommutative polynomial program for the quantum value of a game. The
// plain-text grammar is documented in README.md.
struct NcpoProgram {
    struct Variable {
        char player = 'A';
        std::string question;
        std::string answer;
    };
    struct Term {
        double coef = 0;
        std::size_t left = 0;
        std::size_t right = 0;
    };
    struct Completeness {
        char player = 'A';
        std::string question;
        std::vector<std::size_t> members;
    };

    std::string name;
    std::vector<Variable> variables;
    std::vector<Term> objective;
    std::vector<std::size_t> selfadjoint;
    std::vector<std::size_t> positive;
    std::vector<Completeness> complete;
    std::vector<std::pair<std::size_t, std::size_t>> commute;
};

NcpoProgram game_to_ncpo(const Game& g, double term_cap = 2e7);
std::string ncpo_to_text(const NcpoProgram& p);
NcpoProgram parse_ncpo(const std::string& text);

}  // namespace nlg
