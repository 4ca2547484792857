#include "nlg/ncpo.hpp"

#include <cstdio>
#include <sstream>

namespace nlg {

namespace {

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
    throw ValidationError("ncpo line " + std::to_string(line) + ": " + why);
}

}  // namespace

NcpoProgram game_to_ncpo(const Game& g, double term_cap) {
    Question n = g.question_count();
    double answers = 0;
    for (Question q = 0; q < n; ++q) answers += g.answer_count(q);
    if (answers * answers > term_cap) throw ValidationError("game too large for an explicit ncPO program");

    NcpoProgram p;
    p.name = g.name();
    std::vector<std::size_t> offset(n + 1, 0);
    for (Question q = 0; q < n; ++q) offset[q + 1] = offset[q] + g.answer_count(q);
    std::size_t half = offset[n];
    for (char player : {'A', 'B'})
        for (Question q = 0; q < n; ++q)
            for (Answer a = 0; a < g.answer_count(q); ++a)
                p.variables.push_back({player, g.question_label(q), g.answer_label(q, a)});

    double mu = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (Question x = 0; x < n; ++x)
        for (Question y = 0; y < n; ++y)
            for (Answer a = 0; a < g.answer_count(x); ++a)
                for (Answer b = 0; b < g.answer_count(y); ++b)
                    if (g.decide(x, y, a, b)) p.objective.push_back({mu, offset[x] + a, half + offset[y] + b});

    for (std::size_t v = 0; v < p.variables.size(); ++v) p.selfadjoint.push_back(v);
    for (std::size_t v = 0; v < p.variables.size(); ++v) p.positive.push_back(v);
    for (int side = 0; side < 2; ++side)
        for (Question q = 0; q < n; ++q) {
            NcpoProgram::Completeness c{side == 0 ? 'A' : 'B', g.question_label(q), {}};
            for (std::size_t v = offset[q]; v < offset[q + 1]; ++v) c.members.push_back(side * half + v);
            p.complete.push_back(std::move(c));
        }
    for (std::size_t i = 0; i < half; ++i)
        for (std::size_t j = 0; j < half; ++j) p.commute.emplace_back(i, half + j);
    return p;
}

std::string ncpo_to_text(const NcpoProgram& p) {
    std::ostringstream out;
    out << "ncpo " << p.name << "\n";
    out << "variables " << p.variables.size() << "\n";
    for (std::size_t v = 0; v < p.variables.size(); ++v)
        out << "var " << v << " " << p.variables[v].player << " " << p.variables[v].question << " "
            << p.variables[v].answer << "\n";
    out << "maximize " << p.objective.size() << "\n";
    for (const auto& t : p.objective) out << "term " << number(t.coef) << " " << t.left << " " << t.right << "\n";
    for (auto v : p.selfadjoint) out << "selfadjoint " << v << "\n";
    for (auto v : p.positive) out << "positive " << v << "\n";
    for (const auto& c : p.complete) {
        out << "complete " << c.player << " " << c.question;
        for (auto v : c.members) out << " " << v;
        out << "\n";
    }
    for (auto [a, b] : p.commute) out << "commute " << a << " " << b << "\n";
    out << "end\n";
    return out.str();
}

NcpoProgram parse_ncpo(const std::string& text) {
    NcpoProgram p;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0, declared = 0, terms = 0;
    bool ended = false;
    auto index = [&](std::istringstream& ls) {
        long long v = -1;
        if (!(ls >> v) || v < 0 || static_cast<std::size_t>(v) >= p.variables.size())
            bad_line(lineno, "bad variable index");
        return static_cast<std::size_t>(v);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (ended) bad_line(lineno, "content after end");
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (lineno == 1) {
            if (kw != "ncpo" || !(ls >> p.name)) bad_line(lineno, "expected 'ncpo <name>'");
        } else if (kw == "variables") {
            if (!(ls >> declared)) bad_line(lineno, "expected a count");
        } else if (kw == "var") {
            std::size_t id = 0;
            NcpoProgram::Variable v;
            std::string player;
            if (!(ls >> id >> player >> v.question >> v.answer) || id != p.variables.size() ||
                (player != "A" && player != "B"))
                bad_line(lineno, "malformed variable");
            v.player = player[0];
            p.variables.push_back(v);
        } else if (kw == "maximize") {
            if (p.variables.size() != declared) bad_line(lineno, "variable count mismatch");
            if (!(ls >> terms)) bad_line(lineno, "expected a term count");
        } else if (kw == "term") {
            NcpoProgram::Term t;
            if (!(ls >> t.coef)) bad_line(lineno, "bad coefficient");
            t.left = index(ls);
            t.right = index(ls);
            p.objective.push_back(t);
        } else if (kw == "selfadjoint") {
            p.selfadjoint.push_back(index(ls));
        } else if (kw == "positive") {
            p.positive.push_back(index(ls));
        } else if (kw == "complete") {
            NcpoProgram::Completeness c;
            std::string player;
            if (!(ls >> player >> c.question) || (player != "A" && player != "B")) bad_line(lineno, "malformed complete");
            c.player = player[0];
            while (!(ls >> std::ws).eof()) c.members.push_back(index(ls));
            p.complete.push_back(std::move(c));
        } else if (kw == "commute") {
            std::size_t a = index(ls);
            std::size_t b = index(ls);
            p.commute.emplace_back(a, b);
        } else if (kw == "end") {
            ended = true;
        } else {
            bad_line(lineno, "unknown keyword '" + kw + "'");
        }
    }
    if (!ended) throw ValidationError("ncpo program is missing 'end'");
    if (p.objective.size() != terms) throw ValidationError("ncpo term count mismatch");
    return p;
}

}  // namespace nlg
