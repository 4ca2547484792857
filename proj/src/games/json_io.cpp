#include "nlg/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace nlg {

namespace {

std::string escape_token(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

std::string child(const std::string& pointer, const std::string& key) { return pointer + "/" + escape_token(key); }
std::string child(const std::string& pointer, std::size_t i) { return pointer + "/" + std::to_string(i); }

[[noreturn]] void fail(const std::string& pointer, const std::string& why) {
    throw ValidationError("at " + (pointer.empty() ? std::string("/") : pointer) + ": " + why);
}

const json& need(const json& j, const std::string& key, const std::string& pointer) {
    if (!j.is_object() || !j.contains(key)) fail(pointer, "missing key '" + key + "'");
    return j[key];
}

void write(std::ostringstream& out, const json& j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent < 0) return;
        out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << ',';
                first = false;
                newline(depth + 1);
                out << json(it.key()).dump() << (indent < 0 ? ":" : ": ");
                write(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out << '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto& e : j)
                if (e.is_structured()) flat = false;
            out << '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out << (flat && indent >= 0 ? ", " : ",");
                first = false;
                if (!flat) newline(depth + 1);
                write(out, e, indent, depth + 1);
            }
            if (!flat) newline(depth);
            out << ']';
            return;
        }
        case json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) throw ValidationError("cannot serialize a non-finite number");
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf;
            return;
        }
        default:
            out << j.dump();
    }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
    std::ostringstream out;
    write(out, j, indent, 0);
    if (indent >= 0) out << '\n';
    return out.str();
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str());
}

json matrix_to_json(const Matrix& m) {
    json re = json::array(), im = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json r = json::array(), c = json::array();
        for (Index k = 0; k < m.cols(); ++k) {
            r.push_back(m(i, k).real());
            c.push_back(m(i, k).imag());
        }
        re.push_back(r);
        im.push_back(c);
    }
    return json{{"dim", m.rows()}, {"re", re}, {"im", im}};
}

Matrix matrix_from_json(const json& j, const std::string& pointer) {
    if (!j.is_object()) fail(pointer, "matrix must be an object");
    const json& dj = need(j, "dim", pointer);
    if (!dj.is_number_integer() || dj.get<long long>() < 1) fail(child(pointer, "dim"), "dim must be a positive integer");
    Index d = dj.get<Index>();
    Matrix m = Matrix::Zero(d, d);
    for (const char* part : {"re", "im"}) {
        bool real = part[0] == 'r';
        if (!j.contains(part)) {
            if (real) fail(pointer, "missing key 're'");
            continue;
        }
        const json& rows = j[part];
        std::string pp = child(pointer, part);
        if (!rows.is_array() || static_cast<Index>(rows.size()) != d) fail(pp, "expected " + std::to_string(d) + " rows");
        for (Index i = 0; i < d; ++i) {
            const json& row = rows[static_cast<std::size_t>(i)];
            std::string rp = child(pp, static_cast<std::size_t>(i));
            if (!row.is_array() || static_cast<Index>(row.size()) != d) fail(rp, "expected " + std::to_string(d) + " entries");
            for (Index k = 0; k < d; ++k) {
                const json& v = row[static_cast<std::size_t>(k)];
                if (!v.is_number()) fail(child(rp, static_cast<std::size_t>(k)), "entry must be a number");
                double x = v.get<double>();
                if (!std::isfinite(x)) fail(child(rp, static_cast<std::size_t>(k)), "entry must be finite");
                if (real)
                    m(i, k).real(x);
                else
                    m(i, k).imag(x);
            }
        }
    }
    return m;
}

json measurement_to_json(const Measurement& m) {
    json el = json::array();
    for (const auto& e : m.elements) el.push_back(matrix_to_json(e));
    return json{{"labels", m.labels}, {"kind", kind_name(m.kind)}, {"elements", el}};
}

Measurement measurement_from_json(const json& j, const std::string& pointer, Tolerance tol) {
    const json& labels = need(j, "labels", pointer);
    if (!labels.is_array()) fail(child(pointer, "labels"), "labels must be an array");
    std::vector<std::string> ls;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i].is_string()) fail(child(child(pointer, "labels"), i), "label must be a string");
        ls.push_back(labels[i]);
    }
    MeasurementKind kind = MeasurementKind::general;
    if (j.contains("kind")) {
        if (!j["kind"].is_string()) fail(child(pointer, "kind"), "kind must be a string");
        try {
            kind = kind_from_name(j["kind"]);
        } catch (const ValidationError& e) {
            fail(child(pointer, "kind"), e.what());
        }
    }
    const json& els = need(j, "elements", pointer);
    if (!els.is_array()) fail(child(pointer, "elements"), "elements must be an array");
    std::vector<Matrix> ms;
    for (std::size_t i = 0; i < els.size(); ++i) ms.push_back(matrix_from_json(els[i], child(child(pointer, "elements"), i)));
    try {
        return make_measurement(ls, ms, kind, tol);
    } catch (const ValidationError& e) {
        fail(pointer, e.what());
    }
}

namespace {

void check_label(const std::string& s, const std::string& pointer) {
    if (s.empty()) fail(pointer, "labels must be non-empty");
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '|') fail(pointer, "labels may not contain whitespace or '|'");
}

GameBundle table_from_json(const json& t, const std::string& pointer) {
    if (!t.is_object()) fail(pointer, "table must be an object");
    std::string name = "table";
    if (t.contains("name")) {
        if (!t["name"].is_string()) fail(child(pointer, "name"), "name must be a string");
        name = t["name"];
        check_label(name, child(pointer, "name"));
    }
    const json& qs = need(t, "questions", pointer);
    std::string qp = child(pointer, "questions");
    if (!qs.is_array() || qs.empty()) fail(qp, "questions must be a non-empty array");
    std::vector<std::string> questions;
    std::map<std::string, Question> qindex;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (!qs[i].is_string()) fail(child(qp, i), "question label must be a string");
        std::string s = qs[i];
        check_label(s, child(qp, i));
        if (qindex.count(s)) fail(child(qp, i), "duplicate question label");
        qindex[s] = questions.size();
        questions.push_back(s);
    }
    const json& as = need(t, "answers", pointer);
    std::string ap = child(pointer, "answers");
    if (!as.is_object()) fail(ap, "answers must map question labels to label lists");
    std::vector<std::vector<std::string>> answers(questions.size());
    std::vector<std::map<std::string, Answer>> aindex(questions.size());
    for (std::size_t q = 0; q < questions.size(); ++q) {
        if (!as.contains(questions[q])) fail(ap, "no answers for question '" + questions[q] + "'");
        const json& list = as[questions[q]];
        std::string lp = child(ap, questions[q]);
        if (!list.is_array() || list.empty()) fail(lp, "answer list must be a non-empty array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!list[i].is_string()) fail(child(lp, i), "answer label must be a string");
            std::string s = list[i];
            check_label(s, child(lp, i));
            if (aindex[q].count(s)) fail(child(lp, i), "duplicate answer label");
            aindex[q][s] = static_cast<Answer>(answers[q].size());
            answers[q].push_back(s);
        }
    }
    for (auto it = as.begin(); it != as.end(); ++it)
        if (!qindex.count(it.key())) fail(child(ap, it.key()), "unknown question");

    std::map<std::pair<Question, Question>, std::set<std::pair<Answer, Answer>>> accept;
    const json& pairs = need(t, "nontrivial_pairs", pointer);
    std::string pp = child(pointer, "nontrivial_pairs");
    if (!pairs.is_array()) fail(pp, "nontrivial_pairs must be an array");
    const json empty = json::object();
    const json& acc = t.contains("accept") ? t["accept"] : empty;
    std::string accp = child(pointer, "accept");
    if (!acc.is_object()) fail(accp, "accept must be an object");
    std::set<std::string> used;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const json& pr = pairs[i];
        std::string ip = child(pp, i);
        if (!pr.is_array() || pr.size() != 2 || !pr[0].is_string() || !pr[1].is_string())
            fail(ip, "pair must be two question labels");
        std::string xs = pr[0], ys = pr[1];
        if (!qindex.count(xs) || !qindex.count(ys)) fail(ip, "pair names an unknown question");
        Question x = qindex[xs], y = qindex[ys];
        std::string key = xs + "|" + ys;
        std::set<std::pair<Answer, Answer>> ok;
        if (acc.contains(key)) {
            used.insert(key);
            const json& list = acc[key];
            std::string lp = child(accp, key);
            if (!list.is_array()) fail(lp, "accept entry must be an array of answer pairs");
            for (std::size_t k = 0; k < list.size(); ++k) {
                const json& ab = list[k];
                if (!ab.is_array() || ab.size() != 2 || !ab[0].is_string() || !ab[1].is_string())
                    fail(child(lp, k), "expected [answer, answer]");
                std::string a = ab[0], b = ab[1];
                if (!aindex[x].count(a) || !aindex[y].count(b)) fail(child(lp, k), "unknown answer label");
                ok.insert({aindex[x][a], aindex[y][b]});
            }
        } else if (x == y) {
            for (Answer a = 0; a < answers[x].size(); ++a) ok.insert({a, a});
        } else {
            fail(ip, "nontrivial pair has no accept entry '" + key + "'");
        }
        if (accept.count({x, y})) fail(ip, "pair listed twice");
        accept[{x, y}] = ok;
    }
    for (auto it = acc.begin(); it != acc.end(); ++it)
        if (!used.count(it.key())) fail(child(accp, it.key()), "accept entry for a pair not listed as nontrivial");
    try {
        return {std::make_shared<TableGame>(name, questions, answers, accept), nullptr};
    } catch (const ValidationError& e) {
        fail(pointer, e.what());
    }
}

}  // namespace

GameBundle game_from_json(const json& j) {
    if (!j.is_object()) fail("", "game must be a JSON object");
    if (j.contains("builtin")) {
        try {
            return builtin_game(j["builtin"]);
        } catch (const ValidationError& e) {
            fail("/builtin", e.what());
        }
    }
    if (j.contains("table")) return table_from_json(j["table"], "/table");
    fail("", "expected a 'builtin' or 'table' game");
}

json game_to_json(const Game& g) { return g.descriptor(); }

json strategy_to_json(const Game& g, const Strategy& s, bool frames) {
    json out = json::object();
    out["dim"] = s.dim();
    json per = json::object();
    for (Question q = 0; q < g.question_count(); ++q) {
        auto f = s.frame(q);
        if (frames) {
            json labels = json::array();
            for (std::size_t b = 0; b < f->blocks(); ++b)
                for (Index c = 0; c < f->rank(b); ++c) labels.push_back(g.answer_label(q, f->outcome[b]));
            per[g.question_label(q)] = json{{"basis", matrix_to_json(f->basis)}, {"labels", labels}};
        } else {
            json el = json::array();
            for (Answer a = 0; a < g.answer_count(q); ++a) el.push_back(matrix_to_json(f->element(a)));
            per[g.question_label(q)] = el;
        }
    }
    out[frames ? "frames" : "measurements"] = per;
    return out;
}

std::shared_ptr<FrameStrategy> strategy_from_json(const Game& g, const json& j, Tolerance tol) {
    if (!j.is_object()) fail("", "strategy must be a JSON object");
    const json& dj = need(j, "dim", "");
    if (!dj.is_number_integer() || dj.get<long long>() < 1) fail("/dim", "dim must be a positive integer");
    Index d = dj.get<Index>();
    bool frames = j.contains("frames");
    std::string root = frames ? "/frames" : "/measurements";
    const json& per = need(j, frames ? "frames" : "measurements", "");
    if (!per.is_object()) fail(root, "expected an object keyed by question label");
    Question n = g.question_count();
    if (n > 200000) fail(root, "game too large for an explicit strategy");
    std::vector<std::shared_ptr<const Frame>> out(n);
    for (Question q = 0; q < n; ++q) {
        std::string label = g.question_label(q);
        std::string qp = child(root, label);
        if (!per.contains(label)) fail(root, "no measurement for question '" + label + "'");
        const json& entry = per[label];
        Answer na = g.answer_count(q);
        try {
            if (frames) {
                Matrix basis = matrix_from_json(need(entry, "basis", qp), child(qp, "basis"));
                if (basis.rows() != d) fail(child(qp, "basis"), "dimension differs from 'dim'");
                if (!is_unitary(basis, tol)) fail(child(qp, "basis"), "basis is not unitary within tolerance");
                const json& labels = need(entry, "labels", qp);
                if (!labels.is_array() || static_cast<Index>(labels.size()) != d)
                    fail(child(qp, "labels"), "need one answer label per column");
                std::vector<Answer> cols;
                for (std::size_t c = 0; c < labels.size(); ++c) {
                    if (!labels[c].is_string()) fail(child(child(qp, "labels"), c), "label must be a string");
                    auto a = g.find_answer(q, labels[c]);
                    if (!a) fail(child(child(qp, "labels"), c), "unknown answer label");
                    cols.push_back(*a);
                }
                out[q] = std::make_shared<const Frame>(frame_from_columns(basis, cols, na));
            } else {
                if (!entry.is_array() || entry.size() != na)
                    fail(qp, "expected " + std::to_string(na) + " elements in answer order");
                std::vector<Matrix> els;
                for (std::size_t a = 0; a < entry.size(); ++a) {
                    els.push_back(matrix_from_json(entry[a], child(qp, a)));
                    if (els.back().rows() != d) fail(child(qp, a), "dimension differs from 'dim'");
                }
                Measurement m{g.answer_labels(q), els, MeasurementKind::projective};
                if (!is_projective(m, tol)) fail(qp, "measurement is not projective within tolerance");
                out[q] = std::make_shared<const Frame>(frame_from_measurement(m, tol));
            }
        } catch (const ValidationError& e) {
            std::string what = e.what();
            if (what.rfind("at /", 0) == 0) throw;
            fail(qp, what);
        }
    }
    for (auto it = per.begin(); it != per.end(); ++it)
        if (!g.find_question(it.key())) fail(child(root, it.key()), "unknown question");
    return std::make_shared<FrameStrategy>(d, std::move(out));
}

json report_to_json(const Game& g, const EvaluationReport& r, bool with_pairs) {
    json out{{"value", r.value}, {"trivial_mass", r.trivial_mass}, {"questions", r.question_count},
             {"nontrivial_pairs", r.per_pair.size()}};
    if (with_pairs) {
        json pairs = json::array();
        for (const auto& p : r.per_pair)
            pairs.push_back(json{{"x", g.question_label(p.x)}, {"y", g.question_label(p.y)}, {"p", p.probability}});
        out["per_pair"] = pairs;
    }
    return out;
}

json sampled_to_json(const SampledReport& r) {
    return json{{"estimate", r.estimate},
                {"stderr", r.std_error},
                {"deficit", r.deficit},
                {"samples", r.samples},
                {"nontrivial_fraction", r.nontrivial_fraction}};
}

}  // namespace nlg
