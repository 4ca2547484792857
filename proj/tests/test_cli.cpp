#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run nlg(const std::string& args) {
    std::string cmd = std::string(NLG_BINARY) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(NLG_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp(const std::string& name) { return "/tmp/nlg_cli_test_" + name; }

}  // namespace

TEST_CASE("ncpo text of the one-bit trivial game") {
    auto r = nlg("ncpo --builtin trivial --n 1");
    CHECK(r.code == 0);
    CHECK(r.out == slurp(data("trivial1.ncpo")));
}

TEST_CASE("exit codes") {
    CHECK(nlg("game show --builtin magic_square").code == 0);
    CHECK(nlg("game show --builtin no_such_game").code == 1);
    std::ofstream(tmp("bad.json")) << "{\"bad\": 1}";
    CHECK(nlg("game show --game " + tmp("bad.json")).code == 1);
    std::ofstream(tmp("broken.json")) << "{\"table\": ";
    CHECK(nlg("game show --game " + tmp("broken.json")).code == 1);
    CHECK(nlg("seesaw --builtin magic_square").code == 2);
    CHECK(nlg("no_such_verb").code == 2);
    CHECK(nlg("cooklevin compile --machine-builtin accept --T -1 --R 1").code == 2);
    CHECK(nlg("cooklevin witness --machine-builtin parity --T 2 --witness 11").code == 1);
}

TEST_CASE("table game from a file") {
    auto shown = nlg("game show --game " + data("odd_cycle.json"));
    REQUIRE(shown.code == 0);
    std::ofstream(tmp("cycle.json")) << shown.out;
    CHECK(nlg("game show --game " + tmp("cycle.json")).out == shown.out);

    // Listed pairs count in both orders. At most two of the three edges can differ,
    // so 3 diagonal wins plus 2 edges both ways, out of 9 ordered pairs.
    auto c = json::parse(nlg("classical --game " + data("odd_cycle.json")).out);
    CHECK(c["value"].get<double>() == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("honest strategies round trip through eval") {
    for (std::string g : {"--builtin magic_square", "--builtin trivial --n 2", "--builtin consistency"}) {
        auto h = nlg("game honest " + g + " -o " + tmp("honest.json"));
        REQUIRE(h.code == 0);
        auto e = nlg("eval " + g + " --no-pairs --strategy " + tmp("honest.json"));
        REQUIRE(e.code == 0);
        CHECK(json::parse(e.out)["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("lifted strategy of an oracularized game") {
    auto t = nlg("transform --builtin consistency --transform oracularize --lift honest --lift-out " +
                 tmp("lift.json") + " -o " + tmp("oracle.json"));
    REQUIRE(t.code == 0);
    auto e = json::parse(nlg("eval --game " + tmp("oracle.json") + " --strategy " + tmp("lift.json") + " --no-pairs").out);
    CHECK(e["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e["questions"] == 20);
}

TEST_CASE("cooklevin witness satisfies the compiled formula") {
    auto dimacs = nlg("cooklevin compile --machine-builtin parity --T 2 --R 2");
    REQUIRE(dimacs.code == 0);
    auto w = nlg("cooklevin witness --machine-builtin parity --T 2 --witness 10");
    REQUIRE(w.code == 0);
    std::string bits = json::parse(w.out);
    std::istringstream in(dimacs.out);
    std::string p, cnf;
    long vars = 0, clauses = 0;
    in >> p >> cnf >> vars >> clauses;
    CHECK(p == "p");
    // witness 2 + 2 steps of (5 states + 12 cells + 9 moves) + final 5 + 12
    CHECK(vars == 71);
    CHECK(bits.size() == 71u);
    long seen = 0, sat = 0;
    long lit;
    bool ok = false;
    while (in >> lit) {
        if (lit == 0) {
            ++seen;
            sat += ok;
            ok = false;
            continue;
        }
        long v = lit > 0 ? lit : -lit;
        REQUIRE(v <= vars);
        ok = ok || ((bits[v - 1] == '1') == (lit > 0));
    }
    CHECK(seen == clauses);
    CHECK(sat == clauses);
    CHECK(nlg("cooklevin clause --machine-builtin accept --T 1 --R 1 --i 1 --j 1 --k 1").out == "null\n");
}

TEST_CASE("seesaw output is reproducible") {
    const std::string args = "seesaw --builtin magic_square --dim 2 --restarts 3 --max-iters 20 --seed 5";
    auto a = nlg(args), b = nlg(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(nlg(args + " -o " + tmp("seesaw.json")).code == 0);
    CHECK(slurp(tmp("seesaw.json")) == a.out);
    auto v = json::parse(a.out);
    CHECK(v["value"].get<double>() <= 1 - 1e-3);
    CHECK(nlg("seesaw --builtin magic_square --dim 2 --restarts 3 --max-iters 20 --seed 6").out != a.out);
}
