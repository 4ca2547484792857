#include <map>

#include "nlg/cooklevin.hpp"

namespace nlg::cl {

namespace {

// Bound on the distinct non-constant residual functions reachable after k of n bits.
std::int64_t level_cap(int n, int k) {
    if (k == 0) return 1;
    std::int64_t reach = std::int64_t{1} << k;
    int rest = n - k;
    if (rest >= 6) return reach;
    std::int64_t functions = (std::int64_t{1} << (1 << rest)) - 2;
    return std::min(reach, functions);
}

}  // namespace

int truth_table_state_count(int P) {
    if (P < 1 || P > 10) throw ValidationError("answer bit length must be in 1..10");
    const int n = 2 * P;
    std::int64_t q = 2;
    for (int k = 0; k < n; ++k) q += level_cap(n, k);
    return static_cast<int>(q);
}

TuringMachine truth_table_machine(int P, const std::function<bool(std::uint32_t, std::uint32_t)>& accept) {
    const int Q = truth_table_state_count(P);
    const int n = 2 * P;
    const std::uint32_t mask = (1u << P) - 1;
    std::string table(std::size_t{1} << n, '0');
    for (std::uint32_t i = 0; i < table.size(); ++i)
        if (accept(i >> P, i & mask)) table[i] = '1';

    TuringMachine m;
    m.accept = Q - 2;
    m.reject = Q - 1;
    m.start = 0;
    m.states.reserve(Q);
    m.delta.assign(static_cast<std::size_t>(Q) * 3, Transition{});

    // Nodes of the current level, keyed by residual truth table.
    std::vector<std::string> level{table};
    int next_id = 0;
    std::vector<int> ids{next_id++};
    m.states.push_back("n0_0");
    for (int k = 0; k < n; ++k) {
        std::map<std::string, int> seen;
        std::vector<std::string> next_level;
        std::vector<int> next_ids;
        for (std::size_t i = 0; i < level.size(); ++i) {
            const std::string& f = level[i];
            std::size_t half = f.size() / 2;
            for (int s = 0; s < 2; ++s) {
                std::string r = f.substr(s * half, half);
                int target;
                if (r.find('0') == std::string::npos)
                    target = m.accept;
                else if (r.find('1') == std::string::npos)
                    target = m.reject;
                else {
                    auto [it, fresh] = seen.emplace(r, next_id);
                    if (fresh) {
                        m.states.push_back("n" + std::to_string(k + 1) + "_" + std::to_string(next_level.size()));
                        next_level.push_back(r);
                        next_ids.push_back(next_id++);
                    }
                    target = it->second;
                }
                m.delta[static_cast<std::size_t>(ids[i]) * 3 + s] = {target, static_cast<Symbol>(s), right};
            }
            m.delta[static_cast<std::size_t>(ids[i]) * 3 + blank] = {m.reject, blank, stay};
        }
        level = std::move(next_level);
        ids = std::move(next_ids);
    }
    if (next_id > Q - 2) throw ValidationError("truth table machine exceeded its state bound");
    for (int i = 0; next_id < Q - 2; ++i, ++next_id) m.states.push_back("pad" + std::to_string(i));
    m.states.push_back("accept");
    m.states.push_back("reject");
    // Padding states and the halting states loop in place; padding is never entered.
    for (std::size_t q = 0; q < static_cast<std::size_t>(Q); ++q) {
        bool is_node = m.states[q][0] == 'n';
        if (is_node) continue;
        int to = static_cast<int>(q) == m.accept ? m.accept : m.reject;
        for (int s = 0; s < 3; ++s) m.delta[q * 3 + s] = {to, static_cast<Symbol>(s), stay};
    }
    return m;
}

}  // namespace nlg::cl
