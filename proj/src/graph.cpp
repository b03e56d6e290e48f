#include "dimspec/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "dimspec/errors.hpp"

namespace dimspec {

namespace {

std::vector<std::vector<int>> successor_lists(const MarkovShift& m) {
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(m.alphabet));
    for (auto [a, b] : m.edges) succ[static_cast<std::size_t>(a)].push_back(b);
    return succ;
}

// Iterative Tarjan.
std::vector<std::vector<int>> tarjan_sccs(const std::vector<std::vector<int>>& succ) {
    const int n = static_cast<int>(succ.size());
    std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& children = succ[static_cast<std::size_t>(f.v)];
            if (f.child < children.size()) {
                const int w = children[f.child++];
                if (index[static_cast<std::size_t>(w)] == -1) {
                    index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(f.v)] =
                        std::min(low[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(w)]);
                }
            } else {
                if (low[static_cast<std::size_t>(f.v)] == index[static_cast<std::size_t>(f.v)]) {
                    std::vector<int> comp;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = false;
                        comp.push_back(w);
                    } while (w != f.v);
                    std::sort(comp.begin(), comp.end());
                    sccs.push_back(std::move(comp));
                }
                const int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[static_cast<std::size_t>(frames.back().v)] =
                        std::min(low[static_cast<std::size_t>(frames.back().v)], low[static_cast<std::size_t>(v)]);
            }
        }
    }
    return sccs;
}

const MarkovShift& require_markov(const ShiftSpec& spec, const char* who) {
    if (!spec.is_markov()) throw InputError(std::string(who) + " requires a markov shift");
    return spec.as_markov();
}

}  // namespace

bool is_irreducible_restriction(const MarkovShift& m, const std::vector<int>& letters) {
    if (letters.empty()) return false;
    std::set<int> inside(letters.begin(), letters.end());
    auto succ = successor_lists(m);
    for (int start : letters) {
        std::set<int> seen;
        std::deque<int> queue{start};
        // reachability via paths staying inside the set, length >= 1
        std::set<int> reached;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int w : succ[static_cast<std::size_t>(v)]) {
                if (!inside.count(w)) continue;
                if (reached.insert(w).second) queue.push_back(w);
            }
        }
        for (int target : letters)
            if (!reached.count(target)) return false;
    }
    return true;
}

SccDecomposition scc_decomposition(const ShiftSpec& markov_spec) {
    const MarkovShift& m = require_markov(markov_spec, "scc_decomposition");
    auto succ = successor_lists(m);
    auto sccs = tarjan_sccs(succ);

    SccDecomposition out;
    for (auto& comp : sccs) {
        // Keep only components whose letters lie on a cycle: any SCC of size
        // >= 2, or a singleton with a self-loop. Restricting a strongly
        // connected component to itself is automatically irreducible (paths
        // between members never leave the component), and components are
        // inclusion-maximal by construction.
        if (comp.size() == 1 && !m.allows(comp[0], comp[0])) continue;
        out.maximal_flags.push_back(true);
        out.components.push_back(std::move(comp));
    }
    // Deterministic order: by smallest letter.
    std::vector<std::size_t> order(out.components.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.components[a].front() < out.components[b].front();
    });
    SccDecomposition sorted;
    for (std::size_t i : order) {
        sorted.components.push_back(std::move(out.components[i]));
        sorted.maximal_flags.push_back(out.maximal_flags[i]);
    }
    return sorted;
}

const Word& ConnectorTable::at(int i, int j) const {
    auto it = words.find({i, j});
    if (it == words.end()) throw InputError("no connector stored for pair (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")");
    return it->second;
}

ConnectorTable connecting_words(const ShiftSpec& markov_spec, const std::vector<int>& component) {
    const MarkovShift& m = require_markov(markov_spec, "connecting_words");
    if (!is_irreducible_restriction(m, component))
        throw PreconditionError("connecting_words requires an irreducible component");

    std::set<int> inside(component.begin(), component.end());
    auto succ = successor_lists(m);

    ConnectorTable table;
    for (int i : component) {
        // BFS over paths i -> ... -> j inside the component; the connector is
        // the interior of the shortest such path (possibly empty).
        std::map<int, Word> best;  // target -> interior word
        std::deque<std::pair<int, Word>> queue;
        queue.emplace_back(i, Word{});
        std::set<int> visited;  // by current endpoint
        while (!queue.empty()) {
            auto [v, interior] = queue.front();
            queue.pop_front();
            for (int w : succ[static_cast<std::size_t>(v)]) {
                if (!inside.count(w)) continue;
                if (!best.count(w)) best[w] = interior;
                if (!visited.count(w)) {
                    visited.insert(w);
                    Word next = interior;
                    next.letters.push_back(w);
                    queue.emplace_back(w, std::move(next));
                }
            }
        }
        for (int j : component) {
            auto it = best.find(j);
            if (it == best.end())
                throw InternalError("irreducible component missing a connector");  // unreachable
            table.max_length = std::max(table.max_length, static_cast<int>(it->second.size()));
            table.words[{i, j}] = it->second;
        }
    }
    return table;
}

}  // namespace dimspec
