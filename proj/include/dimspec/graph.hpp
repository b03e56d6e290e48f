#pragma once

#include <map>
#include <utility>
#include <vector>

#include "dimspec/shift.hpp"
#include "dimspec/word.hpp"

namespace dimspec {

// Strongly connected structure of a Markov shift's adjacency digraph,
// restricted to letters that lie on at least one cycle. Components are sorted
// internally and listed by smallest member.
struct SccDecomposition {
    std::vector<std::vector<int>> components;
    std::vector<bool> maximal_flags;  // restriction irreducible and inclusion-maximal
};

SccDecomposition scc_decomposition(const ShiftSpec& markov_spec);

// Shortest interior words w_{i,j} with i w_{i,j} j legal, for every ordered
// pair in an irreducible component; empty when (i,j) is itself an edge.
struct ConnectorTable {
    std::map<std::pair<int, int>, Word> words;
    int max_length = 0;

    const Word& at(int i, int j) const;
};

ConnectorTable connecting_words(const ShiftSpec& markov_spec, const std::vector<int>& component);

// True when the adjacency restricted to `letters` is strongly connected and
// every letter has an outgoing edge inside the set.
bool is_irreducible_restriction(const MarkovShift& m, const std::vector<int>& letters);

}  // namespace dimspec
