#pragma once

#include <vector>

#include "dimspec/shift.hpp"
#include "dimspec/word.hpp"

namespace dimspec {

// First n digits of the greedy expansion of t in powers of beta^{-1}: each
// digit is the maximal integer a with a * beta^{-k} strictly below the
// remainder. Digits are clamped to be non-negative, so t = 0 yields 0^n.
Word greedy_expansion(double t, double beta, int n);

// (1 + beta^{2k})^{1/2k} - beta: the supremum of increments delta such that
// sparse zero replacement can move words of X_{beta+delta} into X_beta.
double delta_bound(double beta, int k);

// Outcome of the zero-replacement construction.
struct ReplacementPlan {
    std::vector<int> positions;  // 1-indexed, sorted ascending, pairwise gaps > gap
    Word source;                 // the input word
    Word result;                 // source with the positions zeroed
    int gap = 1;                 // the k parameter
};

// Zeroes a sparse set of nonzero letters of y (treated as y 0^infty) so the
// result is admissible for X_beta. The caller declares the beta_prime whose
// shift produced y; both that admissibility and beta_prime < beta +
// delta_bound(beta, k) are checked.
ReplacementPlan sparse_zero_replacement(const Word& y, double beta, double beta_prime, int k);

// The word map L_n(X_{beta_prime}) -> L_n(X_beta): extend by 0^infty, replace,
// truncate back to length n. Deterministic.
Word replace_word(const Word& v, double beta, double beta_prime, int k);

// Shift of finite type contained in X_beta: vertices are the (m-1)-blocks of
// L_{m-1}(X_beta) and a transition is allowed when the overlap is consistent
// and the full m-window sum stays below 1 - margin, with
// margin = (ceil(beta)-1) beta^{-m} / (beta-1). Any infinite window then sums
// below 1, so every path spells a beta-admissible sequence.
struct InnerSftSpec {
    int window = 2;
    double margin = 0.0;
    std::vector<Word> vertices;                     // sorted lexicographically
    std::vector<std::pair<int, int>> transitions;   // vertex index pairs

    ShiftSpec vertex_shift() const;                 // Markov shift over vertex indices
    int first_letter(int vertex) const;             // label used when spelling paths
};

InnerSftSpec inner_sft(double beta, int m, std::size_t max_words = (1u << 22));

}  // namespace dimspec
