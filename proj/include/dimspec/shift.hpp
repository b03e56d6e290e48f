#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "dimspec/word.hpp"

namespace dimspec {

// Rejection margin for beta-shift window sums: a sum within this band of the
// bound counts as a violation, so floating-point error can only shrink the
// accepted language (the safe direction for certified lower bounds). Crossing
// events are counted; see guard_band_hits().
inline constexpr double kWindowGuardBand = 1e-12;

std::uint64_t guard_band_hits();
void reset_guard_band_hits();
void note_guard_band_hit();

struct FullShift {
    int alphabet = 2;
};

struct MarkovShift {
    int alphabet = 2;
    std::vector<std::pair<int, int>> edges;  // sorted, unique

    bool allows(int from, int to) const;
};

// Greedy base-beta expansions. alphabet = max(ceil(beta), 1); beta <= 1 is
// the singleton {0^inf}; integer beta is the full shift on beta letters.
struct BetaShift {
    double beta = 2.0;
    int alphabet = 2;
    bool singleton = false;     // beta <= 1
    bool integer_beta = false;  // beta an exact integer > 1
};

// Factors of block concatenations t_{n_1} t_{n_2} ... where n_1 n_2 ... is a
// point of the index beta-shift. Admissibility unrolls a bounded number of
// index letters; intended for small lengths only.
struct CodedShift {
    std::vector<Word> blocks;
    double index_beta = 2.0;
    int alphabet = 2;  // base alphabet: 1 + max letter used in blocks
};

class ShiftSpec {
  public:
    static ShiftSpec full(int alphabet);
    static ShiftSpec markov(int alphabet, std::vector<std::pair<int, int>> edges);
    static ShiftSpec beta(double beta);
    static ShiftSpec coded(std::vector<Word> blocks, double index_beta);

    int alphabet_size() const;

    bool is_full() const { return std::holds_alternative<FullShift>(v_); }
    bool is_markov() const { return std::holds_alternative<MarkovShift>(v_); }
    bool is_beta() const { return std::holds_alternative<BetaShift>(v_); }
    bool is_coded() const { return std::holds_alternative<CodedShift>(v_); }

    const FullShift& as_full() const { return std::get<FullShift>(v_); }
    const MarkovShift& as_markov() const { return std::get<MarkovShift>(v_); }
    const BetaShift& as_beta() const { return std::get<BetaShift>(v_); }
    const CodedShift& as_coded() const { return std::get<CodedShift>(v_); }

    std::string kind() const;

  private:
    explicit ShiftSpec(std::variant<FullShift, MarkovShift, BetaShift, CodedShift> v)
        : v_(std::move(v)) {}
    std::variant<FullShift, MarkovShift, BetaShift, CodedShift> v_;
};

// True iff w belongs to the language of the shift. Letters out of range are
// an input error, not a false.
bool is_word_admissible(const ShiftSpec& spec, const Word& w);

// All window sums sum_{s=1..j-i} w[i+s] * beta^{-s} stay below `bound` minus
// the guard band. Exposed for the beta-expansion machinery, which reuses it
// with tightened bounds.
bool beta_windows_ok(const std::vector<int>& letters, double beta, double bound = 1.0);

// Exactly L_n(spec), lexicographically ordered, via depth-first extension
// with admissibility pruning. Throws ResourceError when the enumeration
// exceeds max_words.
std::vector<Word> language(const ShiftSpec& spec, int n, std::size_t max_words = (1u << 22));

std::uint64_t count_language(const ShiftSpec& spec, int n, std::size_t max_words = (1u << 22));

// Admissibility direction for enumeration. Certified keeps the guard band
// (words near the window bound are dropped; safe for lower bounds).
// Permissive accepts anything within the band above the bound (a superset of
// the true language; safe for upper bounds). They differ only for beta
// shifts and coded index shifts.
enum class LanguageMode { Certified, Permissive };

// Admissibility with an explicit direction; the certified mode matches
// is_word_admissible.
bool is_word_admissible_mode(const ShiftSpec& spec, const Word& w, LanguageMode mode);

// Depth-first traversal of the admissible prefix tree up to length n, in
// lexicographic order. on_enter is called after each extension (prefix is the
// current word); returning false prunes the subtree. on_exit is called when
// the prefix is unwound. node_budget caps the number of visited prefixes.
void walk_language(const ShiftSpec& spec, int n,
                   const std::function<bool(const std::vector<int>&)>& on_enter,
                   const std::function<void()>& on_exit, LanguageMode mode = LanguageMode::Certified,
                   std::size_t node_budget = (1u << 23));

}  // namespace dimspec
