#include "dimspec/shift.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <string>

#include "dimspec/errors.hpp"

namespace dimspec {

namespace {

std::atomic<std::uint64_t> g_guard_hits{0};

void check_letters(const Word& w, int alphabet) {
    for (int l : w.letters)
        if (l < 0 || l >= alphabet)
            throw InputError("letter " + std::to_string(l) + " out of range for alphabet of size " +
                             std::to_string(alphabet));
}

}  // namespace

std::uint64_t guard_band_hits() { return g_guard_hits.load(); }
void reset_guard_band_hits() { g_guard_hits.store(0); }
void note_guard_band_hit() { g_guard_hits.fetch_add(1, std::memory_order_relaxed); }

bool MarkovShift::allows(int from, int to) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(from, to));
}

ShiftSpec ShiftSpec::full(int alphabet) {
    if (alphabet < 1) throw InputError("full shift needs at least one letter");
    return ShiftSpec(FullShift{alphabet});
}

ShiftSpec ShiftSpec::markov(int alphabet, std::vector<std::pair<int, int>> edges) {
    if (alphabet < 1) throw InputError("markov shift needs at least one letter");
    for (auto [a, b] : edges)
        if (a < 0 || a >= alphabet || b < 0 || b >= alphabet)
            throw InputError("markov adjacency pair (" + std::to_string(a) + "," + std::to_string(b) +
                             ") references an invalid letter");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return ShiftSpec(MarkovShift{alphabet, std::move(edges)});
}

ShiftSpec ShiftSpec::beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw InputError("beta must be a finite real >= 0");
    BetaShift b;
    b.beta = beta;
    if (beta <= 1.0) {
        b.singleton = true;
        b.alphabet = 1;
    } else {
        const double c = std::ceil(beta);
        b.integer_beta = (c == beta);
        b.alphabet = static_cast<int>(c);
    }
    return ShiftSpec(b);
}

ShiftSpec ShiftSpec::coded(std::vector<Word> blocks, double index_beta) {
    if (blocks.empty()) throw InputError("coded shift needs at least one block");
    std::set<Word> seen;
    int alphabet = 1;
    for (const auto& b : blocks) {
        if (b.empty()) throw InputError("coded blocks must be nonempty");
        if (!seen.insert(b).second) throw InputError("coded blocks must be pairwise distinct");
        for (int l : b.letters) {
            if (l < 0) throw InputError("coded block letters must be non-negative");
            alphabet = std::max(alphabet, l + 1);
        }
    }
    if (!(index_beta >= 0.0)) throw InputError("coded index beta must be >= 0");
    return ShiftSpec(CodedShift{std::move(blocks), index_beta, alphabet});
}

int ShiftSpec::alphabet_size() const {
    return std::visit([](const auto& s) { return s.alphabet; }, v_);
}

std::string ShiftSpec::kind() const {
    if (is_full()) return "full";
    if (is_markov()) return "markov";
    if (is_beta()) return "beta";
    return "coded";
}

bool beta_windows_ok(const std::vector<int>& letters, double beta, double bound) {
    const std::size_t n = letters.size();
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        double pw = 1.0;
        for (std::size_t s = i; s < n; ++s) {
            pw /= beta;
            sum += letters[s] * pw;
            if (sum >= bound) return false;
            if (sum >= bound - kWindowGuardBand) {
                g_guard_hits.fetch_add(1, std::memory_order_relaxed);
                return false;
            }
        }
    }
    return true;
}

namespace {

// Beta admissibility with a direction: Certified rejects inside the guard
// band below the bound, Permissive accepts up to the band above it.
bool beta_admissible_mode(const std::vector<int>& letters, double beta, LanguageMode mode) {
    if (mode == LanguageMode::Certified) return beta_windows_ok(letters, beta, 1.0);
    const std::size_t n = letters.size();
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        double pw = 1.0;
        for (std::size_t s = i; s < n; ++s) {
            pw /= beta;
            sum += letters[s] * pw;
            if (sum >= 1.0 + kWindowGuardBand) return false;
        }
    }
    return true;
}

bool beta_admissible_word(const BetaShift& b, const std::vector<int>& letters, LanguageMode mode) {
    if (b.singleton) {
        for (int l : letters)
            if (l != 0) return false;
        return true;
    }
    if (b.integer_beta) return true;
    return beta_admissible_mode(letters, b.beta, mode);
}

// Factor test against concatenations of blocks indexed by words of the index
// beta-shift: unroll index words of length ceil(n / min block length) + 2 and
// slide a window. Small n only.
bool coded_admissible(const CodedShift& c, const Word& w, LanguageMode mode) {
    if (w.empty()) return true;
    std::size_t min_block = c.blocks[0].size();
    for (const auto& b : c.blocks) min_block = std::min(min_block, b.size());
    const int unroll = static_cast<int>(w.size() / min_block) + 2;
    const ShiftSpec index = ShiftSpec::beta(c.index_beta);
    if (index.alphabet_size() > static_cast<int>(c.blocks.size()))
        throw InputError("coded index beta exceeds block count");
    const BetaShift& ib = index.as_beta();

    std::vector<int> idx;
    std::vector<int> text;
    bool found = false;

    auto matches = [&]() {
        if (text.size() < w.size()) return false;
        return std::search(text.begin(), text.end(), w.letters.begin(), w.letters.end()) != text.end();
    };

    auto rec = [&](auto&& self) -> void {
        if (found) return;
        if (static_cast<int>(idx.size()) == unroll) {
            if (matches()) found = true;
            return;
        }
        for (int a = 0; a < index.alphabet_size() && !found; ++a) {
            idx.push_back(a);
            if (beta_admissible_word(ib, idx, mode)) {
                const Word& b = c.blocks[static_cast<std::size_t>(a)];
                text.insert(text.end(), b.letters.begin(), b.letters.end());
                if (matches())
                    found = true;
                else
                    self(self);
                text.resize(text.size() - b.size());
            }
            idx.pop_back();
        }
    };
    rec(rec);
    return found;
}

}  // namespace

bool is_word_admissible_mode(const ShiftSpec& spec, const Word& w, LanguageMode mode) {
    check_letters(w, spec.alphabet_size());
    if (spec.is_full()) return true;
    if (spec.is_markov()) {
        const auto& m = spec.as_markov();
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (!m.allows(w.letters[i], w.letters[i + 1])) return false;
        return true;
    }
    if (spec.is_beta()) return beta_admissible_word(spec.as_beta(), w.letters, mode);
    return coded_admissible(spec.as_coded(), w, mode);
}

bool is_word_admissible(const ShiftSpec& spec, const Word& w) {
    return is_word_admissible_mode(spec, w, LanguageMode::Certified);
}

void walk_language(const ShiftSpec& spec, int n,
                   const std::function<bool(const std::vector<int>&)>& on_enter,
                   const std::function<void()>& on_exit, LanguageMode mode,
                   std::size_t node_budget) {
    if (n < 0) throw InputError("language length must be non-negative");
    if (n == 0) return;
    const int alphabet = spec.alphabet_size();
    std::size_t nodes = 0;
    auto count_node = [&]() {
        if (++nodes > node_budget)
            throw ResourceError("language walk exceeded node budget = " + std::to_string(node_budget) +
                                " before depth " + std::to_string(n));
    };

    std::vector<int> cur;

    if (spec.is_beta() && !spec.as_beta().singleton && !spec.as_beta().integer_beta) {
        // Incremental window sums; the permissive direction shifts the
        // rejection threshold one guard band above the bound.
        const double beta = spec.as_beta().beta;
        const double threshold =
            (mode == LanguageMode::Certified) ? 1.0 - kWindowGuardBand : 1.0 + kWindowGuardBand;
        std::vector<double> pows;
        std::vector<std::vector<double>> levels;
        auto rec = [&](auto&& self) -> void {
            if (static_cast<int>(cur.size()) == n) return;
            for (int a = 0; a < alphabet; ++a) {
                count_node();
                const double x = static_cast<double>(a);
                pows.push_back(pows.empty() ? 1.0 / beta : pows.back() / beta);
                const std::vector<double>* parent = levels.empty() ? nullptr : &levels.back();
                const std::size_t psize = parent ? parent->size() : 0;
                std::vector<double> snap(psize + 1);
                bool ok = true;
                for (std::size_t j = 0; j < psize; ++j) {
                    snap[j] = (*parent)[j] + x * pows[psize - j];
                    if (snap[j] >= threshold) ok = false;
                    if (mode == LanguageMode::Certified && snap[j] >= threshold && snap[j] < 1.0)
                        g_guard_hits.fetch_add(1, std::memory_order_relaxed);
                }
                snap.back() = x * pows[0];
                if (snap.back() >= threshold) {
                    if (mode == LanguageMode::Certified && snap.back() < 1.0)
                        g_guard_hits.fetch_add(1, std::memory_order_relaxed);
                    ok = false;
                }
                if (ok) {
                    levels.push_back(std::move(snap));
                    cur.push_back(a);
                    if (on_enter(cur)) self(self);
                    on_exit();
                    cur.pop_back();
                    levels.pop_back();
                }
                pows.pop_back();
            }
        };
        rec(rec);
        return;
    }

    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == n) return;
        for (int a = 0; a < alphabet; ++a) {
            count_node();
            bool ok;
            if (spec.is_full()) {
                ok = true;
            } else if (spec.is_markov()) {
                ok = cur.empty() || spec.as_markov().allows(cur.back(), a);
            } else if (spec.is_beta()) {
                // singleton or integer beta
                cur.push_back(a);
                ok = beta_admissible_word(spec.as_beta(), cur, mode);
                cur.pop_back();
            } else {
                cur.push_back(a);
                ok = coded_admissible(spec.as_coded(), Word(cur), mode);
                cur.pop_back();
            }
            if (!ok) continue;
            cur.push_back(a);
            if (on_enter(cur)) self(self);
            on_exit();
            cur.pop_back();
        }
    };
    rec(rec);
}

std::vector<Word> language(const ShiftSpec& spec, int n, std::size_t max_words) {
    if (n < 0) throw InputError("language length must be non-negative");
    std::vector<Word> out;
    if (n == 0) {
        out.push_back(Word{});
        return out;
    }
    walk_language(
        spec, n,
        [&](const std::vector<int>& prefix) {
            if (static_cast<int>(prefix.size()) < n) return true;
            if (out.size() >= max_words)
                throw ResourceError("language enumeration exceeded max_words = " +
                                    std::to_string(max_words) + " at length " + std::to_string(n));
            out.push_back(Word(prefix));
            return false;
        },
        []() {}, LanguageMode::Certified, max_words * 8 + 1024);
    return out;
}

std::uint64_t count_language(const ShiftSpec& spec, int n, std::size_t max_words) {
    if (spec.is_full()) {
        std::uint64_t c = 1;
        for (int i = 0; i < n; ++i) {
            const std::uint64_t next = c * static_cast<std::uint64_t>(spec.alphabet_size());
            if (spec.alphabet_size() > 1 && next / static_cast<std::uint64_t>(spec.alphabet_size()) != c)
                throw ResourceError("count_language overflow on full shift at length " + std::to_string(n));
            c = next;
            if (c > max_words)
                throw ResourceError("count_language exceeded max_words = " + std::to_string(max_words));
        }
        return c;
    }
    if (spec.is_beta() && spec.as_beta().singleton) return 1;
    if (n == 0) return 1;
    std::uint64_t count = 0;
    walk_language(
        spec, n,
        [&](const std::vector<int>& prefix) {
            if (static_cast<int>(prefix.size()) < n) return true;
            if (++count > max_words)
                throw ResourceError("count_language exceeded max_words = " + std::to_string(max_words));
            return false;
        },
        []() {}, LanguageMode::Certified, max_words * 8 + 1024);
    return count;
}

}  // namespace dimspec
