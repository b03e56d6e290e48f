#include "dimspec/betashift.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dimspec/errors.hpp"
#include "dimspec/interval.hpp"

namespace dimspec {

Word greedy_expansion(double t, double beta, int n) {
    if (!(t >= 0.0) || !(t < 1.0)) throw InputError("greedy expansion needs t in [0, 1)");
    if (!(beta > 1.0)) throw InputError("greedy expansion needs beta > 1");
    if (n < 1) throw InputError("greedy expansion needs n >= 1");

    // Work with the scaled remainder u_k = beta^k * (t - sum_{i<=k} a_i b^-i),
    // so each step reads the maximal integer strictly below beta * u.
    Word out;
    double u = t;
    for (int k = 0; k < n; ++k) {
        const double scaled = beta * u;
        double digit = std::floor(scaled);
        if (digit == scaled) digit -= 1.0;  // strict inequality
        if (digit < 0.0) digit = 0.0;
        out.letters.push_back(static_cast<int>(digit));
        u = scaled - digit;
    }
    return out;
}

double delta_bound(double beta, int k) {
    if (!(beta > 1.0)) throw InputError("delta_bound needs beta > 1");
    if (k < 1) throw InputError("delta_bound needs k >= 1");
    const double e = 2.0 * k;
    return std::pow(1.0 + std::pow(beta, e), 1.0 / e) - beta;
}

namespace {

// Conservative (rounded-down) version used in precondition checks, so a
// borderline beta_prime is rejected rather than certified.
double delta_bound_lo(double beta, int k) {
    const double e = 2.0 * k;
    const Interval b = Interval::point(beta);
    const Interval inner = Interval::point(1.0) + ipow(b, e);
    const Interval root = ipow(inner, 1.0 / e);
    return (root - b).lo;
}

}  // namespace

ReplacementPlan sparse_zero_replacement(const Word& y, double beta, double beta_prime, int k) {
    if (!(beta > 1.0)) throw InputError("sparse_zero_replacement needs beta > 1");
    if (k < 1) throw InputError("sparse_zero_replacement needs k >= 1");
    if (!(beta_prime >= 0.0)) throw InputError("beta_prime must be >= 0");
    if (!(beta_prime < beta + delta_bound_lo(beta, k)))
        throw PreconditionError("beta_prime = " + std::to_string(beta_prime) +
                                " is not below beta + delta_bound(beta, k)");
    if (!is_word_admissible(ShiftSpec::beta(beta_prime), y))
        throw PreconditionError("input word is not admissible for the declared beta_prime");

    ReplacementPlan plan;
    plan.source = y;
    plan.result = y;
    plan.gap = k;

    // Strip trailing zeros: together with the 0^infty extension they form the
    // final run, so only finite intervals remain to process.
    std::size_t effective = y.size();
    while (effective > 0 && y.letters[effective - 1] == 0) --effective;
    if (effective == 0) return plan;  // all zeros

    // Split [1, effective] at maximal zero-runs of length >= k. Each remaining
    // interval ends with a nonzero letter and contains no k consecutive zeros.
    std::vector<std::pair<int, int>> intervals;  // 1-indexed [a, b]
    int pos = 1;
    while (pos <= static_cast<int>(effective)) {
        if (y.letters[static_cast<std::size_t>(pos - 1)] == 0) {
            int run_end = pos;
            while (run_end + 1 <= static_cast<int>(effective) &&
                   y.letters[static_cast<std::size_t>(run_end)] == 0)
                ++run_end;
            const int run_len = run_end - pos + 1;
            if (run_len >= k) {
                pos = run_end + 1;
                continue;
            }
        }
        // start of an interval: extend until a zero-run of length >= k or end
        int a = pos;
        int b = pos;
        while (b + 1 <= static_cast<int>(effective)) {
            const int next = b + 1;
            if (y.letters[static_cast<std::size_t>(next - 1)] == 0) {
                int run_end = next;
                while (run_end + 1 <= static_cast<int>(effective) &&
                       y.letters[static_cast<std::size_t>(run_end)] == 0)
                    ++run_end;
                if (run_end - next + 1 >= k) break;
                b = run_end;
            } else {
                b = next;
            }
        }
        // b currently sits at the last position before a long zero-run (or the
        // effective end); trailing zeros shorter than k cannot occur here
        // because either the run reaches `effective` (stripped) or is < k and
        // followed by a nonzero letter we absorb next round.
        intervals.emplace_back(a, b);
        pos = b + 1;
        // skip the zero-run after b
        while (pos <= static_cast<int>(effective) &&
               y.letters[static_cast<std::size_t>(pos - 1)] == 0)
            ++pos;
    }

    auto letter = [&](int p) { return y.letters[static_cast<std::size_t>(p - 1)]; };

    for (auto [a, b] : intervals) {
        if (letter(b) == 0) throw InternalError("interval does not end with a nonzero letter");
        std::vector<int> picks;
        int cur = b;
        picks.push_back(cur);
        while (cur >= a + k) {
            // sup{ j : y(j) > 0, a <= j < cur - k }; an empty candidate set
            // terminates the interval (boundary case of the construction).
            int next = -1;
            for (int j = cur - k - 1; j >= a; --j) {
                if (letter(j) > 0) {
                    next = j;
                    break;
                }
            }
            if (next < 0) break;
            picks.push_back(next);
            cur = next;
        }
        for (int p : picks) plan.positions.push_back(p);
    }
    std::sort(plan.positions.begin(), plan.positions.end());

    for (int p : plan.positions) plan.result.letters[static_cast<std::size_t>(p - 1)] = 0;

    if (!is_word_admissible(ShiftSpec::beta(beta), plan.result))
        throw PreconditionError(
            "replacement result failed the certified window test for beta; "
            "beta_prime is too close to the delta bound for the guard band");
    return plan;
}

Word replace_word(const Word& v, double beta, double beta_prime, int k) {
    ReplacementPlan plan = sparse_zero_replacement(v, beta, beta_prime, k);
    return plan.result;
}

ShiftSpec InnerSftSpec::vertex_shift() const {
    return ShiftSpec::markov(static_cast<int>(vertices.size()), transitions);
}

int InnerSftSpec::first_letter(int vertex) const {
    return vertices[static_cast<std::size_t>(vertex)].letters.front();
}

InnerSftSpec inner_sft(double beta, int m, std::size_t max_words) {
    if (!(beta > 1.0)) throw InputError("inner_sft needs beta > 1");
    if (m < 2) throw InputError("inner_sft needs m >= 2");

    InnerSftSpec sft;
    sft.window = m;

    // margin = (ceil(beta)-1) beta^-m / (beta-1), rounded up so the window
    // test stays conservative.
    const Interval b = Interval::point(beta);
    const int max_digit = static_cast<int>(std::ceil(beta)) - 1;
    const Interval margin = (Interval::point(max_digit) * ipow(b, -static_cast<double>(m))) /
                            (b - Interval::point(1.0));
    sft.margin = margin.hi;

    const ShiftSpec spec = ShiftSpec::beta(beta);
    sft.vertices = language(spec, m - 1, max_words);
    std::sort(sft.vertices.begin(), sft.vertices.end());

    if (sft.margin >= 1.0) return sft;  // no window can pass; empty SFT

    const double bound = 1.0 - sft.margin;
    const int alphabet = spec.alphabet_size();
    for (std::size_t ui = 0; ui < sft.vertices.size(); ++ui) {
        const Word& u = sft.vertices[ui];
        for (int a = 0; a < alphabet; ++a) {
            std::vector<int> window = u.letters;
            window.push_back(a);
            // Full m-window sum must stay below 1 - margin (with guard band);
            // shorter windows are prefixes of m-windows along any path and are
            // dominated by them.
            double sum = 0.0;
            double pw = 1.0;
            for (int x : window) {
                pw /= beta;
                sum += x * pw;
            }
            if (sum >= bound - kWindowGuardBand) {
                if (sum < bound) note_guard_band_hit();
                continue;
            }
            Word v(std::vector<int>(window.begin() + 1, window.end()));
            auto it = std::lower_bound(sft.vertices.begin(), sft.vertices.end(), v);
            if (it == sft.vertices.end() || *it != v) continue;
            sft.transitions.emplace_back(static_cast<int>(ui),
                                         static_cast<int>(it - sft.vertices.begin()));
        }
    }
    return sft;
}

}  // namespace dimspec
