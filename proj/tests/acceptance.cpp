// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "dimspec/betashift.hpp"
#include "dimspec/errors.hpp"
#include "dimspec/graph.hpp"
#include "dimspec/pressure.hpp"
#include "dimspec/spectrum.hpp"

using namespace dimspec;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SystemSpec dyadic() { return refine_domain(SystemSpec::affine({0.5, 0.5}, {0.0, 0.5})); }
SystemSpec thirds() { return refine_domain(SystemSpec::affine({1.0 / 3, 1.0 / 3}, {0.0, 2.0 / 3})); }
SystemSpec cf12() { return refine_domain(SystemSpec::continued_fraction({1, 2}), 40); }
ShiftSpec golden_markov() { return ShiftSpec::markov(2, {{0, 0}, {0, 1}, {1, 0}}); }

char buffer[256];
std::string fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof buffer, format, args);
    va_end(args);
    return buffer;
}

// --------------------------------------------------------------------------
// 1. Cantor fixture: enclosure of log 2 / log 3 with width <= 1e-6 in < 1 s.
void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const DimensionEnclosure e = dimension(ShiftSpec::full(2), thirds(), 1e-6);
    const double dt = seconds_since(start);
    const double truth = std::log(2.0) / std::log(3.0);
    const bool pass = e.h_lo <= truth && truth <= e.h_hi && e.width() <= 1e-6 && dt < 1.0;
    report(1, pass, fmt("[%.10f, %.10f] width %.2e, %.2fs", e.h_lo, e.h_hi, e.width(), dt));
}

// 2. Golden beta shift on the dyadic system: enclosure of log phi / log 2,
//    width <= 0.05, depth <= 20, < 30 s. Oracle: the no-"11" transfer matrix
//    has spectral radius phi, so the entropy is log phi.
void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    Budgets budgets;
    budgets.max_depth = 20;
    const DimensionEnclosure e = dimension(ShiftSpec::beta(kPhi), dyadic(), 0.05, budgets);
    const double dt = seconds_since(start);

    // transfer-matrix oracle: rho([[1,1],[1,0]]) by power iteration
    double v0 = 1.0, v1 = 1.0;
    double rho = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double n0 = v0 + v1, n1 = v0;
        rho = n0 / v0;
        v0 = n0;
        v1 = n1;
        const double norm = std::max(v0, v1);
        v0 /= norm;
        v1 /= norm;
    }
    const double oracle = std::log(rho) / std::log(2.0);

    const bool pass = e.h_lo <= oracle && oracle <= e.h_hi && e.width() <= 0.05 &&
                      e.depth <= 20 && dt < 30.0;
    report(2, pass,
           fmt("[%.7f, %.7f] oracle %.7f width %.4f depth %d, %.2fs", e.h_lo, e.h_hi, oracle,
               e.width(), e.depth, dt));
}

// 3. Fibonacci counts for Beta(phi), n = 1..15, exact.
void criterion_3() {
    std::uint64_t fib_prev = 1, fib = 1;  // F_1, F_2
    bool pass = true;
    const ShiftSpec phi = ShiftSpec::beta(kPhi);
    for (int n = 1; n <= 15; ++n) {
        // F_{n+2} via the transfer-matrix recursion
        const std::uint64_t expected = fib + fib_prev;  // F_{n+2}
        fib_prev = fib;
        fib = expected;
        if (count_language(phi, n) != expected) pass = false;
    }
    report(3, pass, pass ? "counts match F_{n+2} for n = 1..15" : "count mismatch");
}

// 4. Inversion on the dyadic family: beta = 2^d analytically.
void criterion_4() {
    const SystemSpec sys = dyadic();
    bool pass = true;
    std::string detail;

    const Inversion half = invert_dimension(sys, 0.5, 0.005);
    if (std::abs(half.beta - std::sqrt(2.0)) > 0.01 || !half.converged) pass = false;
    detail += fmt("d=0.5 -> beta %.5f (sqrt2 %.5f); ", half.beta, std::sqrt(2.0));

    const Inversion one = invert_dimension(sys, 1.0, 0.01);
    if (one.beta != 2.0) pass = false;
    detail += fmt("d=1 -> beta %.3f; ", one.beta);

    const Inversion zero = invert_dimension(sys, 0.0, 0.01);
    if (!(zero.beta <= 1.0) || zero.enclosure.h_lo != 0.0 || zero.enclosure.h_hi != 0.0) pass = false;
    detail += fmt("d=0 -> beta %.3f enclosure [%g, %g]", zero.beta, zero.enclosure.h_lo,
                  zero.enclosure.h_hi);
    report(4, pass, detail);
}

// 5. Replacement-plan suite: 10^4 randomized trials, zero failures.
void criterion_5() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> bdist(1.0 + 1e-6, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> kdist(1, 3);
    std::uniform_int_distribution<int> ldist(1, 24);

    auto window_oracle = [](const Word& w, double beta) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            double sum = 0.0, pw = 1.0;
            for (std::size_t s = i; s < w.size(); ++s) {
                pw /= beta;
                sum += w.letters[s] * pw;
                if (sum >= 1.0 - 1e-12) return false;
            }
        }
        return true;
    };

    int failures = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const double beta = std::max(1.0 + 1e-9, bdist(rng));
        const int k = kdist(rng);
        const double beta_prime = beta + 0.98 * delta_bound(beta, k) * unit(rng);
        const int length = ldist(rng);

        // random admissible word for beta_prime
        const ShiftSpec spec = ShiftSpec::beta(beta_prime);
        const int alphabet = spec.alphabet_size();
        Word y;
        std::uniform_int_distribution<int> letter(0, alphabet - 1);
        while (static_cast<int>(y.size()) < length) {
            const int a = letter(rng);
            y.letters.push_back(a);
            if (!is_word_admissible(spec, y)) {
                y.letters.back() = 0;  // zero extension is always admissible
            }
        }

        try {
            const ReplacementPlan plan = sparse_zero_replacement(y, beta, beta_prime, k);
            bool ok = true;
            for (std::size_t i = 0; i + 1 < plan.positions.size(); ++i)
                if (plan.positions[i + 1] - plan.positions[i] <= k) ok = false;
            for (int p : plan.positions)
                if (plan.source.at(static_cast<std::size_t>(p)) <= 0) ok = false;
            for (std::size_t i = 0; i < plan.result.size(); ++i)
                if (plan.result.letters[i] > plan.source.letters[i]) ok = false;
            if (!window_oracle(plan.result, beta)) ok = false;
            if (!ok) ++failures;
        } catch (const std::exception&) {
            ++failures;
        }
    }
    report(5, failures == 0, fmt("%d failures in 10000 randomized trials", failures));
}

// 6. Fiber bound of the word map: n in {4,6,8}, k = 2, binary alphabet.
void criterion_6() {
    const double beta = 1.5;
    const int k = 2;
    const double beta_prime = beta + 0.9 * delta_bound(beta, k);
    bool pass = true;
    std::string detail;
    for (int n : {4, 6, 8}) {
        std::map<Word, int> fibers;
        for (const Word& v : language(ShiftSpec::beta(beta_prime), n))
            fibers[replace_word(v, beta, beta_prime, k)]++;
        int max_fiber = 0;
        for (const auto& [image, count] : fibers) max_fiber = std::max(max_fiber, count);
        // j^{n/k} (2n/k) C(n, n/k) with j = 1
        double binom = 1.0;
        for (int i = 0; i < n / k; ++i) binom = binom * (n - i) / (i + 1);
        const double bound = (2.0 * n / k) * binom;
        if (max_fiber > bound) pass = false;
        detail += fmt("n=%d: %d <= %.0f; ", n, max_fiber, bound);
    }
    report(6, pass, detail);
}

// 7. Continued fractions {1,2}: width <= 0.1 at depth <= 14 in < 60 s, and
//    the enclosure contains the depth-12 covering-sum crossing.
void criterion_7() {
    const auto start = std::chrono::steady_clock::now();
    Budgets budgets;
    budgets.max_depth = 14;
    const SystemSpec sys = cf12();
    const DimensionEnclosure e = dimension(ShiftSpec::full(2), sys, 0.1, budgets);
    const double dt = seconds_since(start);

    // independent covering oracle over depth-12 cylinder intervals
    std::vector<double> diams;
    for (const Word& w : language(ShiftSpec::full(2), 12))
        diams.push_back(cylinder_interval(sys, w).box.width());
    auto covering_sum = [&](double t) {
        double sum = 0.0;
        for (double d : diams) sum += std::pow(d, t);
        return sum;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (covering_sum(mid) > 1.0 ? lo : hi) = mid;
    }
    const double oracle = 0.5 * (lo + hi);

    const bool pass =
        e.width() <= 0.1 && e.depth <= 14 && e.h_lo <= oracle && oracle <= e.h_hi && dt < 60.0;
    report(7, pass,
           fmt("[%.5f, %.5f] covering oracle %.5f depth %d, %.2fs", e.h_lo, e.h_hi, oracle, e.depth,
               dt));
}

// 8. Golden-mean Markov cross-check against the Beta(phi) enclosure.
void criterion_8() {
    Budgets budgets;
    budgets.max_depth = 20;
    const DimensionEnclosure markov = dimension(golden_markov(), dyadic(), 0.05, budgets);
    const DimensionEnclosure beta = dimension(ShiftSpec::beta(kPhi), dyadic(), 0.05, budgets);
    const double mid_gap = std::abs(0.5 * (markov.h_lo + markov.h_hi) - 0.5 * (beta.h_lo + beta.h_hi));
    const double union_width = markov.width() + beta.width();
    const bool intersect = markov.h_lo <= beta.h_hi && beta.h_lo <= markov.h_hi;
    const bool pass = intersect && mid_gap <= union_width + 1e-12;
    report(8, pass,
           fmt("markov [%.6f, %.6f] vs beta [%.6f, %.6f]", markov.h_lo, markov.h_hi, beta.h_lo,
               beta.h_hi));
}

// 9. Block-construction convergence: P(Z, h_m) lands in [0, C/m] for
//    m = 1, 2, 3 with C = -ln(K^-3 L^2 W), all with certified enclosures.
void criterion_9() {
    const ShiftSpec z = golden_markov();
    const SystemSpec sys = dyadic();
    PressureEngine engine(z, sys, 10);
    bool pass = true;
    std::string detail;
    for (int m = 1; m <= 3; ++m) {
        const BlockConstruction bc = markov_block_construction(z, sys, 0, m, 1.0);
        const double c_const = bc.pressure_gap_constant(sys);
        const DimensionEnclosure h_m =
            dimension(ShiftSpec::beta(static_cast<double>(bc.index_alphabet)), bc.induced, 0.003);
        // evaluate P(Z, .) across the h_m enclosure; monotone decrease makes
        // [lower(h_hi), upper(h_lo)] a certified enclosure of P(Z, h_m)
        const double p_hi = engine.at(h_m.h_lo).upper;
        const double p_lo = engine.at(h_m.h_hi).lower;
        const bool inside = p_hi >= -1e-12 && p_lo <= c_const / m + 1e-12;
        if (!inside) pass = false;
        detail += fmt("m=%d: P in [%.4f, %.4f], C/m %.4f; ", m, p_lo, p_hi, c_const / m);
    }
    report(9, pass, detail);
}

// 10. Pressure property suite across the fixture grid: monotone decrease
//     with slope log s, grid convexity, brute-force sandwich at depth 18 on
//     alphabet-2 systems, and depth nesting. Zero violations allowed.
void criterion_10() {
    int violations = 0;

    struct Fixture {
        ShiftSpec shift;
        SystemSpec sys;
        bool full;
    };
    const std::vector<Fixture> fixtures = {
        {ShiftSpec::full(2), dyadic(), true},
        {ShiftSpec::full(2), thirds(), true},
        {golden_markov(), dyadic(), false},
        {ShiftSpec::beta(kPhi), dyadic(), false},
        {ShiftSpec::full(2), cf12(), true},
    };

    for (const auto& f : fixtures) {
        PressureEngine engine(f.shift, f.sys, 6);
        PressureEngine deep(f.shift, f.sys, 8);
        PressureEngine brute(f.shift, f.sys, 18);
        const double log_s = std::log(f.sys.contraction());

        std::vector<PressureEnclosure> grid;
        for (double t = 0.0; t <= 1.0 + 1e-9; t += 0.25) grid.push_back(engine.at(t));

        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            if (!(grid[i + 1].upper <= grid[i].upper + 0.25 * log_s + 1e-9)) ++violations;
        }

        // convexity of the raw partition function on a grid
        for (int n : {3, 5}) {
            std::vector<double> vals;
            for (double t = 0.0; t <= 1.0 + 1e-9; t += 0.125)
                vals.push_back(partition_log(f.shift, f.sys, n, t, PartitionMode::SupNorm));
            for (std::size_t i = 2; i < vals.size(); ++i)
                if (!(vals[i] - 2.0 * vals[i - 1] + vals[i - 2] >= -1e-9)) ++violations;
        }

        for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const PressureEnclosure p = engine.at(t);
            const PressureEnclosure q = deep.at(t);
            const PressureEnclosure b = brute.at(t);
            // nesting in depth
            if (!(q.upper <= p.upper + 1e-9 && q.lower >= p.lower - 1e-9)) ++violations;
            // sandwich: every certified enclosure intersects the brute-force
            // depth-18 enclosure, and the brute-force upper dominates lower(6)
            if (!(p.lower <= b.upper + 1e-12 && b.lower <= p.upper + 1e-12)) ++violations;
            if (f.full) {
                // literal sandwich on full shifts: lower(6) <= (1/18) log Z(18) <= ...
                const double z18 = partition_log(f.shift, f.sys, 18, t, PartitionMode::SupNorm) / 18.0;
                if (!(p.lower <= z18 + 1e-9)) ++violations;
            }
        }
    }
    report(10, violations == 0, fmt("%d violations across the fixture grid", violations));
}

// 11. Exhaustion ladder for continued-fraction truncations {1..m}, m = 2..5:
//     valid rungs with strictly increasing lower bounds.
void criterion_11() {
    auto factory = [](int m) {
        std::vector<int> digits;
        for (int d = 1; d <= m; ++d) digits.push_back(d);
        return refine_domain(SystemSpec::continued_fraction(digits), 60);
    };
    const auto ladder = exhaustion_dimension(factory, {2, 3, 4, 5}, 0.07);
    bool pass = ladder.size() == 4;
    std::string detail;
    double prev_lo = -1.0;
    for (const auto& rung : ladder) {
        if (!rung.enclosure) {
            pass = false;
            detail += fmt("m=%d failed: %s; ", rung.truncation, rung.error.c_str());
            continue;
        }
        const DimensionEnclosure& e = *rung.enclosure;
        if (!(e.h_lo <= e.h_hi)) pass = false;
        if (!(e.h_lo > prev_lo)) pass = false;
        prev_lo = e.h_lo;
        detail += fmt("%d:[%.4f,%.4f] ", rung.truncation, e.h_lo, e.h_hi);
    }
    report(11, pass, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures == 0) {
        std::printf("acceptance: all 11 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria failed\n", g_failures);
    return 1;
}
