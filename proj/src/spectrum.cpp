#include "dimspec/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "dimspec/errors.hpp"
#include "dimspec/interval.hpp"

namespace dimspec {

namespace {

PressureEngine::Options engine_options(const Budgets& b) {
    PressureEngine::Options opt;
    opt.max_words = b.max_words;
    opt.block_state_budget = b.block_state_budget;
    return opt;
}

DimensionEnclosure intersect(const DimensionEnclosure& a, const DimensionEnclosure& b) {
    DimensionEnclosure out = b;
    out.h_lo = std::max(a.h_lo, b.h_lo);
    out.h_hi = std::min(a.h_hi, b.h_hi);
    if (out.h_lo > out.h_hi) {
        if (out.h_lo - out.h_hi > 1e-9) throw InternalError("dimension enclosures do not intersect");
        out.h_lo = out.h_hi;
    }
    return out;
}

}  // namespace

DimensionEnclosure dimension(const ShiftSpec& shift, const SystemSpec& sys, double target_width,
                             const Budgets& budgets) {
    if (!(target_width > 0.0)) throw InputError("target width must be positive");

    std::optional<DimensionEnclosure> best;
    const double tol = std::max(1e-9, std::min(target_width / 4.0, 0.01));

    int n = std::min(4, budgets.max_depth);
    while (true) {
        DimensionEnclosure cur;
        try {
            cur = bowen_root(shift, sys, n, tol, engine_options(budgets));
        } catch (const ResourceError&) {
            break;  // word budget hit; report the best certified enclosure so far
        }
        best = best ? intersect(*best, cur) : cur;
        best->depth = n;
        if (best->width() <= target_width) {
            best->converged = true;
            return *best;
        }
        if (n >= budgets.max_depth) break;
        n = std::min(budgets.max_depth, std::max(n + 2, n + n / 2));
    }
    if (!best) {
        DimensionEnclosure fallback;  // [0, 1] is always certified
        fallback.converged = false;
        return fallback;
    }
    best->converged = best->width() <= target_width;
    return *best;
}

std::vector<std::pair<double, DimensionEnclosure>> beta_curve(const SystemSpec& sys, double beta_lo,
                                                              double beta_hi, double step,
                                                              double target_width,
                                                              const Budgets& budgets) {
    if (!(step > 0.0)) throw InputError("curve step must be positive");
    if (!(beta_lo >= 0.0) || !(beta_lo <= beta_hi))
        throw InputError("curve needs 0 <= beta_lo <= beta_hi");
    if (beta_hi > sys.letter_count() + 1e-12)
        throw InputError("curve upper beta exceeds the alphabet size");

    std::vector<std::pair<double, DimensionEnclosure>> out;
    for (double b = beta_lo; b <= beta_hi + 1e-12; b += step) {
        const double beta = std::min(b, beta_hi);
        out.emplace_back(beta, dimension(ShiftSpec::beta(beta), sys, target_width, budgets));
        if (beta >= beta_hi) break;
    }
    return out;
}

Inversion invert_dimension(const SystemSpec& sys, double d_target, double epsilon,
                           const Budgets& budgets) {
    if (!(epsilon > 0.0)) throw InputError("inversion epsilon must be positive");
    if (!(d_target >= 0.0)) throw InputError("inversion target must be >= 0");

    const double alphabet = static_cast<double>(sys.letter_count());
    const double width_goal = std::min(epsilon, budgets.target_width);

    Inversion inv;

    if (d_target <= 0.0) {
        inv.beta = 0.0;
        inv.bracket_lo = inv.bracket_hi = 0.0;
        inv.enclosure = dimension(ShiftSpec::beta(0.0), sys, width_goal, budgets);
        return inv;
    }

    const DimensionEnclosure h_full = dimension(ShiftSpec::full(sys.letter_count()), sys,
                                                width_goal, budgets);
    if (d_target > h_full.h_hi)
        throw InputError("inversion target " + std::to_string(d_target) +
                         " exceeds the full-shift dimension enclosure [" + std::to_string(h_full.h_lo) +
                         ", " + std::to_string(h_full.h_hi) + "]");
    if (d_target >= h_full.h_lo - epsilon) {
        // Within epsilon of the top of the spectrum: the full shift itself.
        inv.beta = alphabet;
        inv.bracket_lo = inv.bracket_hi = alphabet;
        inv.enclosure = h_full;
        inv.converged = h_full.h_lo >= d_target - epsilon && h_full.h_hi <= d_target + epsilon;
        return inv;
    }

    // Language nesting in beta makes the dimension monotone, so bisect.
    double lo = 0.0, hi = alphabet;
    DimensionEnclosure at_mid;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        at_mid = dimension(ShiftSpec::beta(mid), sys, width_goal, budgets);
        if (at_mid.h_lo >= d_target - epsilon && at_mid.h_hi <= d_target + epsilon) {
            inv.beta = mid;
            inv.bracket_lo = lo;
            inv.bracket_hi = hi;
            inv.enclosure = at_mid;
            inv.converged = true;
            return inv;
        }
        if (at_mid.h_hi < d_target)
            lo = mid;
        else if (at_mid.h_lo > d_target)
            hi = mid;
        else
            break;  // enclosure straddles the target but stalls above epsilon
        if (hi - lo < 1e-12) break;
    }
    const double mid = 0.5 * (lo + hi);
    inv.beta = mid;
    inv.bracket_lo = lo;
    inv.bracket_hi = hi;
    inv.enclosure = dimension(ShiftSpec::beta(mid), sys, width_goal, budgets);
    inv.converged = inv.enclosure.h_lo >= d_target - epsilon && inv.enclosure.h_hi <= d_target + epsilon;
    return inv;
}

double BlockConstruction::pressure_gap_constant(const SystemSpec& base) const {
    // C = 3 ln K - 2 ln L - ln W with K from above and L, W from below keeps
    // C at or above its true value.
    const double three_ln_k = rnd::mul_up(3.0, rnd::log_up(base.distortion()));
    return rnd::add_up(three_ln_k,
                       rnd::add_up(rnd::mul_up(-2.0, log_min_connector_norm), -log_anchor_norm));
}

BlockConstruction markov_block_construction(const ShiftSpec& markov, const SystemSpec& sys,
                                            int anchor, int m, double beta,
                                            const Budgets& budgets) {
    if (!markov.is_markov()) throw InputError("block construction needs a markov shift");
    if (m < 1) throw InputError("block construction needs m >= 1");
    const auto& mk = markov.as_markov();
    if (anchor < 0 || anchor >= mk.alphabet) throw InputError("anchor letter out of range");

    std::vector<int> all;
    for (int a = 0; a < mk.alphabet; ++a) all.push_back(a);
    if (!is_irreducible_restriction(mk, all))
        throw PreconditionError("block construction needs an irreducible markov shift; pass one "
                                "component of scc_decomposition");

    const ConnectorTable connectors = connecting_words(markov, all);

    std::vector<Word> blocks;
    for (const auto& v : language(markov, m, budgets.max_words)) {
        const Word& u = connectors.at(anchor, v.letters.front());
        const Word& u_prime = connectors.at(v.letters.back(), anchor);
        Word block{anchor};
        block = block + u + v + u_prime;
        const std::size_t len = block.size();
        if (len < static_cast<std::size_t>(m + 1) ||
            len > static_cast<std::size_t>(m + 2 * connectors.max_length + 1))
            throw InternalError("block length left the [m+1, m+2N+1] range");
        blocks.push_back(std::move(block));
    }
    const int index_alphabet = static_cast<int>(blocks.size());

    if (!(beta >= 0.0) || beta > static_cast<double>(index_alphabet) + 1e-12)
        throw InputError("index beta must lie in [0, M] with M = " + std::to_string(index_alphabet));

    // L = min over connector norms (empty connector contributes the identity),
    // W = the anchor letter norm; both as certified lower endpoints.
    double log_l = 0.0;
    for (const auto& [pair, w] : connectors.words) {
        (void)pair;
        if (w.empty()) continue;
        log_l = std::min(log_l, ilog(word_derivative_norm(sys, w)).lo);
    }
    const double log_w = ilog(word_derivative_norm(sys, Word{anchor})).lo;

    return BlockConstruction{anchor,
                             m,
                             beta,
                             blocks,
                             induced_block_system(sys, markov, blocks),
                             index_alphabet,
                             connectors.max_length,
                             log_l,
                             log_w};
}

MarkovInversion invert_dimension_markov(const ShiftSpec& markov, const SystemSpec& sys,
                                        double d_target, double epsilon, const Budgets& budgets) {
    if (!(epsilon > 0.0)) throw InputError("inversion epsilon must be positive");
    if (!(d_target >= 0.0)) throw InputError("inversion target must be >= 0");

    const double width_goal = std::min(epsilon, budgets.target_width);
    const DimensionEnclosure h_z = dimension(markov, sys, width_goal, budgets);
    if (d_target > h_z.h_hi)
        throw InputError("inversion target " + std::to_string(d_target) +
                         " exceeds the markov dimension enclosure [" + std::to_string(h_z.h_lo) + ", " +
                         std::to_string(h_z.h_hi) + "]");

    MarkovInversion out;
    if (d_target >= h_z.h_lo - epsilon) {
        out.whole_shift = true;
        out.enclosure = h_z;
        out.beta = 0.0;
        out.m = 0;
        out.converged = true;
        return out;
    }
    if (d_target <= 0.0) {
        const BlockConstruction bc = markov_block_construction(markov, sys, 0, 1, 0.0, budgets);
        out.m = 1;
        out.beta = 0.0;
        out.enclosure = dimension(ShiftSpec::beta(0.0), bc.induced, width_goal, budgets);
        return out;
    }

    for (int m = 1; m <= budgets.max_depth; ++m) {
        std::optional<BlockConstruction> built;
        try {
            built = markov_block_construction(markov, sys, 0, m, /*beta=*/0.0, budgets);
        } catch (const ResourceError&) {
            break;
        }
        const BlockConstruction& bc = *built;
        const int big_m = bc.index_alphabet;
        const DimensionEnclosure h_m =
            dimension(ShiftSpec::beta(static_cast<double>(big_m)), bc.induced, width_goal, budgets);
        if (h_m.h_lo < d_target + epsilon) continue;  // grow m until Z_m reaches past the target

        // Bisection over the index beta inside Z_m.
        double lo = 0.0, hi = static_cast<double>(big_m);
        for (int it = 0; it < 64; ++it) {
            const double mid = 0.5 * (lo + hi);
            const DimensionEnclosure cur =
                dimension(ShiftSpec::beta(mid), bc.induced, width_goal, budgets);
            if (cur.h_lo >= d_target - epsilon && cur.h_hi <= d_target + epsilon) {
                out.m = m;
                out.beta = mid;
                out.enclosure = cur;
                out.converged = true;
                return out;
            }
            if (cur.h_hi < d_target)
                lo = mid;
            else if (cur.h_lo > d_target)
                hi = mid;
            else
                break;
            if (hi - lo < 1e-12) break;
        }
        const double mid = 0.5 * (lo + hi);
        out.m = m;
        out.beta = mid;
        out.enclosure = dimension(ShiftSpec::beta(mid), bc.induced, width_goal, budgets);
        out.converged =
            out.enclosure.h_lo >= d_target - epsilon && out.enclosure.h_hi <= d_target + epsilon;
        return out;
    }
    throw ResourceError("block construction budget exhausted before reaching the target dimension");
}

std::vector<ExhaustionRung> exhaustion_dimension(const std::function<SystemSpec(int)>& factory,
                                                 const std::vector<int>& truncations,
                                                 double target_width, const Budgets& budgets) {
    std::vector<ExhaustionRung> ladder;
    for (int size : truncations) {
        ExhaustionRung rung;
        rung.truncation = size;
        try {
            const SystemSpec sys = factory(size);
            rung.enclosure = dimension(ShiftSpec::full(sys.letter_count()), sys, target_width, budgets);
        } catch (const std::exception& e) {
            rung.error = e.what();
        }
        ladder.push_back(std::move(rung));
    }
    return ladder;
}

}  // namespace dimspec
