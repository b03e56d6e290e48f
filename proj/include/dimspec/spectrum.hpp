#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dimspec/graph.hpp"
#include "dimspec/pressure.hpp"

namespace dimspec {

// Shared budget knobs, mirrored by the CLI configuration.
struct Budgets {
    int max_depth = 20;
    std::size_t max_words = (1u << 22);
    double target_width = 0.05;
    double epsilon = 0.01;
    int block_state_budget = 4096;
};

// Certified dimension enclosure with adaptive depth: the partition depth is
// raised until the width target is met or the budget runs out (the returned
// enclosure then carries converged = false).
DimensionEnclosure dimension(const ShiftSpec& shift, const SystemSpec& sys, double target_width,
                             const Budgets& budgets = {});

// Dimension along a beta grid.
std::vector<std::pair<double, DimensionEnclosure>> beta_curve(const SystemSpec& sys, double beta_lo,
                                                              double beta_hi, double step,
                                                              double target_width,
                                                              const Budgets& budgets = {});

struct Inversion {
    double beta = 0.0;
    double bracket_lo = 0.0;  // tightest beta bracket when not converged
    double bracket_hi = 0.0;
    DimensionEnclosure enclosure;
    bool converged = true;
};

// Locates beta with HD(J(X_beta)) within epsilon of the target, by monotone
// bisection over [0, alphabet size].
Inversion invert_dimension(const SystemSpec& sys, double d_target, double epsilon,
                           const Budgets& budgets = {});

// Anchor-padded blocks a u_v v u'_v over the m-words of an irreducible Markov
// shift, together with the induced composite-map system. Indexing the blocks
// by a beta-shift realizes subshifts whose dimensions sweep [0, HD(J(Z_m))].
struct BlockConstruction {
    int anchor = 0;
    int m = 1;
    double beta = 0.0;
    std::vector<Word> blocks;
    SystemSpec induced;
    int index_alphabet = 0;    // number of blocks M
    int max_connector = 0;     // N
    double log_min_connector_norm = 0.0;  // lower endpoint of log L
    double log_anchor_norm = 0.0;         // lower endpoint of log W

    // C = -ln(K^-3 L^2 W), evaluated so the bound P(Z, h_m) <= C/m stays
    // valid with the stored (outward) constants.
    double pressure_gap_constant(const SystemSpec& base) const;
};

BlockConstruction markov_block_construction(const ShiftSpec& markov, const SystemSpec& sys,
                                            int anchor, int m, double beta,
                                            const Budgets& budgets = {});

struct MarkovInversion {
    int m = 0;
    double beta = 0.0;
    DimensionEnclosure enclosure;
    bool whole_shift = false;  // target met by the shift itself
    bool converged = true;
};

MarkovInversion invert_dimension_markov(const ShiftSpec& markov, const SystemSpec& sys,
                                        double d_target, double epsilon,
                                        const Budgets& budgets = {});

struct ExhaustionRung {
    int truncation = 0;
    std::optional<DimensionEnclosure> enclosure;
    std::string error;  // set when this rung failed; the ladder continues
};

// Dimension ladder over increasing finite truncations of a countable family;
// `factory` maps a truncation size to a refined finite system.
std::vector<ExhaustionRung> exhaustion_dimension(const std::function<SystemSpec(int)>& factory,
                                                 const std::vector<int>& truncations,
                                                 double target_width, const Budgets& budgets = {});

}  // namespace dimspec
