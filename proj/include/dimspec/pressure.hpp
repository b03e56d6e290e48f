#pragma once

#include <memory>
#include <optional>
#include <string>

#include "dimspec/conformal.hpp"
#include "dimspec/shift.hpp"

namespace dimspec {

enum class PartitionMode { SupNorm, BasePoint };

enum class PressureMethod { FullSuperadditive, MarkovSpectral, BetaInnerSft, UpperOnly };

std::string method_name(PressureMethod m);

// Certified two-sided enclosure of the topological pressure P(X, t).
struct PressureEnclosure {
    double t = 0.0;
    int depth = 0;
    double lower = 0.0;
    double upper = 0.0;
    PressureMethod method = PressureMethod::FullSuperadditive;
};

// Certified enclosure of the Hausdorff dimension, clamped to [0, 1].
struct DimensionEnclosure {
    double h_lo = 0.0;
    double h_hi = 1.0;
    int depth = 0;
    bool converged = true;

    double width() const { return h_hi - h_lo; }
};

// log of the level-n partition function: sum over L_n of the t-th power of
// either the sup-norm of |phi_w'| or its value at the domain anchor.
double partition_log(const ShiftSpec& shift, const SystemSpec& sys, int n, double t,
                     PartitionMode mode, std::size_t max_words = (1u << 22));

// Precomputes the t-independent structures (word-norm tables, transfer
// graphs, block SFTs) for one (shift, system, depth) triple so pressure can be
// evaluated repeatedly along a root search.
//
// Upper bounds: min over stored depths of (1/d) log Z_sup(d, t), together
// with a spectral bound log rho_ub + t log K / m over the m-block cover of
// the shift (Collatz-Wielandt max ratio on outward-rounded edge weights).
// Lower bounds per variant: superadditive base-point partitions on full
// shifts; certified spectral-radius lower bounds on transfer matrices for
// Markov shifts; the same applied to an inner margin-SFT for beta shifts.
class PressureEngine {
  public:
    struct Options {
        std::size_t max_words = (1u << 22);
        int block_state_budget = 4096;     // vertex budget for block SFTs
        std::optional<int> block_length;   // override the automatic m
    };

    PressureEngine(const ShiftSpec& shift, const SystemSpec& sys, int depth);
    PressureEngine(const ShiftSpec& shift, const SystemSpec& sys, int depth, Options opt);

    PressureEnclosure at(double t) const;

    // One-sided evaluations (each avoids the other side's spectral work).
    double upper_bound(double t) const;
    double lower_bound(double t) const;

    int depth() const;
    int block_length() const;  // 0 when no spectral structure was built
    PressureMethod method() const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

PressureEnclosure pressure_enclosure(const ShiftSpec& shift, const SystemSpec& sys, int n, double t,
                                     PressureEngine::Options opt = PressureEngine::Options());

// Locates the zero of the pressure enclosure in t by bisection (to tol/4 per
// side), returning certified dimension bounds clamped to [0, 1].
DimensionEnclosure bowen_root(const ShiftSpec& shift, const SystemSpec& sys, int n, double tol,
                              PressureEngine::Options opt = PressureEngine::Options());

}  // namespace dimspec
