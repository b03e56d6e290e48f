#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "dimspec/interval.hpp"
#include "dimspec/shift.hpp"
#include "dimspec/word.hpp"

namespace dimspec {

// phi_e(x) = ratio_e * x + offset_e, ratios in (0,1).
struct AffineFamily {
    std::vector<double> ratios;
    std::vector<double> offsets;
};

// phi_d(x) = 1 / (d + x) for digits d >= 1.
struct ContinuedFractionFamily {
    std::vector<int> digits;
};

// Letters are composite words of a base system; derivative data is evaluated
// through the base so no certification is lost to re-stored constants.
struct BlockFamily {
    std::shared_ptr<const class SystemSpec> base;
    std::vector<Word> blocks;
};

// A 1-D conformal construction: map family, common domain interval Y, and the
// certified constants consumed by the pressure bounds (distortion K >= 1,
// contraction s < 1, derivative floor gamma_min > 0).
class SystemSpec {
  public:
    static SystemSpec affine(std::vector<double> ratios, std::vector<double> offsets,
                             std::optional<double> k_override = std::nullopt);
    static SystemSpec continued_fraction(std::vector<int> digits,
                                         std::optional<double> k_override = std::nullopt);

    int letter_count() const;
    const Interval& domain() const { return domain_; }
    double distortion() const { return distortion_; }        // upper bound on K
    double contraction() const { return contraction_; }      // upper bound on s
    double derivative_floor() const { return derivative_floor_; }  // lower bound
    double anchor() const { return domain_.mid(); }
    bool refined() const { return refined_; }

    bool is_affine() const { return std::holds_alternative<AffineFamily>(family_); }
    bool is_continued_fraction() const {
        return std::holds_alternative<ContinuedFractionFamily>(family_);
    }
    bool is_block() const { return std::holds_alternative<BlockFamily>(family_); }
    const AffineFamily& as_affine() const { return std::get<AffineFamily>(family_); }
    const ContinuedFractionFamily& as_continued_fraction() const {
        return std::get<ContinuedFractionFamily>(family_);
    }
    const BlockFamily& as_block() const { return std::get<BlockFamily>(family_); }
    std::string family_name() const;

    friend SystemSpec refine_domain(const SystemSpec& sys, int iterations);
    friend SystemSpec induced_block_system(const SystemSpec& sys, const ShiftSpec& governing,
                                           const std::vector<Word>& blocks);

  private:
    SystemSpec() = default;
    void recompute_constants();

    std::variant<AffineFamily, ContinuedFractionFamily, BlockFamily> family_;
    Interval domain_{0.0, 1.0};
    double distortion_ = 1.0;
    double contraction_ = 1.0;
    double derivative_floor_ = 0.0;
    std::optional<double> k_override_;
    bool refined_ = false;
};

// Interval hull of the union of the letter images, iterated; recomputes the
// constants on the shrunken domain. Throws ConfigError when the contraction
// bound cannot be brought below 1 within the budget.
SystemSpec refine_domain(const SystemSpec& sys, int iterations = 20);

// sup over the domain of |phi_w'|. Empty words are an input error.
Interval word_derivative_norm(const SystemSpec& sys, const Word& w);

// inf over the domain of |phi_w'|.
Interval word_derivative_inf(const SystemSpec& sys, const Word& w);

// Exact chain-rule value |phi_w'(x)| at a point of the domain.
Interval word_derivative_at(const SystemSpec& sys, const Word& w, double x);

// phi_w applied to an interval, outward rounded.
Interval word_apply(const SystemSpec& sys, const Word& w, const Interval& x);

struct CylinderInterval {
    Word word;
    Interval box;
};

// phi_w(Y); the empty prefix yields Y itself.
CylinderInterval cylinder_interval(const SystemSpec& sys, const Word& w);

struct SystemConstants {
    double distortion;
    double contraction;
    double derivative_floor;
};

// Constants of a refined system, with invariant checks (K >= 1, s < 1).
SystemConstants system_constants(const SystemSpec& sys);

// Repackages composite maps phi_block as the letters of a new system. Blocks
// must be admissible and pairwise composable in the governing shift.
SystemSpec induced_block_system(const SystemSpec& sys, const ShiftSpec& governing,
                                const std::vector<Word>& blocks);

// Per-letter log|phi_e'| when the derivative is constant on the domain
// (affine families, and blocks over them); nullopt otherwise. Lets transfer
// matrices factor exactly.
std::optional<std::vector<Interval>> per_letter_log_derivative(const SystemSpec& sys);

}  // namespace dimspec
