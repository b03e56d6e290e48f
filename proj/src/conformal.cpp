#include "dimspec/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dimspec/errors.hpp"

namespace dimspec {

namespace {

// Moebius data for a continued-fraction word: phi_w(x) = (pt*x + p)/(qt*x + q)
// with |det| = 1, from the matrix product of [[0,1],[1,d]] factors.
struct Continuant {
    Interval pt{1.0, 1.0}, p{0.0, 0.0}, qt{0.0, 0.0}, q{1.0, 1.0};  // identity

    void append_digit(int d) {
        // right-multiply by [[0,1],[1,d]]
        const Interval di = Interval::point(static_cast<double>(d));
        const Interval npt = p;
        const Interval np = pt + p * di;
        const Interval nqt = q;
        const Interval nq = qt + q * di;
        pt = npt;
        p = np;
        qt = nqt;
        q = nq;
    }

    // |phi_w'(x)| = 1 / (qt*x + q)^2
    Interval derivative_abs(const Interval& x) const {
        const Interval den = qt * x + q;
        if (den.lo <= 0.0) throw InternalError("continued-fraction denominator not positive");
        return Interval::point(1.0) / (den * den);
    }

    Interval apply(const Interval& x) const {
        // Moebius maps are monotone where the denominator keeps one sign;
        // evaluate at the endpoints and take the hull.
        auto eval = [&](double pt_x) {
            const Interval xi = Interval::point(pt_x);
            return (pt * xi + p) / (qt * xi + q);
        };
        return Interval::hull(eval(x.lo), eval(x.hi));
    }
};

void check_word(const SystemSpec& sys, const Word& w) {
    for (int l : w.letters)
        if (l < 0 || l >= sys.letter_count())
            throw InputError("word letter " + std::to_string(l) + " out of range for system with " +
                             std::to_string(sys.letter_count()) + " letters");
}

Word flatten_blocks(const BlockFamily& fam, const Word& w) {
    Word flat;
    for (int l : w.letters) {
        const Word& b = fam.blocks[static_cast<std::size_t>(l)];
        flat.letters.insert(flat.letters.end(), b.letters.begin(), b.letters.end());
    }
    return flat;
}

enum class DerivKind { Sup, Inf, At };

Interval derivative_over(const SystemSpec& sys, const Word& w, DerivKind kind, double at_x) {
    if (sys.is_affine()) {
        const auto& fam = sys.as_affine();
        Interval prod = Interval::point(1.0);
        for (int l : w.letters) prod = prod * Interval::point(fam.ratios[static_cast<std::size_t>(l)]);
        return prod;
    }
    if (sys.is_continued_fraction()) {
        const auto& fam = sys.as_continued_fraction();
        Continuant c;
        for (int l : w.letters) c.append_digit(fam.digits[static_cast<std::size_t>(l)]);
        // |phi'| = 1/(qt x + q)^2 is decreasing in x, so the sup sits at the
        // left endpoint of the domain and the inf at the right one.
        switch (kind) {
            case DerivKind::Sup: return c.derivative_abs(Interval::point(sys.domain().lo));
            case DerivKind::Inf: return c.derivative_abs(Interval::point(sys.domain().hi));
            case DerivKind::At: return c.derivative_abs(Interval::point(at_x));
        }
    }
    const auto& fam = sys.as_block();
    const Word flat = flatten_blocks(fam, w);
    return derivative_over(*fam.base, flat, kind, at_x);
}

}  // namespace

SystemSpec SystemSpec::affine(std::vector<double> ratios, std::vector<double> offsets,
                              std::optional<double> k_override) {
    if (ratios.empty() || ratios.size() != offsets.size())
        throw InputError("affine family needs matching non-empty ratio and offset lists");
    for (double r : ratios)
        if (!(r > 0.0) || !(r < 1.0)) throw InputError("affine ratios must lie in (0, 1)");
    SystemSpec sys;
    sys.family_ = AffineFamily{std::move(ratios), std::move(offsets)};
    sys.domain_ = Interval(0.0, 1.0);
    sys.k_override_ = k_override;
    sys.recompute_constants();
    return sys;
}

SystemSpec SystemSpec::continued_fraction(std::vector<int> digits,
                                          std::optional<double> k_override) {
    if (digits.empty()) throw InputError("continued-fraction family needs at least one digit");
    std::sort(digits.begin(), digits.end());
    digits.erase(std::unique(digits.begin(), digits.end()), digits.end());
    for (int d : digits)
        if (d < 1) throw InputError("continued-fraction digits must be positive integers");
    SystemSpec sys;
    sys.family_ = ContinuedFractionFamily{std::move(digits)};
    sys.domain_ = Interval(0.0, 1.0);
    sys.k_override_ = k_override;
    sys.recompute_constants();
    return sys;
}

int SystemSpec::letter_count() const {
    if (is_affine()) return static_cast<int>(as_affine().ratios.size());
    if (is_continued_fraction()) return static_cast<int>(as_continued_fraction().digits.size());
    return static_cast<int>(as_block().blocks.size());
}

std::string SystemSpec::family_name() const {
    if (is_affine()) return "affine";
    if (is_continued_fraction()) return "continued-fraction";
    return "block";
}

void SystemSpec::recompute_constants() {
    double s = 0.0, gamma = std::numeric_limits<double>::infinity(), evidence = 1.0, K = 1.0;
    const int n = letter_count();
    for (int e = 0; e < n; ++e) {
        const Word w{e};
        const Interval sup = derivative_over(*this, w, DerivKind::Sup, 0.0);
        const Interval inf = derivative_over(*this, w, DerivKind::Inf, 0.0);
        s = std::max(s, sup.hi);
        gamma = std::min(gamma, inf.lo);
        evidence = std::max(evidence, (sup / inf).hi);
    }
    if (is_affine()) {
        K = 1.0;
    } else if (is_continued_fraction()) {
        // Ratio of derivative values over any word is ((q + qt*u)/(q + qt*l))^2
        // with qt <= q, maximised at qt = q: ((1+u)/(1+l))^2.
        const Interval one = Interval::point(1.0);
        const Interval ratio = (one + Interval::point(domain_.hi)) / (one + Interval::point(domain_.lo));
        K = (ratio * ratio).hi;
    } else {
        K = as_block().base->distortion();
    }
    if (k_override_) {
        if (*k_override_ < evidence)
            throw ConfigError("distortion override " + std::to_string(*k_override_) +
                              " is below observed evidence " + std::to_string(evidence));
        K = std::max(*k_override_, 1.0);
    }
    distortion_ = std::max(K, 1.0);
    contraction_ = s;
    derivative_floor_ = gamma;
}

SystemSpec refine_domain(const SystemSpec& sys, int iterations) {
    if (sys.is_block()) throw InputError("block systems inherit their base domain; refine the base");
    SystemSpec out = sys;
    for (int it = 0; it < iterations; ++it) {
        Interval hull{0.0, 0.0};
        bool first = true;
        for (int e = 0; e < out.letter_count(); ++e) {
            const Interval img = word_apply(out, Word{e}, out.domain_);
            hull = first ? img : Interval::hull(hull, img);
            first = false;
        }
        // The limit set is contained in the image union, so intersecting with
        // the previous domain is sound and keeps the iteration monotone.
        const Interval next(std::max(hull.lo, out.domain_.lo), std::min(hull.hi, out.domain_.hi));
        if (next.lo == out.domain_.lo && next.hi == out.domain_.hi) break;
        out.domain_ = next;
    }
    out.recompute_constants();
    out.refined_ = true;

    if (!(out.contraction_ < 1.0))
        throw ConfigError("domain refinement left the contraction bound at " +
                          std::to_string(out.contraction_) +
                          " >= 1; choose a different digit set or family");

    // Open set condition for affine families: images pairwise interior-
    // disjoint, checked with raw endpoint arithmetic and a small tolerance so
    // exactly tiling rational parameters pass.
    if (out.is_affine()) {
        const auto& fam = out.as_affine();
        std::vector<std::pair<double, double>> images;
        for (std::size_t e = 0; e < fam.ratios.size(); ++e) {
            const double a = fam.ratios[e] * out.domain_.lo + fam.offsets[e];
            const double b = fam.ratios[e] * out.domain_.hi + fam.offsets[e];
            images.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(images.begin(), images.end());
        const double tol = 1e-12 * std::max(1.0, out.domain_.width());
        for (std::size_t i = 0; i + 1 < images.size(); ++i)
            if (images[i].second > images[i + 1].first + tol)
                throw ConfigError("affine images overlap; open set condition fails");
    }
    return out;
}

Interval word_derivative_norm(const SystemSpec& sys, const Word& w) {
    if (w.empty()) throw InputError("derivative norm of the empty word is not defined here");
    check_word(sys, w);
    return derivative_over(sys, w, DerivKind::Sup, 0.0);
}

Interval word_derivative_inf(const SystemSpec& sys, const Word& w) {
    if (w.empty()) throw InputError("derivative inf of the empty word is not defined here");
    check_word(sys, w);
    return derivative_over(sys, w, DerivKind::Inf, 0.0);
}

Interval word_derivative_at(const SystemSpec& sys, const Word& w, double x) {
    if (w.empty()) throw InputError("derivative of the empty word is not defined here");
    check_word(sys, w);
    if (!(x >= sys.domain().lo && x <= sys.domain().hi))
        throw InputError("evaluation point lies outside the domain");
    return derivative_over(sys, w, DerivKind::At, x);
}

Interval word_apply(const SystemSpec& sys, const Word& w, const Interval& x) {
    check_word(sys, w);
    if (sys.is_affine()) {
        const auto& fam = sys.as_affine();
        Interval img = x;
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
            const std::size_t e = static_cast<std::size_t>(*it);
            img = Interval::point(fam.ratios[e]) * img + Interval::point(fam.offsets[e]);
        }
        return img;
    }
    if (sys.is_continued_fraction()) {
        const auto& fam = sys.as_continued_fraction();
        Continuant c;
        for (int l : w.letters) c.append_digit(fam.digits[static_cast<std::size_t>(l)]);
        return w.empty() ? x : c.apply(x);
    }
    const auto& fam = sys.as_block();
    return word_apply(*fam.base, flatten_blocks(fam, w), x);
}

CylinderInterval cylinder_interval(const SystemSpec& sys, const Word& w) {
    return CylinderInterval{w, word_apply(sys, w, sys.domain())};
}

SystemConstants system_constants(const SystemSpec& sys) {
    if (sys.distortion() < 1.0) throw InternalError("distortion constant below 1");
    if (!(sys.contraction() < 1.0))
        throw InternalError("contraction bound not below 1; refine the domain first");
    if (!(sys.derivative_floor() > 0.0)) throw InternalError("derivative floor not positive");
    return SystemConstants{sys.distortion(), sys.contraction(), sys.derivative_floor()};
}

SystemSpec induced_block_system(const SystemSpec& sys, const ShiftSpec& governing,
                                const std::vector<Word>& blocks) {
    if (blocks.empty()) throw InputError("induced system needs at least one block");
    if (sys.is_block()) throw InputError("nested block systems are not supported");
    for (const auto& b : blocks) {
        if (b.empty()) throw InputError("induced blocks must be nonempty");
        if (!is_word_admissible(governing, b))
            throw PreconditionError("block " + b.str() + " is not admissible in the governing shift");
    }
    for (const auto& a : blocks)
        for (const auto& b : blocks)
            if (!is_word_admissible(governing, a + b))
                throw PreconditionError("blocks " + a.str() + " and " + b.str() +
                                        " do not concatenate legally");

    SystemSpec out;
    out.family_ = BlockFamily{std::make_shared<SystemSpec>(sys), blocks};
    out.domain_ = sys.domain();
    out.k_override_ = std::nullopt;
    out.refined_ = sys.refined();
    out.recompute_constants();
    return out;
}

std::optional<std::vector<Interval>> per_letter_log_derivative(const SystemSpec& sys) {
    if (sys.is_affine()) {
        const auto& fam = sys.as_affine();
        std::vector<Interval> out;
        out.reserve(fam.ratios.size());
        for (double r : fam.ratios) out.push_back(ilog(Interval::point(r)));
        return out;
    }
    if (sys.is_block()) {
        const auto& fam = sys.as_block();
        if (!fam.base->is_affine()) return std::nullopt;
        const auto& base = fam.base->as_affine();
        std::vector<Interval> out;
        out.reserve(fam.blocks.size());
        for (const auto& b : fam.blocks) {
            Interval sum = Interval::point(0.0);
            for (int l : b.letters) sum = sum + ilog(Interval::point(base.ratios[static_cast<std::size_t>(l)]));
            out.push_back(sum);
        }
        return out;
    }
    return std::nullopt;
}

}  // namespace dimspec
