#include "dimspec/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dimspec/betashift.hpp"
#include "dimspec/errors.hpp"
#include "dimspec/graph.hpp"
#include "dimspec/interval.hpp"

namespace dimspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// log-sum-exp with a fixed-shape binary reduction tree, directed per side.

double lse_tree_up(const std::vector<double>& scaled, std::size_t lo, std::size_t hi, double shift) {
    if (hi - lo == 1) return rnd::exp_up(rnd::sub_up(scaled[lo], shift));
    const std::size_t mid = lo + (hi - lo) / 2;
    return rnd::add_up(lse_tree_up(scaled, lo, mid, shift), lse_tree_up(scaled, mid, hi, shift));
}

double lse_tree_down(const std::vector<double>& scaled, std::size_t lo, std::size_t hi, double shift) {
    if (hi - lo == 1) return rnd::exp_down(rnd::sub_down(scaled[lo], shift));
    const std::size_t mid = lo + (hi - lo) / 2;
    return rnd::add_down(lse_tree_down(scaled, lo, mid, shift), lse_tree_down(scaled, mid, hi, shift));
}

// Upper bound for log sum_i exp(t * logw_i), from upper endpoints of logw.
double lse_up(const std::vector<double>& logw_hi, double t) {
    if (logw_hi.empty()) return -kInf;
    if (t == 0.0) {
        // Every weight is exactly 1; the sum is the exact word count.
        return logw_hi.size() == 1 ? 0.0 : rnd::log_up(static_cast<double>(logw_hi.size()));
    }
    std::vector<double> scaled(logw_hi.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = rnd::mul_up(t, logw_hi[i]);
    const double shift = *std::max_element(scaled.begin(), scaled.end());
    const double sum = lse_tree_up(scaled, 0, scaled.size(), shift);
    return rnd::add_up(rnd::log_up(sum), shift);
}

double lse_down(const std::vector<double>& logw_lo, double t) {
    if (logw_lo.empty()) return -kInf;
    if (t == 0.0) {
        return logw_lo.size() == 1 ? 0.0 : rnd::log_down(static_cast<double>(logw_lo.size()));
    }
    std::vector<double> scaled(logw_lo.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = rnd::mul_down(t, logw_lo[i]);
    const double shift = *std::max_element(scaled.begin(), scaled.end());
    const double sum = lse_tree_down(scaled, 0, scaled.size(), shift);
    return rnd::add_down(rnd::log_down(sum), shift);
}

// ---------------------------------------------------------------------------
// Sparse weighted graphs for the spectral bounds.

struct SpectralGraph {
    int states = 0;
    int block_m = 2;                  // window length behind the edge weights
    bool per_state = false;           // weight depends only on the source state
    std::vector<int> row_ptr;         // CSR
    std::vector<int> col;
    std::vector<Interval> edge_logw;  // log of the window sup-norm (per_state: unused)
    std::vector<Interval> state_logw;
    std::vector<std::vector<int>> components;  // cycle SCCs (for lower bounds)

    bool empty() const { return states == 0 || col.empty(); }
};

// Removes states with zero out- or in-degree until stable; only nilpotent
// directions disappear, so the spectral radius is unchanged.
void strip_transient_states(SpectralGraph& g) {
    const int n = g.states;
    std::vector<bool> alive(static_cast<std::size_t>(n), true);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> out_deg(static_cast<std::size_t>(n), 0);
        std::vector<int> in_deg(static_cast<std::size_t>(n), 0);
        for (int s = 0; s < n; ++s) {
            if (!alive[static_cast<std::size_t>(s)]) continue;
            for (int e = g.row_ptr[static_cast<std::size_t>(s)];
                 e < g.row_ptr[static_cast<std::size_t>(s) + 1]; ++e) {
                const int to = g.col[static_cast<std::size_t>(e)];
                if (!alive[static_cast<std::size_t>(to)]) continue;
                ++out_deg[static_cast<std::size_t>(s)];
                ++in_deg[static_cast<std::size_t>(to)];
            }
        }
        for (int s = 0; s < n; ++s) {
            if (alive[static_cast<std::size_t>(s)] &&
                (out_deg[static_cast<std::size_t>(s)] == 0 || in_deg[static_cast<std::size_t>(s)] == 0)) {
                alive[static_cast<std::size_t>(s)] = false;
                changed = true;
            }
        }
    }

    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int s = 0; s < n; ++s)
        if (alive[static_cast<std::size_t>(s)]) remap[static_cast<std::size_t>(s)] = next++;

    SpectralGraph out;
    out.states = next;
    out.block_m = g.block_m;
    out.per_state = g.per_state;
    out.row_ptr.assign(static_cast<std::size_t>(next) + 1, 0);
    if (g.per_state) out.state_logw.resize(static_cast<std::size_t>(next), Interval::point(0.0));
    int filled = 0;
    for (int s = 0; s < n; ++s) {
        const int ns = remap[static_cast<std::size_t>(s)];
        if (ns < 0) continue;
        if (g.per_state)
            out.state_logw[static_cast<std::size_t>(ns)] = g.state_logw[static_cast<std::size_t>(s)];
        for (int e = g.row_ptr[static_cast<std::size_t>(s)];
             e < g.row_ptr[static_cast<std::size_t>(s) + 1]; ++e) {
            const int to = remap[static_cast<std::size_t>(g.col[static_cast<std::size_t>(e)])];
            if (to < 0) continue;
            out.col.push_back(to);
            if (!g.per_state) out.edge_logw.push_back(g.edge_logw[static_cast<std::size_t>(e)]);
            ++filled;
        }
        out.row_ptr[static_cast<std::size_t>(ns) + 1] = filled;
    }
    g = std::move(out);
}

void find_cycle_components(SpectralGraph& g) {
    g.components.clear();
    if (g.states == 0) return;
    std::vector<std::pair<int, int>> edges;
    for (int s = 0; s < g.states; ++s)
        for (int e = g.row_ptr[static_cast<std::size_t>(s)];
             e < g.row_ptr[static_cast<std::size_t>(s) + 1]; ++e)
            edges.emplace_back(s, g.col[static_cast<std::size_t>(e)]);
    if (edges.empty()) return;
    g.components = scc_decomposition(ShiftSpec::markov(g.states, std::move(edges))).components;
}

// Per-edge weights at parameter t, as intervals.
std::vector<Interval> edge_weights_at(const SpectralGraph& g, double t) {
    std::vector<Interval> w(g.col.size(), Interval::point(0.0));
    const Interval tI = Interval::point(t);
    if (g.per_state) {
        std::vector<Interval> sw(static_cast<std::size_t>(g.states), Interval::point(0.0));
        for (int s = 0; s < g.states; ++s)
            sw[static_cast<std::size_t>(s)] = iexp(g.state_logw[static_cast<std::size_t>(s)] * tI);
        for (int s = 0; s < g.states; ++s)
            for (int e = g.row_ptr[static_cast<std::size_t>(s)];
                 e < g.row_ptr[static_cast<std::size_t>(s) + 1]; ++e)
                w[static_cast<std::size_t>(e)] = sw[static_cast<std::size_t>(s)];
        return w;
    }
    const Interval scale = tI / Interval::point(static_cast<double>(g.block_m));
    for (std::size_t e = 0; e < g.col.size(); ++e) w[e] = iexp(g.edge_logw[e] * scale);
    return w;
}

// Midpoint power iteration toward a Perron vector; the estimate only affects
// tightness, never validity of the Collatz-Wielandt ratios below. Stops early
// once the ratio spread settles.
std::vector<double> perron_estimate(const SpectralGraph& g, const std::vector<Interval>& w,
                                    const std::vector<int>& states, int iterations) {
    std::vector<int> index(static_cast<std::size_t>(g.states), -1);
    for (std::size_t i = 0; i < states.size(); ++i)
        index[static_cast<std::size_t>(states[i])] = static_cast<int>(i);
    std::vector<double> v(states.size(), 1.0), u(states.size(), 0.0);
    for (int it = 0; it < iterations; ++it) {
        double norm = 0.0;
        double ratio_min = kInf, ratio_max = 0.0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const int s = states[i];
            double acc = 0.0;
            for (int e = g.row_ptr[static_cast<std::size_t>(s)];
                 e < g.row_ptr[static_cast<std::size_t>(s) + 1]; ++e) {
                const int j = index[static_cast<std::size_t>(g.col[static_cast<std::size_t>(e)])];
                if (j >= 0) acc += w[static_cast<std::size_t>(e)].mid() * v[static_cast<std::size_t>(j)];
            }
            if (v[i] > 0.0) {
                ratio_min = std::min(ratio_min, acc / v[i]);
                ratio_max = std::max(ratio_max, acc / v[i]);
            }
            u[i] = acc + 1e-12 * v[i];  // keeps v positive on periodic graphs
            norm = std::max(norm, u[i]);
        }
        if (norm <= 0.0) return v;
        // floor keeps v strictly positive even when mass concentrates far
        // from some states of a reducible graph
        for (std::size_t i = 0; i < states.size(); ++i) v[i] = std::max(u[i] / norm, 1e-100);
        if (it >= 8 && ratio_max - ratio_min <= 1e-5 * std::max(ratio_max, 1e-300)) break;
    }
    return v;
}

// Collatz-Wielandt bounds: for any positive v, min_i (Mv)_i / v_i <= rho(M)
// and max_i (Mv)_i / v_i >= rho(M), each rounded toward the safe side.
double cw_lower_rho(const SpectralGraph& g, const std::vector<Interval>& w,
                    const std::vector<int>& states) {
    const std::vector<double> v = perron_estimate(g, w, states, 120);
    std::vector<int> index(static_cast<std::size_t>(g.states), -1);
    for (std::size_t i = 0; i < states.size(); ++i)
        index[static_cast<std::size_t>(states[i])] = static_cast<int>(i);
    double rho = kInf;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const int s = states[i];
        double acc = 0.0;
        for (int e = g.row_ptr[static_cast<std::size_t>(s)];
             e < g.row_ptr[static_cast<std::size_t>(s) + 1]; ++e) {
            const int j = index[static_cast<std::size_t>(g.col[static_cast<std::size_t>(e)])];
            if (j >= 0)
                acc = rnd::add_down(acc,
                                    rnd::mul_down(w[static_cast<std::size_t>(e)].lo, v[static_cast<std::size_t>(j)]));
        }
        if (!(v[i] > 0.0)) return 0.0;
        rho = std::min(rho, rnd::div_down(acc, v[i]));
    }
    return (rho == kInf) ? 0.0 : std::max(rho, 0.0);
}

double cw_upper_rho(const SpectralGraph& g, const std::vector<Interval>& w) {
    std::vector<int> all(static_cast<std::size_t>(g.states));
    for (int s = 0; s < g.states; ++s) all[static_cast<std::size_t>(s)] = s;
    const std::vector<double> v = perron_estimate(g, w, all, 120);
    double rho = 0.0;
    for (int s = 0; s < g.states; ++s) {
        double acc = 0.0;
        for (int e = g.row_ptr[static_cast<std::size_t>(s)];
             e < g.row_ptr[static_cast<std::size_t>(s) + 1]; ++e)
            acc = rnd::add_up(acc, rnd::mul_up(w[static_cast<std::size_t>(e)].hi,
                                               v[static_cast<std::size_t>(g.col[static_cast<std::size_t>(e)])]));
        if (!(v[static_cast<std::size_t>(s)] > 0.0))
            throw InternalError("non-positive Perron estimate on a stripped graph");
        rho = std::max(rho, rnd::div_up(acc, v[static_cast<std::size_t>(s)]));
    }
    return rho;
}

// ---------------------------------------------------------------------------
// Incremental word-norm walker shared by the enumeration passes.

struct NormWalker {
    const SystemSpec& sys;
    PartitionMode mode;
    double anchor;
    std::vector<Interval> stack;  // cumulative log derivative along the prefix

    struct CfState {
        Interval pt{1.0, 1.0}, p{0.0, 0.0}, qt{0.0, 0.0}, q{1.0, 1.0};
    };
    std::vector<CfState> cf_stack;

    NormWalker(const SystemSpec& s, PartitionMode md) : sys(s), mode(md), anchor(s.anchor()) {}

    void push(int letter) {
        if (sys.is_continued_fraction()) {
            const CfState st = cf_stack.empty() ? CfState{} : cf_stack.back();
            const Interval d = Interval::point(static_cast<double>(
                sys.as_continued_fraction().digits[static_cast<std::size_t>(letter)]));
            cf_stack.push_back(CfState{st.p, st.pt + st.p * d, st.q, st.qt + st.q * d});
            return;
        }
        Interval step{0.0, 0.0};
        if (sys.is_affine()) {
            step = ilog(Interval::point(sys.as_affine().ratios[static_cast<std::size_t>(letter)]));
        } else {
            const auto& fam = sys.as_block();
            const Word& b = fam.blocks[static_cast<std::size_t>(letter)];
            step = (mode == PartitionMode::SupNorm) ? ilog(word_derivative_norm(*fam.base, b))
                                                    : ilog(word_derivative_at(*fam.base, b, anchor));
        }
        stack.push_back(stack.empty() ? step : stack.back() + step);
    }

    void pop() {
        if (sys.is_continued_fraction())
            cf_stack.pop_back();
        else
            stack.pop_back();
    }

    Interval current_log() const {
        if (sys.is_continued_fraction()) {
            const CfState& st = cf_stack.back();
            const double x = (mode == PartitionMode::SupNorm) ? sys.domain().lo : anchor;
            const Interval den = st.qt * Interval::point(x) + st.q;
            return ilog(Interval::point(1.0) / (den * den));
        }
        return stack.back();
    }
};

}  // namespace

std::string method_name(PressureMethod m) {
    switch (m) {
        case PressureMethod::FullSuperadditive: return "full-superadditive";
        case PressureMethod::MarkovSpectral: return "markov-spectral";
        case PressureMethod::BetaInnerSft: return "beta-inner-sft";
        case PressureMethod::UpperOnly: return "upper-only";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------

struct PressureEngine::Impl {
    SystemSpec sys = SystemSpec::affine({0.5}, {0.0});
    int depth = 2;
    PressureMethod method = PressureMethod::FullSuperadditive;

    Interval logK{0.0, 0.0};
    double log_gamma_lo = 0.0;

    std::vector<std::pair<int, std::vector<double>>> plain;  // (depth, log sup hi)
    std::vector<double> point_lo;                            // full-shift lower material

    // Enumerated boundary-class transfer matrix (nonlinear lower bounds):
    // logs of point derivatives bucketed by (start class, end class).
    int bucket_classes = 0;
    int bucket_depth = 0;
    std::vector<std::vector<double>> buckets;
    std::vector<std::vector<bool>> bucket_compose;

    SpectralGraph outer;  // covers the shift: upper bound
    bool has_outer = false;
    SpectralGraph inner;  // contained in the shift: lower bound
    bool has_inner = false;

    enum class Side { Lower, Upper, Both };
    PressureEnclosure eval(double t, Side side) const;
    double bucket_lower(double t) const;
};

double PressureEngine::Impl::bucket_lower(double t) const {
    const int c = bucket_classes;
    if (c == 0) return -kInf;
    std::vector<double> N(static_cast<std::size_t>(c) * static_cast<std::size_t>(c), 0.0);
    bool any = false;
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) {
            const auto& b = buckets[static_cast<std::size_t>(i * c + j)];
            if (b.empty()) continue;
            N[static_cast<std::size_t>(i * c + j)] = rnd::exp_down(lse_down(b, t));
            any = true;
        }
    if (!any) return -kInf;

    // M = N C with C the 0/1 composability matrix, rounded down entrywise.
    SpectralGraph g;
    g.states = c;
    std::vector<Interval> w;
    g.row_ptr.assign(static_cast<std::size_t>(c) + 1, 0);
    for (int i = 0; i < c; ++i) {
        for (int jp = 0; jp < c; ++jp) {
            double acc = 0.0;
            for (int j = 0; j < c; ++j)
                if (bucket_compose[static_cast<std::size_t>(j)][static_cast<std::size_t>(jp)])
                    acc = rnd::add_down(acc, N[static_cast<std::size_t>(i * c + j)]);
            if (acc > 0.0) {
                g.col.push_back(jp);
                w.push_back(Interval(acc, acc));
            }
        }
        g.row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(g.col.size());
    }
    find_cycle_components(g);
    double best = -kInf;
    for (const auto& comp : g.components) {
        const double rho = cw_lower_rho(g, w, comp);
        if (rho > 0.0) best = std::max(best, rnd::log_down(rho));
    }
    if (best == -kInf) return -kInf;
    const double num = rnd::sub_down(best, rnd::mul_up(t, logK.hi));
    return rnd::div_down(num, static_cast<double>(bucket_depth));
}

PressureEnclosure PressureEngine::Impl::eval(double t, Side side) const {
    if (!(t >= 0.0)) throw InputError("pressure parameter t must be >= 0");

    PressureEnclosure out;
    out.t = t;
    out.depth = depth;
    out.method = method;

    double upper = kInf;
    if (side != Side::Lower) {
        for (const auto& [d, logs] : plain) {
            if (logs.empty()) continue;
            const double l = lse_up(logs, t);
            upper = std::min(upper, l == 0.0 ? 0.0 : rnd::div_up(l, static_cast<double>(d)));
        }
        if (has_outer) {
            const auto w = edge_weights_at(outer, t);
            const double rho = cw_upper_rho(outer, w);
            double u = rnd::log_up(rho);
            if (!outer.per_state)
                u = rnd::add_up(u,
                                rnd::div_up(rnd::mul_up(t, logK.hi), static_cast<double>(outer.block_m)));
            upper = std::min(upper, u);
        }
        if (upper == kInf) throw InternalError("no upper-bound material was built");
    }

    // Any cycle of the shift keeps P(X, t) >= t log gamma_min.
    double lower = (t == 0.0) ? 0.0 : rnd::mul_down(t, log_gamma_lo);
    if (side != Side::Upper) {
        if (method == PressureMethod::FullSuperadditive && !point_lo.empty()) {
            const double num = rnd::sub_down(lse_down(point_lo, t), rnd::mul_up(t, logK.hi));
            lower = std::max(lower, rnd::div_down(num, static_cast<double>(depth)));
        }
        if (has_inner) {
            const auto w = edge_weights_at(inner, t);
            double best = -kInf;
            for (const auto& comp : inner.components) {
                const double rho = cw_lower_rho(inner, w, comp);
                if (rho > 0.0) best = std::max(best, rnd::log_down(rho));
            }
            if (best > -kInf) lower = std::max(lower, best);
        }
        if (!buckets.empty()) lower = std::max(lower, bucket_lower(t));
    }

    if (side == Side::Both && lower > upper) {
        if (lower - upper > 1e-9 + 1e-9 * std::abs(upper))
            throw InternalError("pressure lower bound crossed the upper bound");
        lower = upper;
    }
    out.lower = lower;
    out.upper = upper;
    return out;
}

PressureEngine::PressureEngine(const ShiftSpec& shift, const SystemSpec& sys, int depth)
    : PressureEngine(shift, sys, depth, Options()) {}

PressureEngine::PressureEngine(const ShiftSpec& shift, const SystemSpec& sys, int depth, Options opt) {
    if (depth < 1) throw InputError("pressure depth must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->sys = sys;
    impl->depth = depth;
    impl->logK = ilog(Interval::point(sys.distortion()));
    impl->log_gamma_lo = rnd::log_down(sys.derivative_floor());

    if (shift.alphabet_size() > sys.letter_count())
        throw InputError("shift alphabet exceeds the system letter count");

    const bool factorizes = per_letter_log_derivative(sys).has_value();

    // Effective variant: integer beta is the full shift on its alphabet;
    // beta <= 1 is the singleton orbit (a one-letter loop enumerates it).
    bool as_full = shift.is_full();
    bool as_beta = false;
    if (shift.is_beta()) {
        const auto& b = shift.as_beta();
        if (b.singleton || b.integer_beta)
            as_full = true;
        else
            as_beta = true;
    }
    const bool as_markov = shift.is_markov();

    if (as_full)
        impl->method = PressureMethod::FullSuperadditive;
    else if (as_markov)
        impl->method = PressureMethod::MarkovSpectral;
    else if (as_beta)
        impl->method = PressureMethod::BetaInnerSft;
    else
        impl->method = PressureMethod::UpperOnly;

    if (as_markov) {
        const auto& m = shift.as_markov();
        std::vector<int> all;
        for (int a = 0; a < m.alphabet; ++a) all.push_back(a);
        if (!is_irreducible_restriction(m, all))
            throw PreconditionError(
                "pressure needs an irreducible markov adjacency; pass one component of "
                "scc_decomposition");
    }

    const ShiftSpec walk_shift =
        (shift.is_beta() && shift.as_beta().singleton) ? ShiftSpec::markov(1, {{0, 0}})
        : (shift.is_beta() && shift.as_beta().integer_beta) ? ShiftSpec::full(shift.alphabet_size())
                                                            : shift;

    // Upper bounds must see a superset of the true language; beta window
    // tests and coded factor tests flip to the permissive direction there.
    const LanguageMode upper_mode =
        (as_beta || shift.is_coded()) ? LanguageMode::Permissive : LanguageMode::Certified;

    // -----------------------------------------------------------------------
    // Plain partition tables: all cheap depths (keeps the min over depths
    // monotone on small fixtures) plus the requested depth.
    auto collect_logsup = [&](int d, LanguageMode mode) {
        std::vector<double> out;
        NormWalker walker(sys, PartitionMode::SupNorm);
        walk_language(
            walk_shift, d,
            [&](const std::vector<int>& prefix) {
                walker.push(prefix.back());
                if (static_cast<int>(prefix.size()) == d) {
                    if (out.size() >= opt.max_words)
                        throw ResourceError("partition enumeration exceeded max_words = " +
                                            std::to_string(opt.max_words) + " at depth " +
                                            std::to_string(d));
                    out.push_back(walker.current_log().hi);
                    return false;
                }
                return true;
            },
            [&]() { walker.pop(); }, mode, opt.max_words * 8 + 1024);
        return out;
    };

    for (int d = 1; d <= depth; ++d) {
        if (d < depth) {
            std::uint64_t cnt = 0;
            try {
                cnt = count_language(walk_shift, d, 65536);
            } catch (const ResourceError&) {
                continue;
            }
            if (cnt > 65536) continue;
        }
        impl->plain.emplace_back(d, collect_logsup(d, upper_mode));
    }

    // -----------------------------------------------------------------------
    if (impl->method == PressureMethod::FullSuperadditive) {
        NormWalker walker(sys, PartitionMode::BasePoint);
        walk_language(
            walk_shift, depth,
            [&](const std::vector<int>& prefix) {
                walker.push(prefix.back());
                if (static_cast<int>(prefix.size()) == depth) {
                    if (impl->point_lo.size() >= opt.max_words)
                        throw ResourceError("partition enumeration exceeded max_words = " +
                                            std::to_string(opt.max_words));
                    impl->point_lo.push_back(walker.current_log().lo);
                    return false;
                }
                return true;
            },
            [&]() { walker.pop(); }, LanguageMode::Certified, opt.max_words * 8 + 1024);
    }

    // -----------------------------------------------------------------------
    // Spectral structures.
    const auto letter_logs = per_letter_log_derivative(sys);

    // Largest m whose (m-1)-language fits the state budget.
    auto auto_block_m = [&](const ShiftSpec& lang_shift, int cap) {
        int m = 2;
        for (int probe = 2; probe <= cap; ++probe) {
            std::uint64_t cnt;
            try {
                cnt = count_language(lang_shift, probe - 1,
                                     static_cast<std::size_t>(opt.block_state_budget) + 1);
            } catch (const ResourceError&) {
                break;
            }
            if (cnt > static_cast<std::uint64_t>(opt.block_state_budget)) break;
            m = probe;
        }
        return m;
    };

    // Block graph over the (m-1)-words of lang_shift; edges are its m-words.
    // In permissive mode the graph covers the shift (upper bounds); with an
    // inner margin it is contained in the beta shift (lower bounds).
    auto build_block_graph = [&](const ShiftSpec& lang_shift, int m, LanguageMode mode,
                                 std::optional<double> inner_margin_beta) {
        SpectralGraph g;
        g.block_m = m;
        std::vector<Word> vertices;
        walk_language(
            lang_shift, m - 1,
            [&](const std::vector<int>& prefix) {
                if (static_cast<int>(prefix.size()) == m - 1) {
                    vertices.push_back(Word(prefix));
                    return false;
                }
                return true;
            },
            []() {}, mode, opt.max_words * 8 + 1024);
        std::sort(vertices.begin(), vertices.end());
        g.states = static_cast<int>(vertices.size());
        g.per_state = factorizes;
        if (factorizes) {
            g.state_logw.reserve(vertices.size());
            for (const auto& v : vertices)
                g.state_logw.push_back((*letter_logs)[static_cast<std::size_t>(v.letters.front())]);
        }

        double margin_bound = kInf;
        if (inner_margin_beta) {
            const double beta = *inner_margin_beta;
            const int max_digit = static_cast<int>(std::ceil(beta)) - 1;
            const Interval bI = Interval::point(beta);
            const Interval margin = (Interval::point(max_digit) * ipow(bI, -static_cast<double>(m))) /
                                    (bI - Interval::point(1.0));
            margin_bound = 1.0 - margin.hi;
        }

        const int alphabet = lang_shift.alphabet_size();
        std::vector<std::vector<std::pair<int, Interval>>> rows(vertices.size());
        for (std::size_t ui = 0; ui < vertices.size(); ++ui) {
            for (int a = 0; a < alphabet; ++a) {
                Word window = vertices[ui];
                window.letters.push_back(a);
                bool ok;
                if (inner_margin_beta) {
                    double sum = 0.0, pw = 1.0;
                    for (int x : window.letters) {
                        pw /= *inner_margin_beta;
                        sum += x * pw;
                    }
                    ok = sum < margin_bound - kWindowGuardBand;
                } else if (lang_shift.is_beta() && mode == LanguageMode::Permissive) {
                    ok = true;
                    const double b = lang_shift.as_beta().beta;
                    for (std::size_t i = 0; i < window.size() && ok; ++i) {
                        double sum = 0.0, pw = 1.0;
                        for (std::size_t s = i; s < window.size(); ++s) {
                            pw /= b;
                            sum += window.letters[s] * pw;
                            if (sum >= 1.0 + kWindowGuardBand) {
                                ok = false;
                                break;
                            }
                        }
                    }
                } else {
                    ok = is_word_admissible_mode(lang_shift, window, mode);
                }
                if (!ok) continue;
                const Word target(std::vector<int>(window.letters.begin() + 1, window.letters.end()));
                auto it = std::lower_bound(vertices.begin(), vertices.end(), target);
                if (it == vertices.end() || !(*it == target)) continue;
                Interval elog{0.0, 0.0};
                if (!factorizes) elog = ilog(word_derivative_norm(sys, window));
                rows[ui].emplace_back(static_cast<int>(it - vertices.begin()), elog);
            }
        }
        g.row_ptr.assign(vertices.size() + 1, 0);
        for (std::size_t s = 0; s < rows.size(); ++s) {
            for (auto& [to, elog] : rows[s]) {
                g.col.push_back(to);
                if (!factorizes) g.edge_logw.push_back(elog);
            }
            g.row_ptr[s + 1] = static_cast<int>(g.col.size());
        }
        strip_transient_states(g);
        return g;
    };

    // Outer spectral cover (upper bound).
    {
        int m;
        if (opt.block_length)
            m = std::max(2, *opt.block_length);
        else if (factorizes && (as_full || as_markov))
            m = 2;  // letter-level matrix is already exact for these
        else
            m = auto_block_m(walk_shift, shift.is_coded() ? 6 : 64);
        if (!factorizes) m = std::min(m, 16);
        impl->outer = build_block_graph(walk_shift, m, upper_mode, std::nullopt);
        impl->has_outer = !impl->outer.empty();
    }

    // Variant-specific lower structures.
    if (impl->method == PressureMethod::MarkovSpectral) {
        if (factorizes) {
            SpectralGraph g;
            const auto& m = shift.as_markov();
            g.states = m.alphabet;
            g.block_m = 1;
            g.per_state = true;
            g.state_logw = *letter_logs;
            g.state_logw.resize(static_cast<std::size_t>(m.alphabet));
            std::vector<std::vector<int>> rows(static_cast<std::size_t>(m.alphabet));
            for (auto [a, b] : m.edges) rows[static_cast<std::size_t>(a)].push_back(b);
            g.row_ptr.assign(static_cast<std::size_t>(m.alphabet) + 1, 0);
            for (std::size_t s = 0; s < rows.size(); ++s) {
                for (int to : rows[s]) g.col.push_back(to);
                g.row_ptr[s + 1] = static_cast<int>(g.col.size());
            }
            strip_transient_states(g);
            find_cycle_components(g);
            impl->inner = std::move(g);
            impl->has_inner = !impl->inner.empty() && !impl->inner.components.empty();
        } else {
            impl->bucket_classes = shift.alphabet_size();
            impl->bucket_depth = depth;
            impl->buckets.assign(
                static_cast<std::size_t>(impl->bucket_classes) * static_cast<std::size_t>(impl->bucket_classes),
                {});
            NormWalker walker(sys, PartitionMode::BasePoint);
            walk_language(
                shift, depth,
                [&](const std::vector<int>& prefix) {
                    walker.push(prefix.back());
                    if (static_cast<int>(prefix.size()) == depth) {
                        impl->buckets[static_cast<std::size_t>(prefix.front() * impl->bucket_classes +
                                                               prefix.back())]
                            .push_back(walker.current_log().lo);
                        return false;
                    }
                    return true;
                },
                [&]() { walker.pop(); }, LanguageMode::Certified, opt.max_words * 8 + 1024);
            impl->bucket_compose.assign(
                static_cast<std::size_t>(impl->bucket_classes),
                std::vector<bool>(static_cast<std::size_t>(impl->bucket_classes), false));
            for (auto [a, b] : shift.as_markov().edges)
                impl->bucket_compose[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
        }
    }

    if (impl->method == PressureMethod::BetaInnerSft) {
        const double beta = shift.as_beta().beta;
        if (factorizes) {
            const int m = opt.block_length ? std::max(2, *opt.block_length) : auto_block_m(shift, 64);
            impl->inner = build_block_graph(shift, m, LanguageMode::Certified, beta);
            find_cycle_components(impl->inner);
            impl->has_inner = !impl->inner.empty() && !impl->inner.components.empty();
        } else {
            // Small inner SFT, then the boundary-class matrix over its
            // vertex paths (the spelled words are beta-admissible).
            int small_m = 2;
            for (int probe = 2; probe <= 12; ++probe) {
                std::uint64_t cnt;
                try {
                    cnt = count_language(shift, probe - 1, 65);
                } catch (const ResourceError&) {
                    break;
                }
                if (cnt > 64) break;
                small_m = probe;
            }
            const InnerSftSpec sft = inner_sft(beta, small_m, opt.max_words);
            if (!sft.vertices.empty() && !sft.transitions.empty()) {
                const ShiftSpec vshift = sft.vertex_shift();
                const int n_mark = std::min(depth, 10);
                impl->bucket_classes = static_cast<int>(sft.vertices.size());
                impl->bucket_depth = n_mark;
                impl->buckets.assign(static_cast<std::size_t>(impl->bucket_classes) *
                                         static_cast<std::size_t>(impl->bucket_classes),
                                     {});
                walk_language(
                    vshift, n_mark,
                    [&](const std::vector<int>& prefix) {
                        if (static_cast<int>(prefix.size()) < n_mark) return true;
                        Word spelled;
                        for (int q : prefix) spelled.letters.push_back(sft.first_letter(q));
                        const Interval logd = ilog(word_derivative_at(sys, spelled, sys.anchor()));
                        impl->buckets[static_cast<std::size_t>(prefix.front() * impl->bucket_classes +
                                                               prefix.back())]
                            .push_back(logd.lo);
                        return false;
                    },
                    []() {}, LanguageMode::Certified, opt.max_words * 8 + 1024);
                impl->bucket_compose.assign(
                    static_cast<std::size_t>(impl->bucket_classes),
                    std::vector<bool>(static_cast<std::size_t>(impl->bucket_classes), false));
                for (auto [a, b] : sft.transitions)
                    impl->bucket_compose[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
            }
        }
    }

    impl_ = std::move(impl);
}

PressureEnclosure PressureEngine::at(double t) const { return impl_->eval(t, Impl::Side::Both); }
double PressureEngine::upper_bound(double t) const { return impl_->eval(t, Impl::Side::Upper).upper; }
double PressureEngine::lower_bound(double t) const { return impl_->eval(t, Impl::Side::Lower).lower; }
int PressureEngine::depth() const { return impl_->depth; }
int PressureEngine::block_length() const {
    if (impl_->has_inner) return impl_->inner.block_m;
    if (impl_->has_outer) return impl_->outer.block_m;
    return 0;
}
PressureMethod PressureEngine::method() const { return impl_->method; }

double partition_log(const ShiftSpec& shift, const SystemSpec& sys, int n, double t,
                     PartitionMode mode, std::size_t max_words) {
    if (!(t >= 0.0)) throw InputError("partition parameter t must be >= 0");
    if (n < 1) throw InputError("partition depth must be >= 1");
    const ShiftSpec eff =
        (shift.is_beta() && shift.as_beta().singleton) ? ShiftSpec::markov(1, {{0, 0}}) : shift;
    NormWalker walker(sys, mode);
    std::vector<double> lo, hi;
    walk_language(
        eff, n,
        [&](const std::vector<int>& prefix) {
            walker.push(prefix.back());
            if (static_cast<int>(prefix.size()) == n) {
                if (lo.size() >= max_words)
                    throw ResourceError("partition_log exceeded max_words = " + std::to_string(max_words));
                const Interval l = walker.current_log();
                lo.push_back(l.lo);
                hi.push_back(l.hi);
                return false;
            }
            return true;
        },
        [&]() { walker.pop(); }, LanguageMode::Certified, max_words * 8 + 1024);
    if (lo.empty()) throw InternalError("empty language in partition_log");
    return 0.5 * (lse_down(lo, t) + lse_up(hi, t));
}

PressureEnclosure pressure_enclosure(const ShiftSpec& shift, const SystemSpec& sys, int n, double t,
                                     PressureEngine::Options opt) {
    return PressureEngine(shift, sys, n, opt).at(t);
}

DimensionEnclosure bowen_root(const ShiftSpec& shift, const SystemSpec& sys, int n, double tol,
                              PressureEngine::Options opt) {
    if (!(tol > 0.0)) throw InputError("bowen_root tolerance must be positive");
    const PressureEngine engine(shift, sys, n, opt);

    DimensionEnclosure enc;
    enc.depth = n;

    // h_hi: a t with upper(t) <= 0 certifies P(t) <= 0, hence HD <= t.
    if (engine.upper_bound(0.0) <= 0.0) {
        enc.h_hi = 0.0;
    } else if (engine.upper_bound(1.0) > 0.0) {
        enc.h_hi = 1.0;  // clamped to the ambient dimension
    } else {
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 200 && (b - a) > tol / 4.0; ++it) {
            const double mid = 0.5 * (a + b);
            if (engine.upper_bound(mid) <= 0.0)
                b = mid;
            else
                a = mid;
        }
        enc.h_hi = b;
    }

    // h_lo: a t with lower(t) >= 0 certifies P(t) >= 0, hence HD >= t.
    if (engine.lower_bound(1.0) >= 0.0) {
        enc.h_lo = 1.0;
    } else if (engine.lower_bound(0.0) < 0.0) {
        enc.h_lo = 0.0;
    } else {
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 200 && (b - a) > tol / 4.0; ++it) {
            const double mid = 0.5 * (a + b);
            if (engine.lower_bound(mid) >= 0.0)
                a = mid;
            else
                b = mid;
        }
        enc.h_lo = a;
    }

    if (enc.h_lo > enc.h_hi) {
        if (enc.h_lo - enc.h_hi > 1e-9) throw InternalError("dimension bounds crossed");
        enc.h_lo = enc.h_hi;
    }
    return enc;
}

}  // namespace dimspec
