#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dimspec/betashift.hpp"
#include "dimspec/conformal.hpp"
#include "dimspec/graph.hpp"
#include "dimspec/pressure.hpp"
#include "dimspec/shift.hpp"
#include "dimspec/spectrum.hpp"

namespace py = pybind11;
using namespace dimspec;

namespace {

Word to_word(const std::vector<int>& letters) { return Word(letters); }

Budgets make_budgets(int max_depth, std::size_t max_words, double target_width, double epsilon,
                     int block_states) {
    Budgets b;
    b.max_depth = max_depth;
    b.max_words = max_words;
    b.target_width = target_width;
    b.epsilon = epsilon;
    b.block_state_budget = block_states;
    return b;
}

}  // namespace

PYBIND11_MODULE(_dimspec, m) {
    m.doc() = "Certified Hausdorff dimension enclosures for shift-generated conformal "
              "constructions";

    py::class_<ShiftSpec>(m, "ShiftSpec")
        .def_property_readonly("kind", &ShiftSpec::kind)
        .def_property_readonly("alphabet_size", &ShiftSpec::alphabet_size)
        .def("__repr__", [](const ShiftSpec& s) {
            return "<ShiftSpec " + s.kind() + " on " + std::to_string(s.alphabet_size()) + " letters>";
        });

    m.def("full_shift", &ShiftSpec::full, py::arg("alphabet"));
    m.def("beta_shift", &ShiftSpec::beta, py::arg("beta"));
    m.def(
        "markov_shift",
        [](int alphabet, const std::vector<std::pair<int, int>>& edges) {
            return ShiftSpec::markov(alphabet, edges);
        },
        py::arg("alphabet"), py::arg("edges"));
    m.def(
        "coded_shift",
        [](const std::vector<std::vector<int>>& blocks, double index_beta) {
            std::vector<Word> ws;
            for (const auto& b : blocks) ws.push_back(to_word(b));
            return ShiftSpec::coded(ws, index_beta);
        },
        py::arg("blocks"), py::arg("index_beta"));

    py::class_<SystemSpec>(m, "SystemSpec")
        .def_property_readonly("letter_count", &SystemSpec::letter_count)
        .def_property_readonly("distortion", &SystemSpec::distortion)
        .def_property_readonly("contraction", &SystemSpec::contraction)
        .def_property_readonly("derivative_floor", &SystemSpec::derivative_floor)
        .def_property_readonly("domain",
                               [](const SystemSpec& s) {
                                   return std::make_pair(s.domain().lo, s.domain().hi);
                               })
        .def("__repr__", [](const SystemSpec& s) {
            return "<SystemSpec " + s.family_name() + " with " + std::to_string(s.letter_count()) +
                   " letters>";
        });

    m.def(
        "affine_system",
        [](const std::vector<double>& ratios, const std::vector<double>& offsets,
           std::optional<double> k_override) {
            return refine_domain(SystemSpec::affine(ratios, offsets, k_override));
        },
        py::arg("ratios"), py::arg("offsets"), py::arg("k_override") = py::none());
    m.def(
        "continued_fraction_system",
        [](const std::vector<int>& digits, std::optional<double> k_override) {
            return refine_domain(SystemSpec::continued_fraction(digits, k_override), 60);
        },
        py::arg("digits"), py::arg("k_override") = py::none());

    m.def(
        "is_word_admissible",
        [](const ShiftSpec& spec, const std::vector<int>& w) {
            return is_word_admissible(spec, to_word(w));
        },
        py::arg("shift"), py::arg("word"));
    m.def(
        "language",
        [](const ShiftSpec& spec, int n, std::size_t max_words) {
            std::vector<std::vector<int>> out;
            for (const auto& w : language(spec, n, max_words)) out.push_back(w.letters);
            return out;
        },
        py::arg("shift"), py::arg("n"), py::arg("max_words") = std::size_t{1} << 22);
    m.def(
        "count_language",
        [](const ShiftSpec& spec, int n, std::size_t max_words) {
            return count_language(spec, n, max_words);
        },
        py::arg("shift"), py::arg("n"), py::arg("max_words") = std::size_t{1} << 22);

    m.def(
        "scc_decomposition",
        [](const ShiftSpec& spec) {
            const SccDecomposition d = scc_decomposition(spec);
            return std::make_pair(d.components, d.maximal_flags);
        },
        py::arg("markov_shift"));
    m.def(
        "connecting_words",
        [](const ShiftSpec& spec, const std::vector<int>& component) {
            const ConnectorTable t = connecting_words(spec, component);
            std::map<std::pair<int, int>, std::vector<int>> words;
            for (const auto& [k, w] : t.words) words[k] = w.letters;
            return std::make_pair(words, t.max_length);
        },
        py::arg("markov_shift"), py::arg("component"));

    m.def(
        "greedy_expansion",
        [](double t, double beta, int n) { return greedy_expansion(t, beta, n).letters; },
        py::arg("t"), py::arg("beta"), py::arg("n"));
    m.def("delta_bound", &delta_bound, py::arg("beta"), py::arg("k"));
    m.def(
        "replace_word",
        [](const std::vector<int>& v, double beta, double beta_prime, int k) {
            return replace_word(to_word(v), beta, beta_prime, k).letters;
        },
        py::arg("word"), py::arg("beta"), py::arg("beta_prime"), py::arg("k"));
    m.def(
        "sparse_zero_replacement",
        [](const std::vector<int>& y, double beta, double beta_prime, int k) {
            const ReplacementPlan p = sparse_zero_replacement(to_word(y), beta, beta_prime, k);
            py::dict out;
            out["positions"] = p.positions;
            out["source"] = p.source.letters;
            out["result"] = p.result.letters;
            out["gap"] = p.gap;
            return out;
        },
        py::arg("word"), py::arg("beta"), py::arg("beta_prime"), py::arg("k"));

    m.def(
        "word_derivative_norm",
        [](const SystemSpec& sys, const std::vector<int>& w) {
            const Interval i = word_derivative_norm(sys, to_word(w));
            return std::make_pair(i.lo, i.hi);
        },
        py::arg("system"), py::arg("word"));
    m.def(
        "cylinder_interval",
        [](const SystemSpec& sys, const std::vector<int>& w) {
            const CylinderInterval c = cylinder_interval(sys, to_word(w));
            return std::make_pair(c.box.lo, c.box.hi);
        },
        py::arg("system"), py::arg("word"));

    py::class_<PressureEnclosure>(m, "PressureEnclosure")
        .def_readonly("t", &PressureEnclosure::t)
        .def_readonly("depth", &PressureEnclosure::depth)
        .def_readonly("lower", &PressureEnclosure::lower)
        .def_readonly("upper", &PressureEnclosure::upper)
        .def_property_readonly("method",
                               [](const PressureEnclosure& p) { return method_name(p.method); })
        .def("__repr__", [](const PressureEnclosure& p) {
            return "<PressureEnclosure t=" + std::to_string(p.t) + " [" + std::to_string(p.lower) +
                   ", " + std::to_string(p.upper) + "]>";
        });

    py::class_<DimensionEnclosure>(m, "DimensionEnclosure")
        .def_readonly("h_lo", &DimensionEnclosure::h_lo)
        .def_readonly("h_hi", &DimensionEnclosure::h_hi)
        .def_readonly("depth", &DimensionEnclosure::depth)
        .def_readonly("converged", &DimensionEnclosure::converged)
        .def_property_readonly("width", &DimensionEnclosure::width)
        .def("__repr__", [](const DimensionEnclosure& e) {
            return "<DimensionEnclosure [" + std::to_string(e.h_lo) + ", " + std::to_string(e.h_hi) +
                   "] depth=" + std::to_string(e.depth) + ">";
        });

    m.def(
        "pressure_enclosure",
        [](const ShiftSpec& shift, const SystemSpec& sys, int n, double t) {
            return pressure_enclosure(shift, sys, n, t);
        },
        py::arg("shift"), py::arg("system"), py::arg("depth"), py::arg("t"));
    m.def(
        "bowen_root",
        [](const ShiftSpec& shift, const SystemSpec& sys, int n, double tol) {
            return bowen_root(shift, sys, n, tol);
        },
        py::arg("shift"), py::arg("system"), py::arg("depth"), py::arg("tol"));

    m.def(
        "dimension",
        [](const ShiftSpec& shift, const SystemSpec& sys, double target_width, int max_depth,
           std::size_t max_words) {
            return dimension(shift, sys, target_width,
                             make_budgets(max_depth, max_words, target_width, 0.01, 4096));
        },
        py::arg("shift"), py::arg("system"), py::arg("target_width") = 0.05,
        py::arg("max_depth") = 20, py::arg("max_words") = std::size_t{1} << 22);

    m.def(
        "invert_dimension",
        [](const SystemSpec& sys, double d_target, double epsilon, int max_depth) {
            const Inversion inv =
                invert_dimension(sys, d_target, epsilon, make_budgets(max_depth, 1u << 22, 0.05, epsilon, 4096));
            py::dict out;
            out["beta"] = inv.beta;
            out["bracket"] = std::make_pair(inv.bracket_lo, inv.bracket_hi);
            out["enclosure"] = py::cast(inv.enclosure);
            out["converged"] = inv.converged;
            return out;
        },
        py::arg("system"), py::arg("target"), py::arg("epsilon") = 0.01, py::arg("max_depth") = 20);

    m.def(
        "beta_curve",
        [](const SystemSpec& sys, double lo, double hi, double step, double target_width) {
            return beta_curve(sys, lo, hi, step, target_width);
        },
        py::arg("system"), py::arg("beta_lo"), py::arg("beta_hi"), py::arg("step"),
        py::arg("target_width") = 0.05);

    m.def(
        "invert_dimension_markov",
        [](const ShiftSpec& markov, const SystemSpec& sys, double d_target, double epsilon) {
            const MarkovInversion inv = invert_dimension_markov(markov, sys, d_target, epsilon);
            py::dict out;
            out["m"] = inv.m;
            out["beta"] = inv.beta;
            out["whole_shift"] = inv.whole_shift;
            out["enclosure"] = py::cast(inv.enclosure);
            out["converged"] = inv.converged;
            return out;
        },
        py::arg("markov_shift"), py::arg("system"), py::arg("target"), py::arg("epsilon") = 0.01);

    m.def(
        "exhaustion_dimension",
        [](const std::vector<int>& truncations, double target_width) {
            auto factory = [](int mth) {
                std::vector<int> digits;
                for (int d = 1; d <= mth; ++d) digits.push_back(d);
                return refine_domain(SystemSpec::continued_fraction(digits), 60);
            };
            py::list out;
            for (const auto& rung : exhaustion_dimension(factory, truncations, target_width)) {
                py::dict r;
                r["truncation"] = rung.truncation;
                if (rung.enclosure)
                    r["enclosure"] = py::cast(*rung.enclosure);
                else
                    r["error"] = rung.error;
                out.append(std::move(r));
            }
            return out;
        },
        py::arg("truncations"), py::arg("target_width") = 0.05);

    m.def("guard_band_hits", &guard_band_hits);
    m.def("reset_guard_band_hits", &reset_guard_band_hits);
}
