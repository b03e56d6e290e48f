#include "dimspec/config.hpp"

#include <fstream>
#include <set>

#include "dimspec/errors.hpp"

namespace dimspec::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const json& need(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) fail(path + "." + key, "missing required field");
    return j.at(key);
}

double need_number(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

int need_int(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string need_string(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

Word parse_word(const json& v, const std::string& path) {
    if (v.is_string()) return Word::parse(v.get<std::string>());
    if (v.is_array()) {
        Word w;
        for (const auto& x : v) {
            if (!x.is_number_integer()) fail(path, "word entries must be integers");
            w.letters.push_back(x.get<int>());
        }
        return w;
    }
    fail(path, "expected a word (digit string or integer array)");
}

}  // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    RunConfig cfg;

    // ---- system ----
    const json& sys = need(j, "system", "config");
    cfg.system.family = need_string(sys, "family", "system");
    if (cfg.system.family == "affine") {
        for (const auto& r : need(sys, "ratios", "system")) cfg.system.ratios.push_back(r.get<double>());
        for (const auto& o : need(sys, "offsets", "system")) cfg.system.offsets.push_back(o.get<double>());
        if (cfg.system.ratios.size() != cfg.system.offsets.size())
            fail("system.offsets", "length must match system.ratios");
        if (cfg.system.ratios.empty()) fail("system.ratios", "must not be empty");
    } else if (cfg.system.family == "continued-fraction") {
        for (const auto& d : need(sys, "digits", "system")) cfg.system.digits.push_back(d.get<int>());
        if (cfg.system.digits.empty()) fail("system.digits", "must not be empty");
    } else {
        fail("system.family", "expected \"affine\" or \"continued-fraction\"");
    }
    if (sys.contains("k_override") && !sys.at("k_override").is_null())
        cfg.system.k_override = sys.at("k_override").get<double>();

    // ---- shift ----
    if (j.contains("shift") && !j.at("shift").is_null()) {
        const json& sh = j.at("shift");
        cfg.shift.present = true;
        cfg.shift.kind = need_string(sh, "kind", "shift");
        if (cfg.shift.kind == "full") {
            if (sh.contains("alphabet")) cfg.shift.alphabet = sh.at("alphabet").get<int>();
        } else if (cfg.shift.kind == "beta") {
            cfg.shift.beta = need_number(sh, "beta", "shift");
        } else if (cfg.shift.kind == "markov") {
            cfg.shift.alphabet = need_int(sh, "alphabet", "shift");
            for (const auto& e : need(sh, "edges", "shift")) {
                if (!e.is_array() || e.size() != 2) fail("shift.edges", "expected pairs of letters");
                cfg.shift.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            }
        } else if (cfg.shift.kind == "coded") {
            for (const auto& b : need(sh, "blocks", "shift"))
                cfg.shift.blocks.push_back(parse_word(b, "shift.blocks"));
            cfg.shift.index_beta = need_number(sh, "index_beta", "shift");
        } else {
            fail("shift.kind", "expected one of full|beta|markov|coded");
        }
    }

    // ---- task ----
    const json& task = need(j, "task", "config");
    cfg.task.name = need_string(task, "name", "task");
    const std::set<std::string> known = {"dimension", "invert",  "curve",   "pressure",
                                         "language",  "replace", "exhaust", "markov-invert"};
    if (!known.count(cfg.task.name)) fail("task.name", "unknown task \"" + cfg.task.name + "\"");

    if (cfg.task.name == "pressure") {
        cfg.task.t = need_number(task, "t", "task");
        if (cfg.task.t < 0.0) fail("task.t", "must be >= 0");
        if (task.contains("depth")) cfg.task.depth = task.at("depth").get<int>();
    }
    if (cfg.task.name == "language") {
        cfg.task.n = need_int(task, "n", "task");
        if (cfg.task.n < 0) fail("task.n", "must be >= 0");
    }
    if (cfg.task.name == "invert" || cfg.task.name == "markov-invert") {
        cfg.task.target = need_number(task, "target", "task");
        if (task.contains("epsilon")) cfg.task.epsilon = task.at("epsilon").get<double>();
        if (task.contains("anchor")) cfg.task.anchor = task.at("anchor").get<int>();
    }
    if (cfg.task.name == "curve") {
        cfg.task.beta_lo = need_number(task, "beta_lo", "task");
        cfg.task.beta_hi = need_number(task, "beta_hi", "task");
        cfg.task.step = need_number(task, "step", "task");
        if (!(cfg.task.step > 0.0)) fail("task.step", "must be positive");
    }
    if (cfg.task.name == "replace") {
        cfg.task.beta = need_number(task, "beta", "task");
        cfg.task.beta_prime = need_number(task, "beta_prime", "task");
        cfg.task.gap = need_int(task, "k", "task");
        cfg.task.word = parse_word(need(task, "word", "task"), "task.word");
    }
    if (cfg.task.name == "exhaust") {
        for (const auto& t : need(task, "truncations", "task"))
            cfg.task.truncations.push_back(t.get<int>());
        if (cfg.task.truncations.empty()) fail("task.truncations", "must not be empty");
    }
    if (task.contains("target_width")) cfg.task.target_width = task.at("target_width").get<double>();

    // ---- budgets ----
    if (j.contains("budgets")) {
        const json& b = j.at("budgets");
        if (b.contains("max_depth")) cfg.budgets.max_depth = b.at("max_depth").get<int>();
        if (b.contains("max_words")) cfg.budgets.max_words = b.at("max_words").get<std::size_t>();
        if (b.contains("target_width")) cfg.budgets.target_width = b.at("target_width").get<double>();
        if (b.contains("epsilon")) cfg.budgets.epsilon = b.at("epsilon").get<double>();
        if (b.contains("block_states")) cfg.budgets.block_state_budget = b.at("block_states").get<int>();
    }
    if (cfg.budgets.max_depth < 1) fail("budgets.max_depth", "must be positive");
    if (cfg.budgets.max_words < 1) fail("budgets.max_words", "must be positive");
    if (!(cfg.budgets.target_width > 0.0)) fail("budgets.target_width", "must be positive");
    if (!(cfg.budgets.epsilon > 0.0)) fail("budgets.epsilon", "must be positive");

    // ---- output ----
    if (j.contains("output")) {
        const json& o = j.at("output");
        if (o.contains("format")) cfg.output.format = o.at("format").get<std::string>();
        if (o.contains("path") && !o.at("path").is_null())
            cfg.output.path = o.at("path").get<std::string>();
        if (o.contains("timings")) cfg.output.timings = o.at("timings").get<bool>();
    }
    if (cfg.output.format != "json" && cfg.output.format != "csv")
        fail("output.format", "expected \"json\" or \"csv\"");

    // ---- task/shift coherence ----
    const bool needs_shift = cfg.task.name == "dimension" || cfg.task.name == "pressure" ||
                             cfg.task.name == "language";
    if (needs_shift && !cfg.shift.present) fail("shift", "task \"" + cfg.task.name + "\" needs a shift");
    if (cfg.task.name == "invert" && cfg.shift.present && cfg.shift.kind != "beta" &&
        cfg.shift.kind != "full")
        fail("task.name", "\"invert\" searches over beta shifts; use \"markov-invert\" for markov shifts");
    if (cfg.task.name == "markov-invert" && (!cfg.shift.present || cfg.shift.kind != "markov"))
        fail("shift.kind", "task \"markov-invert\" needs a markov shift");
    if (cfg.task.name == "curve" && cfg.shift.present && cfg.shift.kind != "beta")
        fail("shift.kind", "task \"curve\" sweeps beta shifts");
    if (cfg.task.name == "exhaust" && cfg.system.family != "continued-fraction")
        fail("system.family", "task \"exhaust\" truncates continued-fraction digit sets");

    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_echo(const RunConfig& cfg) {
    json sys{{"family", cfg.system.family}};
    if (cfg.system.family == "affine") {
        sys["ratios"] = cfg.system.ratios;
        sys["offsets"] = cfg.system.offsets;
    } else {
        sys["digits"] = cfg.system.digits;
    }
    if (cfg.system.k_override) sys["k_override"] = *cfg.system.k_override;

    json shift;
    if (cfg.shift.present) {
        shift["kind"] = cfg.shift.kind;
        if (cfg.shift.kind == "beta") shift["beta"] = cfg.shift.beta;
        if (cfg.shift.alphabet) shift["alphabet"] = *cfg.shift.alphabet;
        if (cfg.shift.kind == "markov") {
            json edges = json::array();
            for (auto [a, b] : cfg.shift.edges) edges.push_back({a, b});
            shift["edges"] = edges;
        }
        if (cfg.shift.kind == "coded") {
            json blocks = json::array();
            for (const auto& b : cfg.shift.blocks) blocks.push_back(b.str());
            shift["blocks"] = blocks;
            shift["index_beta"] = cfg.shift.index_beta;
        }
    }

    return json{{"system", sys},
                {"shift", shift},
                {"budgets",
                 {{"max_depth", cfg.budgets.max_depth},
                  {"max_words", cfg.budgets.max_words},
                  {"target_width", cfg.budgets.target_width},
                  {"epsilon", cfg.budgets.epsilon},
                  {"block_states", cfg.budgets.block_state_budget}}}};
}

SystemSpec build_system(const SystemConfig& cfg) {
    if (cfg.family == "affine")
        return refine_domain(SystemSpec::affine(cfg.ratios, cfg.offsets, cfg.k_override));
    return refine_domain(SystemSpec::continued_fraction(cfg.digits, cfg.k_override), 60);
}

ShiftSpec build_shift(const ShiftConfig& cfg, const SystemSpec& sys) {
    if (!cfg.present) return ShiftSpec::full(sys.letter_count());
    if (cfg.kind == "full") return ShiftSpec::full(cfg.alphabet.value_or(sys.letter_count()));
    if (cfg.kind == "beta") return ShiftSpec::beta(cfg.beta);
    if (cfg.kind == "markov") return ShiftSpec::markov(cfg.alphabet.value_or(sys.letter_count()), cfg.edges);
    return ShiftSpec::coded(cfg.blocks, cfg.index_beta);
}

}  // namespace dimspec::cli
