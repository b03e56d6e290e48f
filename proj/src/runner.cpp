#include "dimspec/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "dimspec/betashift.hpp"
#include "dimspec/errors.hpp"

namespace dimspec::cli {

namespace {

using nlohmann::json;

json enclosure_json(const DimensionEnclosure& e) {
    return json{{"h_lo", e.h_lo}, {"h_hi", e.h_hi}, {"depth", e.depth}, {"converged", e.converged}};
}

std::string render17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int thread_cap() {
    const char* env = std::getenv("DIMSPEC_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

// Runs fn(i) for i in [0, count) on up to thread_cap() workers; results land
// in input order so parallelism never changes the output.
template <typename Fn>
void for_each_indexed(std::size_t count, Fn&& fn) {
    const int threads = std::min<int>(thread_cap(), static_cast<int>(count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

}  // namespace

json ResultRecord::to_json() const {
    json j{{"task", task}, {"input", input}, {"outputs", outputs}, {"flags", flags}};
    if (wall_time_ms) j["wall_time_ms"] = *wall_time_ms;
    return j;
}

ResultRecord ResultRecord::from_json(const json& j) {
    ResultRecord r;
    r.task = j.at("task");
    r.input = j.at("input");
    r.outputs = j.at("outputs");
    r.flags = j.at("flags");
    if (j.contains("wall_time_ms")) r.wall_time_ms = j.at("wall_time_ms").get<double>();
    return r;
}

bool ResultRecord::operator==(const ResultRecord& other) const {
    return task == other.task && input == other.input && outputs == other.outputs &&
           flags == other.flags && wall_time_ms == other.wall_time_ms;
}

RunOutcome run(const RunConfig& cfg) {
    RunOutcome out;
    reset_guard_band_hits();
    const json input_echo = config_echo(cfg);

    auto make_record = [&](json task_echo, json outputs, json extra_flags, const Timer& timer) {
        ResultRecord rec;
        rec.task = std::move(task_echo);
        rec.input = input_echo;
        rec.outputs = std::move(outputs);
        rec.flags = std::move(extra_flags);
        if (cfg.output.timings) rec.wall_time_ms = timer.ms();
        return rec;
    };

    try {
        const Timer total;
        const SystemSpec sys = build_system(cfg.system);
        const std::string& name = cfg.task.name;
        const double width = cfg.task.target_width.value_or(cfg.budgets.target_width);
        const double eps = cfg.task.epsilon.value_or(cfg.budgets.epsilon);

        if (name == "dimension") {
            const ShiftSpec shift = build_shift(cfg.shift, sys);
            const Timer timer;
            const DimensionEnclosure e = dimension(shift, sys, width, cfg.budgets);
            out.records.push_back(make_record(json{{"name", name}, {"target_width", width}},
                                              enclosure_json(e),
                                              json{{"converged", e.converged}}, timer));
            if (!e.converged) {
                out.exit_code = 3;
                out.error = "width target not reached within the depth/word budget";
            }
        } else if (name == "pressure") {
            const ShiftSpec shift = build_shift(cfg.shift, sys);
            const int depth = cfg.task.depth.value_or(cfg.budgets.max_depth);
            const Timer timer;
            PressureEngine::Options opt;
            opt.max_words = cfg.budgets.max_words;
            opt.block_state_budget = cfg.budgets.block_state_budget;
            const PressureEnclosure p = pressure_enclosure(shift, sys, depth, cfg.task.t, opt);
            out.records.push_back(make_record(
                json{{"name", name}, {"t", cfg.task.t}, {"depth", depth}},
                json{{"t", p.t},
                     {"depth", p.depth},
                     {"lower", p.lower},
                     {"upper", p.upper},
                     {"method", method_name(p.method)}},
                json{{"converged", true}}, timer));
        } else if (name == "language") {
            const ShiftSpec shift = build_shift(cfg.shift, sys);
            const Timer timer;
            const auto words = language(shift, cfg.task.n, cfg.budgets.max_words);
            json list = json::array();
            for (const auto& w : words) list.push_back(w.str());
            out.records.push_back(make_record(json{{"name", name}, {"n", cfg.task.n}},
                                              json{{"count", words.size()}, {"words", list}},
                                              json{{"converged", true}}, timer));
        } else if (name == "replace") {
            const Timer timer;
            const ReplacementPlan plan =
                sparse_zero_replacement(cfg.task.word, cfg.task.beta, cfg.task.beta_prime, cfg.task.gap);
            Word truncated = plan.result.prefix(cfg.task.word.size());
            out.records.push_back(make_record(
                json{{"name", name},
                     {"beta", cfg.task.beta},
                     {"beta_prime", cfg.task.beta_prime},
                     {"k", cfg.task.gap},
                     {"word", cfg.task.word.str()}},
                json{{"result", truncated.str()},
                     {"positions", plan.positions},
                     {"gap", plan.gap},
                     {"source", plan.source.str()}},
                json{{"converged", true}}, timer));
        } else if (name == "invert") {
            const Timer timer;
            const Inversion inv = invert_dimension(sys, cfg.task.target, eps, cfg.budgets);
            out.records.push_back(make_record(
                json{{"name", name}, {"target", cfg.task.target}, {"epsilon", eps}},
                json{{"beta", inv.beta},
                     {"bracket_lo", inv.bracket_lo},
                     {"bracket_hi", inv.bracket_hi},
                     {"enclosure", enclosure_json(inv.enclosure)}},
                json{{"converged", inv.converged}}, timer));
            if (!inv.converged) {
                out.exit_code = 3;
                out.error = "enclosure width stalled above epsilon";
            }
        } else if (name == "markov-invert") {
            const ShiftSpec shift = build_shift(cfg.shift, sys);
            const Timer timer;
            const MarkovInversion inv =
                invert_dimension_markov(shift, sys, cfg.task.target, eps, cfg.budgets);
            out.records.push_back(make_record(
                json{{"name", name}, {"target", cfg.task.target}, {"epsilon", eps}},
                json{{"m", inv.m},
                     {"beta", inv.beta},
                     {"whole_shift", inv.whole_shift},
                     {"enclosure", enclosure_json(inv.enclosure)}},
                json{{"converged", inv.converged}}, timer));
            if (!inv.converged) {
                out.exit_code = 3;
                out.error = "enclosure width stalled above epsilon";
            }
        } else if (name == "curve") {
            if (!(cfg.task.beta_lo >= 0.0) || !(cfg.task.beta_lo <= cfg.task.beta_hi))
                throw ConfigError("task.beta_lo: curve needs 0 <= beta_lo <= beta_hi");
            if (cfg.task.beta_hi > sys.letter_count() + 1e-12)
                throw ConfigError("task.beta_hi: exceeds the alphabet size");
            std::vector<double> betas;
            for (double b = cfg.task.beta_lo; b <= cfg.task.beta_hi + 1e-12; b += cfg.task.step) {
                betas.push_back(std::min(b, cfg.task.beta_hi));
                if (betas.back() >= cfg.task.beta_hi) break;
            }
            std::vector<ResultRecord> records(betas.size());
            std::vector<std::string> errors(betas.size());
            for_each_indexed(betas.size(), [&](std::size_t i) {
                const Timer timer;
                try {
                    const DimensionEnclosure e =
                        dimension(ShiftSpec::beta(betas[i]), sys, width, cfg.budgets);
                    json outputs = enclosure_json(e);
                    outputs["beta"] = betas[i];
                    records[i] = make_record(json{{"name", name}, {"beta", betas[i]}},
                                             std::move(outputs), json{{"converged", e.converged}},
                                             timer);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            });
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (!errors[i].empty()) {
                    out.exit_code = 3;
                    out.error = errors[i];
                    break;
                }
                out.records.push_back(std::move(records[i]));
            }
        } else if (name == "exhaust") {
            const Timer timer;
            auto factory = [&](int m) {
                std::vector<int> digits;
                for (int d = 1; d <= m; ++d) digits.push_back(d);
                return refine_domain(SystemSpec::continued_fraction(digits, cfg.system.k_override), 60);
            };
            const auto ladder = exhaustion_dimension(factory, cfg.task.truncations, width, cfg.budgets);
            for (const auto& rung : ladder) {
                json outputs{{"truncation", rung.truncation}};
                json flags{{"converged", rung.enclosure && rung.enclosure->converged}};
                if (rung.enclosure)
                    outputs["enclosure"] = enclosure_json(*rung.enclosure);
                else
                    outputs["error"] = rung.error;
                out.records.push_back(make_record(json{{"name", name}, {"truncation", rung.truncation}},
                                                  std::move(outputs), std::move(flags), timer));
            }
        } else {
            throw ConfigError("task.name: unknown task \"" + name + "\"");
        }
        (void)total;
    } catch (const ResourceError& e) {
        out.exit_code = 3;
        out.error = e.what();
    } catch (const ConfigError& e) {
        out.exit_code = 2;
        out.error = e.what();
    } catch (const InputError& e) {
        out.exit_code = 2;
        out.error = e.what();
    } catch (const PreconditionError& e) {
        out.exit_code = 2;
        out.error = e.what();
    }
    // The hit counter accumulates across concurrently computed records, so a
    // per-record read would depend on scheduling; the run total does not.
    for (auto& rec : out.records) rec.flags["guard_band_hits"] = guard_band_hits();
    return out;
}


std::string emit(const std::vector<ResultRecord>& records, const std::string& format) {
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : records) arr.push_back(r.to_json());
        return arr.dump(2) + "\n";
    }
    if (format != "csv") throw ConfigError("output.format: expected \"json\" or \"csv\"");

    // Tables for the sweep-style tasks, flat name,value rows otherwise.
    const std::string task =
        records.empty() ? "" : records.front().task.value("name", std::string());
    std::string out;
    if (task == "curve" || records.empty()) {
        out = "beta,h_lo,h_hi,depth,converged\n";
        for (const auto& r : records) {
            out += render17(r.outputs.at("beta").get<double>()) + "," +
                   render17(r.outputs.at("h_lo").get<double>()) + "," +
                   render17(r.outputs.at("h_hi").get<double>()) + "," +
                   std::to_string(r.outputs.at("depth").get<int>()) + "," +
                   (r.outputs.at("converged").get<bool>() ? "true" : "false") + "\n";
        }
        return out;
    }
    if (task == "exhaust") {
        out = "truncation,h_lo,h_hi,depth,converged,error\n";
        for (const auto& r : records) {
            out += std::to_string(r.outputs.at("truncation").get<int>()) + ",";
            if (r.outputs.contains("enclosure")) {
                const auto& e = r.outputs.at("enclosure");
                out += render17(e.at("h_lo").get<double>()) + "," +
                       render17(e.at("h_hi").get<double>()) + "," +
                       std::to_string(e.at("depth").get<int>()) + "," +
                       (e.at("converged").get<bool>() ? "true" : "false") + ",";
            } else {
                out += ",,,,\"" + r.outputs.at("error").get<std::string>() + "\"";
            }
            out += "\n";
        }
        return out;
    }
    out = "name,value\n";
    for (const auto& r : records) {
        const json flat = r.outputs.flatten();
        for (const auto& [key, value] : flat.items()) {
            std::string rendered;
            if (value.is_number_float())
                rendered = render17(value.get<double>());
            else if (value.is_string())
                rendered = value.get<std::string>();
            else
                rendered = value.dump();
            std::string name = key;
            for (auto& c : name)
                if (c == '/') c = '.';
            if (!name.empty() && name.front() == '.') name.erase(name.begin());
            out += name + "," + rendered + "\n";
        }
    }
    return out;
}

}  // namespace dimspec::cli
