#include "cpg/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace cpg {

JsonReader::JsonReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ParseError(fmt::format("{}: expected an object", path_));
}

std::string JsonReader::path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
}

bool JsonReader::has(const std::string& key) const { return node_.contains(key); }

const Json& JsonReader::at(const std::string& key) const {
    auto it = node_.find(key);
    if (it == node_.end()) throw ParseError(fmt::format("{}: missing", path(key)));
    return *it;
}

const Json& JsonReader::raw(const std::string& key) const { return at(key); }

double JsonReader::number(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_number()) throw ParseError(fmt::format("{}: expected a number", path(key)));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(fmt::format("{}: not finite", path(key)));
    return d;
}

double JsonReader::number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::size_t JsonReader::count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ParseError(fmt::format("{}: expected a non-negative integer", path(key)));
    }
    return v.get<std::size_t>();
}

std::uint64_t JsonReader::seed(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ParseError(fmt::format("{}: expected a non-negative integer", path(key)));
    }
    return v.get<std::uint64_t>();
}

bool JsonReader::flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_boolean()) throw ParseError(fmt::format("{}: expected true or false", path(key)));
    return v.get<bool>();
}

std::string JsonReader::text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_string()) throw ParseError(fmt::format("{}: expected a string", path(key)));
    return v.get<std::string>();
}

JsonReader JsonReader::object(const std::string& key) const { return JsonReader(at(key), path(key)); }

void JsonReader::only(std::initializer_list<std::string_view> allowed) const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            throw ParseError(fmt::format("{}: unknown field", path(it.key())));
        }
    }
}

namespace {

// Re-throws ParameterError from parse-time validation with the field path in front.
template <class F>
auto validated(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const ParameterError& e) {
        throw ParseError(fmt::format("{}: {}", path.empty() ? "config" : path, e.what()));
    }
}

}  // namespace

// ---------------------------------------------------------------------------------------

Json to_json(const OscillatorParams& p) {
    return Json{{"tau1", p.tau1}, {"tau2", p.tau2}, {"beta", p.beta},
                {"gamma", p.gamma}, {"alpha", p.alpha}, {"c", p.c}};
}

OscillatorParams oscillator_params_from(const JsonReader& in) {
    in.only({"tau1", "tau2", "beta", "gamma", "alpha", "c"});
    OscillatorParams p;
    p.tau1 = in.number("tau1", p.tau1);
    p.tau2 = in.number("tau2", p.tau2);
    p.beta = in.number("beta", p.beta);
    p.gamma = in.number("gamma", p.gamma);
    p.alpha = in.number("alpha", p.alpha);
    p.c = in.number("c", p.c);
    return p;
}

std::string_view lock_mode_name(LockMode m) { return m == LockMode::warm_up ? "warm_up" : "frozen"; }

LockMode parse_lock_mode(std::string_view s) {
    if (s == "warm_up") return LockMode::warm_up;
    if (s == "frozen") return LockMode::frozen;
    throw ParameterError(fmt::format("unknown lock mode '{}' (warm_up|frozen)", s));
}

std::string_view tau_unit_name(TauUnit u) { return u == TauUnit::ticks ? "ticks" : "seconds"; }

TauUnit parse_tau_unit(std::string_view s) {
    if (s == "ticks") return TauUnit::ticks;
    if (s == "seconds") return TauUnit::seconds;
    throw ParameterError(fmt::format("unknown tau unit '{}' (ticks|seconds)", s));
}

Json to_json(const SimConfig& c) {
    return Json{
        {"duration", c.duration},
        {"lock_phase", c.lock_phase},
        {"tick_rate", c.tick_rate},
        {"thigh_length", c.thigh_length},
        {"shank_length", c.shank_length},
        {"noise_std", c.noise_std},
        {"resamples", c.resamples},
        {"seed", c.seed},
        {"fall_height_ratio", c.fall_height_ratio},
        {"fall_ticks", c.fall_ticks},
        {"frozen_timeout", c.frozen_timeout},
        {"lock_mode", lock_mode_name(c.lock_mode)},
        {"tau_unit", tau_unit_name(c.tau_unit)},
        {"yaw_coupling", c.yaw_coupling},
        {"joint_speed", c.joint_speed},
        {"step_clearance", c.step_clearance},
        {"feedback_scale", c.controller.feedback_scale},
        {"rectified_input", c.controller.rectified_input},
        {"substep_ratio", c.controller.substep_ratio},
        {"max_substeps", c.controller.max_substeps},
    };
}

SimConfig sim_config_from(const JsonReader& in) {
    in.only({"duration", "lock_phase", "tick_rate", "thigh_length", "shank_length", "noise_std",
             "resamples", "seed", "fall_height_ratio", "fall_ticks", "frozen_timeout",
             "lock_mode", "tau_unit", "yaw_coupling", "joint_speed", "step_clearance",
             "feedback_scale", "rectified_input",
             "substep_ratio", "max_substeps"});
    SimConfig c;
    c.duration = in.number("duration", c.duration);
    c.lock_phase = in.number("lock_phase", c.lock_phase);
    c.tick_rate = in.number("tick_rate", c.tick_rate);
    c.thigh_length = in.number("thigh_length", c.thigh_length);
    c.shank_length = in.number("shank_length", c.shank_length);
    c.noise_std = in.number("noise_std", c.noise_std);
    c.resamples = in.count("resamples", c.resamples);
    c.seed = in.seed("seed", c.seed);
    c.fall_height_ratio = in.number("fall_height_ratio", c.fall_height_ratio);
    c.fall_ticks = in.count("fall_ticks", c.fall_ticks);
    c.frozen_timeout = in.number("frozen_timeout", c.frozen_timeout);
    validated(in.path("lock_mode"), [&] {
        c.lock_mode = parse_lock_mode(in.text("lock_mode", std::string(lock_mode_name(c.lock_mode))));
        return 0;
    });
    validated(in.path("tau_unit"), [&] {
        c.tau_unit = parse_tau_unit(in.text("tau_unit", std::string(tau_unit_name(c.tau_unit))));
        return 0;
    });
    c.yaw_coupling = in.number("yaw_coupling", c.yaw_coupling);
    c.joint_speed = in.number("joint_speed", c.joint_speed);
    c.step_clearance = in.number("step_clearance", c.step_clearance);
    c.controller.feedback_scale = in.number("feedback_scale", c.controller.feedback_scale);
    c.controller.rectified_input = in.flag("rectified_input", c.controller.rectified_input);
    c.controller.substep_ratio = in.number("substep_ratio", c.controller.substep_ratio);
    c.controller.max_substeps = in.count("max_substeps", c.controller.max_substeps);
    return c;
}

Json to_json(const HsParams& p) {
    return Json{{"hms", p.hms},   {"hmcr", p.hmcr}, {"par", p.par},
                {"ni", p.ni},     {"seed", p.seed}, {"pitch_mode", pitch_mode_name(p.pitch_mode)},
                {"bandwidth", p.bandwidth}};
}

HsParams hs_params_from(const JsonReader& in) {
    in.only({"hms", "hmcr", "par", "ni", "seed", "pitch_mode", "bandwidth"});
    HsParams p;
    p.hms = in.count("hms", p.hms);
    p.hmcr = in.number("hmcr", p.hmcr);
    p.par = in.number("par", p.par);
    p.ni = in.count("ni", p.ni);
    p.seed = in.seed("seed", p.seed);
    validated(in.path("pitch_mode"), [&] {
        p.pitch_mode = parse_pitch_mode(in.text("pitch_mode", std::string(pitch_mode_name(p.pitch_mode))));
        return 0;
    });
    p.bandwidth = in.number("bandwidth", p.bandwidth);
    return p;
}

Json to_json(const GaParams& p) {
    return Json{{"population", p.population},         {"generations", p.generations},
                {"crossover_rate", p.crossover_rate}, {"mutation_rate", p.mutation_rate},
                {"tournament_size", p.tournament_size}, {"seed", p.seed}};
}

GaParams ga_params_from(const JsonReader& in) {
    in.only({"population", "generations", "crossover_rate", "mutation_rate", "tournament_size", "seed"});
    GaParams p;
    p.population = in.count("population", p.population);
    p.generations = in.count("generations", p.generations);
    p.crossover_rate = in.number("crossover_rate", p.crossover_rate);
    p.mutation_rate = in.number("mutation_rate", p.mutation_rate);
    p.tournament_size = in.count("tournament_size", p.tournament_size);
    p.seed = in.seed("seed", p.seed);
    return p;
}

Json to_json(const SearchBounds& b) {
    if (b.size() == genome_size) {
        Json out = Json::object();
        for (std::size_t i = 0; i < b.size(); ++i) {
            out[std::string(gene_name(i))] = Json::array({b[i].lower, b[i].upper});
        }
        return out;
    }
    Json out = Json::array();
    for (const Interval& iv : b.intervals()) out.push_back(Json::array({iv.lower, iv.upper}));
    return out;
}

namespace {

Interval interval_from(const Json& node, const std::string& path) {
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number()) {
        throw ParseError(fmt::format("{}: expected [lower, upper]", path));
    }
    return {node[0].get<double>(), node[1].get<double>()};
}

}  // namespace

SearchBounds search_bounds_from(const Json& node, const std::string& path) {
    std::vector<Interval> intervals;
    if (node.is_object()) {
        // Partial objects override the gait defaults gene by gene.
        JsonReader in(node, path);
        const SearchBounds defaults = SearchBounds::gait_defaults();
        for (auto it = node.begin(); it != node.end(); ++it) {
            bool known = false;
            for (std::size_t i = 0; i < genome_size; ++i) known = known || it.key() == gene_name(i);
            if (!known) throw ParseError(fmt::format("{}: unknown gene", in.path(it.key())));
        }
        for (std::size_t i = 0; i < genome_size; ++i) {
            const std::string key(gene_name(i));
            intervals.push_back(in.has(key) ? interval_from(in.raw(key), in.path(key)) : defaults[i]);
        }
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            intervals.push_back(interval_from(node[i], fmt::format("{}[{}]", path, i)));
        }
    } else {
        throw ParseError(fmt::format("{}: expected an object or an array", path));
    }
    return validated(path, [&] { return SearchBounds(std::move(intervals)); });
}

Json to_json(const Genome& g) {
    Json out = Json::object();
    for (std::size_t i = 0; i < genome_size; ++i) out[std::string(gene_name(i))] = g.values[i];
    return out;
}

Genome genome_from(const JsonReader& in) {
    in.only({"tau1", "tau2", "alpha", "beta", "gamma", "c", "w11", "w12", "b1", "b2"});
    Genome g;
    for (std::size_t i = 0; i < genome_size; ++i) g.values[i] = in.number(std::string(gene_name(i)));
    return g;
}

Json to_json(const SimResult& r) {
    Json out{{"x", r.x},
             {"y", r.y},
             {"fell", r.fell},
             {"fall_time", r.fall_time ? Json(*r.fall_time) : Json(nullptr)},
             {"fitness", r.fitness},
             {"cause", fall_cause_name(r.cause)},
             {"exchanges", r.exchanges}};
    return out;
}

// ---------------------------------------------------------------------------------------

Json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError(fmt::format("{}: cannot open for reading", file.string()));
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", file.string(), e.what()));
    }
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("{}: cannot open for writing", file.string()));
    out << text;
    out.flush();
    if (!out) throw IoError(fmt::format("{}: write failed", file.string()));
}

void write_json_file(const std::filesystem::path& file, const Json& value) {
    write_text_file(file, value.dump(2) + "\n");
}

Genome load_genome(const std::filesystem::path& file) {
    const Json doc = read_json_file(file);
    if (!doc.is_object()) throw ParseError(fmt::format("{}: expected an object", file.string()));
    if (doc.contains("genome")) return genome_from(JsonReader(doc, file.string()).object("genome"));
    return genome_from(JsonReader(doc, file.string()));
}

}  // namespace cpg
