#pragma once

// JSON (de)serialization of worlds, world specs, planner configs and runs.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aptstar/geometry.hpp"
#include "aptstar/planner/problem.hpp"
#include "aptstar/worlds.hpp"

namespace aptstar {

using Json = nlohmann::json;

/// Malformed or unknown configuration input.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] inline Json toJson(const State& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

[[nodiscard]] inline State stateFromJson(const Json& j) {
    const auto v = j.get<std::vector<double>>();
    State x(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Eigen::Index>(i)] = v[i];
    return x;
}

[[nodiscard]] inline Json toJson(const Box& b) { return {{"min", toJson(b.lo())}, {"max", toJson(b.hi())}}; }

[[nodiscard]] inline Json toJson(const World& w) {
    Json obstacles = Json::array();
    for (const auto& o : w.obstacles()) obstacles.push_back(toJson(o));
    return {{"dimension", w.dimension()}, {"bounds", toJson(w.bounds())}, {"obstacles", obstacles}};
}

[[nodiscard]] inline World worldFromJson(const Json& j) {
    try {
        auto box = [](const Json& b) { return Box(stateFromJson(b.at("min")), stateFromJson(b.at("max"))); };
        Box bounds = box(j.at("bounds"));
        if (j.contains("dimension") && j.at("dimension").get<int>() != bounds.dimension()) {
            throw ConfigError("world dimension does not match its bounds");
        }
        std::vector<Box> obstacles;
        for (const auto& o : j.value("obstacles", Json::array())) obstacles.push_back(box(o));
        return World(std::move(bounds), std::move(obstacles));
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad world file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad world file: ") + e.what());
    }
}

[[nodiscard]] inline Json toJson(const WorldSpec& s) {
    Json j = {{"family", std::string(toString(s.family))}, {"dimension", s.dimension}, {"seed", s.seed}};
    if (s.family == WorldFamily::DividingWall) {
        j["gap_count"] = s.gap_count;
        if (s.gap_width) j["gap_width"] = *s.gap_width;
        j["gap_width_range"] = s.gap_width_range;
        j["wall_thickness"] = s.wall_thickness;
    } else if (s.family == WorldFamily::RandomRectangles) {
        j["obstacle_count"] = s.obstacle_count;
        j["width_range"] = s.width_range;
    }
    return j;
}

[[nodiscard]] inline WorldSpec worldSpecFromJson(const Json& j) {
    try {
        WorldSpec s;
        s.family = parseWorldFamily(j.at("family").get<std::string>());
        s.dimension = j.value("dimension", s.dimension);
        s.seed = j.value("seed", s.seed);
        s.gap_count = j.value("gap_count", s.gap_count);
        if (j.contains("gap_width")) s.gap_width = j.at("gap_width").get<double>();
        s.gap_width_range = j.value("gap_width_range", s.gap_width_range);
        s.wall_thickness = j.value("wall_thickness", s.wall_thickness);
        s.obstacle_count = j.value("obstacle_count", s.obstacle_count);
        s.width_range = j.value("width_range", s.width_range);
        return s;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad world spec: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad world spec: ") + e.what());
    }
}

namespace detail {

// {"a": {"b": 1}} -> {"a.b": 1}; already-dotted keys pass through.
inline void flatten(const Json& j, const std::string& prefix, std::map<std::string, Json>& out) {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            flatten(value, name, out);
        } else {
            out[name] = value;
        }
    }
}

}  // namespace detail

/// Planner configuration from nested or dotted keys. Unknown keys are errors.
[[nodiscard]] inline PlannerConfig plannerConfigFromJson(const Json& j, PlannerConfig c = {}) {
    if (!j.is_object()) throw ConfigError("planner config must be a JSON object");
    std::map<std::string, Json> flat;
    detail::flatten(j, "", flat);
    std::optional<long long> m_default;
    try {
        for (const auto& [key, v] : flat) {
            if (key == "max_time") c.max_time = v.is_null() ? kInfinity : v.get<double>();
            else if (key == "max_iterations") c.max_iterations = v.get<long long>();
            else if (key == "goal_bias") c.goal_bias = v.get<double>();
            else if (key == "eta") c.eta = v.get<double>();
            else if (key == "rewire_factor") c.rewire_factor = v.get<double>();
            else if (key == "motion_resolution") c.motion_resolution = v.get<double>();
            else if (key == "max_edge_length") c.max_edge_length = v.get<double>();
            else if (key == "default_batch") c.default_batch = v.get<long long>();
            else if (key == "adaptive_batch") c.adaptive_batch = v.get<bool>();
            else if (key == "prolate_neighbors") c.prolate_neighbors = v.get<bool>();
            else if (key == "seed") c.rng_seed = v.get<std::uint64_t>();
            else if (key == "neighbor.k_e") c.neighbor.k_e = v.get<double>();
            else if (key == "neighbor.k") c.neighbor.k = v.get<double>();
            else if (key == "neighbor.phi_threshold") c.neighbor.phi_threshold = v.get<double>();
            else if (key == "neighbor.max_shrink_rounds") c.neighbor.max_shrink_rounds = v.get<int>();
            else if (key == "neighbor.min_pair_distance") c.neighbor.min_pair_distance = v.get<double>();
            else if (key == "neighbor.max_prolongation") c.neighbor.max_prolongation = v.get<double>();
            else if (key == "batch.m_min") c.batch.m_min = v.get<long long>();
            else if (key == "batch.m_max") c.batch.m_max = v.get<long long>();
            else if (key == "batch.m_default") m_default = v.get<long long>();
            else if (key == "charge.schedule") c.charge.schedule = parseChargeSchedule(v.get<std::string>());
            else if (key == "charge.q_min") c.charge.q_min = v.get<double>();
            else if (key == "charge.q_max") c.charge.q_max = v.get<double>();
            else if (key == "charge.epsilon") c.charge.epsilon = v.get<double>();
            else if (key == "charge.beta") c.charge.beta = v.get<double>();
            else if (key == "charge.alpha") c.charge.alpha = v.get<int>();
            else if (key == "charge.iteration_steps") c.charge.iteration_steps = v.get<int>();
            else throw ConfigError("unknown config key: " + key);
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (m_default) {
        c.default_batch = *m_default;
        if (!flat.contains("batch.m_max")) c.batch.m_max = 2 * *m_default - c.batch.m_min;
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

[[nodiscard]] inline Json toJson(const PlannerConfig& c) {
    return {
        {"max_time", std::isfinite(c.max_time) ? Json(c.max_time) : Json(nullptr)},
        {"max_iterations", c.max_iterations},
        {"goal_bias", c.goal_bias},
        {"eta", c.eta},
        {"rewire_factor", c.rewire_factor},
        {"motion_resolution", c.motion_resolution},
        {"max_edge_length", c.max_edge_length},
        {"default_batch", c.default_batch},
        {"adaptive_batch", c.adaptive_batch},
        {"prolate_neighbors", c.prolate_neighbors},
        {"seed", c.rng_seed},
        {"neighbor",
         {{"k_e", c.neighbor.k_e},
          {"k", c.neighbor.k},
          {"phi_threshold", c.neighbor.phi_threshold},
          {"max_shrink_rounds", c.neighbor.max_shrink_rounds},
          {"min_pair_distance", c.neighbor.min_pair_distance},
          {"max_prolongation", c.neighbor.max_prolongation}}},
        {"batch", {{"m_min", c.batch.m_min}, {"m_max", c.batch.m_max}}},
        {"charge",
         {{"schedule", std::string(toString(c.charge.schedule))},
          {"q_min", c.charge.q_min},
          {"q_max", c.charge.q_max},
          {"epsilon", c.charge.epsilon},
          {"beta", c.charge.beta},
          {"alpha", c.charge.alpha},
          {"iteration_steps", c.charge.iteration_steps}}},
    };
}

/// +inf is written as null.
[[nodiscard]] inline Json finiteOrNull(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
[[nodiscard]] inline double nullToInfinity(const Json& j) { return j.is_null() ? kInfinity : j.get<double>(); }

[[nodiscard]] inline Json readJsonFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline void writeJsonFile(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace aptstar
