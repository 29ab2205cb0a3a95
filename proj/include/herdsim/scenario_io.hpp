#pragma once

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "herdsim/errors.hpp"
#include "herdsim/scenario.hpp"

namespace herdsim {

using json = nlohmann::ordered_json;

namespace io_detail {

// Strict object reader: every key must be consumed or the document is rejected.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) {
            throw SchemaError(path_ + ": expected an object");
        }
    }

    bool has(const char* key) const { return j_.contains(key); }

    double number(const char* key) const { return as_number(at(key), sub(key)); }

    double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::optional<double> optional_number(const char* key) const
    {
        return has(key) ? std::optional<double>(number(key)) : std::nullopt;
    }

    int integer(const char* key, int fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        const json& v = at(key);
        if (!v.is_number_integer()) {
            throw SchemaError(sub(key) + ": expected an integer");
        }
        return v.get<int>();
    }

    std::string string(const char* key, const std::string& fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        const json& v = at(key);
        if (!v.is_string()) {
            throw SchemaError(sub(key) + ": expected a string");
        }
        return v.get<std::string>();
    }

    Vec2 vec(const char* key) const { return as_vec(at(key), sub(key)); }

    Vec2 vec(const char* key, Vec2 fallback) const { return has(key) ? vec(key) : fallback; }

    const json& at(const char* key) const
    {
        if (!j_.contains(key)) {
            throw SchemaError(sub(key) + ": missing");
        }
        used_.push_back(key);
        return j_.at(key);
    }

    std::string sub(std::string_view key) const { return path_ + "." + std::string(key); }

    void finish() const
    {
        for (const auto& [key, value] : j_.items()) {
            bool seen = false;
            for (const auto& u : used_) {
                seen = seen || u == key;
            }
            if (!seen) {
                throw SchemaError(sub(key) + ": unknown field");
            }
        }
    }

    static double as_number(const json& v, const std::string& where)
    {
        if (!v.is_number()) {
            throw SchemaError(where + ": expected a number");
        }
        return v.get<double>();
    }

    static Vec2 as_vec(const json& v, const std::string& where)
    {
        if (!v.is_array() || v.size() != 2) {
            throw SchemaError(where + ": expected [x, y]");
        }
        return {as_number(v[0], where + "[0]"), as_number(v[1], where + "[1]")};
    }

private:
    const json& j_;
    std::string path_;
    mutable std::vector<std::string> used_;
};

inline Disc read_disc(const json& j, const std::string& path)
{
    Reader r(j, path);
    Disc d{r.vec("center_m"), r.number("radius_m")};
    r.finish();
    return d;
}

inline json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

inline json disc_json(const Disc& d) { return json{{"center_m", vec_json(d.center)}, {"radius_m", d.radius}}; }

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v)
{
    if (v) {
        j[key] = *v;
    }
}

} // namespace io_detail

/// Parses a scenario document. Unknown or mistyped fields raise SchemaError.
inline ScenarioConfig scenario_from_json(const json& doc)
{
    using io_detail::Reader;
    ScenarioConfig cfg;
    Reader root(doc, "scenario");
    cfg.name = root.string("name", cfg.name);
    cfg.protected_area = io_detail::read_disc(root.at("protected_area"), "scenario.protected_area");
    cfg.safe_area = io_detail::read_disc(root.at("safe_area"), "scenario.safe_area");

    if (root.has("obstacles")) {
        const json& arr = root.at("obstacles");
        if (!arr.is_array()) {
            throw SchemaError("scenario.obstacles: expected an array");
        }
        for (std::size_t k = 0; k < arr.size(); ++k) {
            Reader r(arr[k], "scenario.obstacles[" + std::to_string(k) + "]");
            ObstacleSpec spec;
            spec.center = r.vec("center_m");
            spec.width = r.number("width_m");
            spec.height = r.number("height_m");
            spec.attacker_bar_factor = r.optional_number("attacker_bar_factor");
            spec.attacker_outer_factor = r.optional_number("attacker_outer_factor");
            r.finish();
            cfg.obstacles.push_back(spec);
        }
    }

    {
        Reader r(root.at("attacker"), "scenario.attacker");
        AttackerConfig& a = cfg.attacker;
        a.position = r.vec("position_m");
        a.radius = r.number("radius_m", a.radius);
        a.max_speed = r.number("max_speed_mps", a.max_speed);
        a.speed = r.optional_number("speed_mps");
        a.sensing_radius = r.number("sensing_radius_m", a.sensing_radius);
        a.deadlock_escape = r.number("deadlock_escape_rad", a.deadlock_escape);
        a.deadlock_tolerance = r.number("deadlock_tolerance", a.deadlock_tolerance);
        r.finish();
    }
    {
        Reader r(root.at("defenders"), "scenario.defenders");
        DefenderConfig& d = cfg.defenders;
        const json& pos = r.at("positions_m");
        const json& speeds = r.at("max_speeds_mps");
        if (!pos.is_array() || !speeds.is_array()) {
            throw SchemaError("scenario.defenders: positions_m and max_speeds_mps must be arrays");
        }
        for (std::size_t j = 0; j < pos.size(); ++j) {
            d.positions.push_back(Reader::as_vec(pos[j], "scenario.defenders.positions_m[" + std::to_string(j) + "]"));
        }
        for (std::size_t j = 0; j < speeds.size(); ++j) {
            d.max_speeds.push_back(
                Reader::as_number(speeds[j], "scenario.defenders.max_speeds_mps[" + std::to_string(j) + "]"));
        }
        d.radius = r.number("radius_m", d.radius);
        d.sensing_zone_radius = r.number("sensing_zone_radius_m", d.sensing_zone_radius);
        r.finish();
    }
    if (root.has("formation")) {
        Reader r(root.at("formation"), "scenario.formation");
        FormationConfig& f = cfg.formation;
        f.spread = r.number("spread_rad", f.spread);
        f.arc_radius = r.number("arc_radius_m", f.arc_radius);
        f.attacker_min = r.number("attacker_min_m", f.attacker_min);
        f.attacker_bar = r.optional_number("attacker_bar_m");
        f.attacker_outer = r.number("attacker_outer_m", f.attacker_outer);
        f.peer_min = r.number("peer_min_m", f.peer_min);
        f.peer_bar = r.optional_number("peer_bar_m");
        f.peer_outer = r.optional_number("peer_outer_m");
        f.safe_margin = r.number("safe_margin_m", f.safe_margin);
        f.defender_margin = r.optional_number("defender_margin_m");
        r.finish();
    }
    if (root.has("heading")) {
        Reader r(root.at("heading"), "scenario.heading");
        HeadingConfig& h = cfg.heading;
        h.transition_time = r.number("transition_time_s", h.transition_time);
        h.capture_offset = r.number("capture_offset_rad", h.capture_offset);
        h.psi_prime_rate_max = r.number("psi_prime_rate_max_radps", h.psi_prime_rate_max);
        r.finish();
    }
    if (root.has("controller")) {
        Reader r(root.at("controller"), "scenario.controller");
        ControllerConfig& c = cfg.controller;
        c.exponent = r.number("exponent", c.exponent);
        c.goal_tolerance = r.number("goal_tolerance_m", c.goal_tolerance);
        c.solver_tolerance = r.number("solver_tolerance", c.solver_tolerance);
        r.finish();
    }
    if (root.has("integrator")) {
        Reader r(root.at("integrator"), "scenario.integrator");
        IntegratorConfig& i = cfg.integrator;
        i.dt = r.number("dt_s", i.dt);
        i.t_max = r.number("t_max_s", i.t_max);
        i.capture_dwell = r.optional_number("capture_dwell_s");
        r.finish();
    }
    if (root.has("shells")) {
        Reader r(root.at("shells"), "scenario.shells");
        ShellConfig& s = cfg.shells;
        s.bar_fraction = r.number("bar_fraction", s.bar_fraction);
        s.outer_fraction = r.number("outer_fraction", s.outer_fraction);
        s.attacker_bar_factor = r.number("attacker_bar_factor", s.attacker_bar_factor);
        s.attacker_outer_factor = r.number("attacker_outer_factor", s.attacker_outer_factor);
        s.solver_tolerance = r.number("solver_tolerance", s.solver_tolerance);
        s.solver_max_iterations = r.integer("solver_max_iterations", s.solver_max_iterations);
        r.finish();
    }
    root.finish();
    return cfg;
}

inline json scenario_to_json(const ScenarioConfig& cfg)
{
    using io_detail::put_optional;
    using io_detail::vec_json;
    json doc;
    doc["name"] = cfg.name;
    doc["protected_area"] = io_detail::disc_json(cfg.protected_area);
    doc["safe_area"] = io_detail::disc_json(cfg.safe_area);
    doc["obstacles"] = json::array();
    for (const ObstacleSpec& o : cfg.obstacles) {
        json j{{"center_m", vec_json(o.center)}, {"width_m", o.width}, {"height_m", o.height}};
        put_optional(j, "attacker_bar_factor", o.attacker_bar_factor);
        put_optional(j, "attacker_outer_factor", o.attacker_outer_factor);
        doc["obstacles"].push_back(j);
    }
    json a{{"position_m", vec_json(cfg.attacker.position)},
           {"radius_m", cfg.attacker.radius},
           {"max_speed_mps", cfg.attacker.max_speed}};
    put_optional(a, "speed_mps", cfg.attacker.speed);
    a["sensing_radius_m"] = cfg.attacker.sensing_radius;
    a["deadlock_escape_rad"] = cfg.attacker.deadlock_escape;
    a["deadlock_tolerance"] = cfg.attacker.deadlock_tolerance;
    doc["attacker"] = a;
    json d;
    d["positions_m"] = json::array();
    for (Vec2 p : cfg.defenders.positions) {
        d["positions_m"].push_back(vec_json(p));
    }
    d["max_speeds_mps"] = cfg.defenders.max_speeds;
    d["radius_m"] = cfg.defenders.radius;
    d["sensing_zone_radius_m"] = cfg.defenders.sensing_zone_radius;
    doc["defenders"] = d;
    const FormationConfig& f = cfg.formation;
    json fj{{"spread_rad", f.spread}, {"arc_radius_m", f.arc_radius}, {"attacker_min_m", f.attacker_min}};
    put_optional(fj, "attacker_bar_m", f.attacker_bar);
    fj["attacker_outer_m"] = f.attacker_outer;
    fj["peer_min_m"] = f.peer_min;
    put_optional(fj, "peer_bar_m", f.peer_bar);
    put_optional(fj, "peer_outer_m", f.peer_outer);
    fj["safe_margin_m"] = f.safe_margin;
    put_optional(fj, "defender_margin_m", f.defender_margin);
    doc["formation"] = fj;
    doc["heading"] = json{{"transition_time_s", cfg.heading.transition_time},
                          {"capture_offset_rad", cfg.heading.capture_offset},
                          {"psi_prime_rate_max_radps", cfg.heading.psi_prime_rate_max}};
    doc["controller"] = json{{"exponent", cfg.controller.exponent},
                             {"goal_tolerance_m", cfg.controller.goal_tolerance},
                             {"solver_tolerance", cfg.controller.solver_tolerance}};
    json ij{{"dt_s", cfg.integrator.dt}, {"t_max_s", cfg.integrator.t_max}};
    put_optional(ij, "capture_dwell_s", cfg.integrator.capture_dwell);
    doc["integrator"] = ij;
    doc["shells"] = json{{"bar_fraction", cfg.shells.bar_fraction},
                         {"outer_fraction", cfg.shells.outer_fraction},
                         {"attacker_bar_factor", cfg.shells.attacker_bar_factor},
                         {"attacker_outer_factor", cfg.shells.attacker_outer_factor},
                         {"solver_tolerance", cfg.shells.solver_tolerance},
                         {"solver_max_iterations", cfg.shells.solver_max_iterations}};
    return doc;
}

/// Thrown when the scenario file cannot be opened.
class FileError : public Error {
public:
    using Error::Error;
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ScenarioConfig parse_scenario(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    return scenario_from_json(doc);
}

inline ScenarioConfig load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

} // namespace herdsim
