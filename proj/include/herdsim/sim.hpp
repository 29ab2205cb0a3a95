#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "herdsim/attacker.hpp"
#include "herdsim/defender_control.hpp"
#include "herdsim/environment.hpp"
#include "herdsim/formation_field.hpp"
#include "herdsim/herding.hpp"
#include "herdsim/scenario.hpp"

namespace herdsim {

/// Scenario plus everything derived from it once before stepping.
struct World {
    ScenarioConfig cfg;
    std::vector<Obstacle> obstacles;
    std::optional<FormationSpec> formation;
    std::vector<TrackingGains> gains;
    AttackerParams attacker;
    BlendTriplet peer;
    ScheduleParams schedule;
};

inline World prepare_world(const ScenarioConfig& cfg)
{
    World w;
    w.cfg = cfg;
    w.obstacles = derive_obstacles(cfg.obstacles, cfg.shell_params());
    const std::size_t nd = cfg.defenders.count();
    if (cfg.defenders.max_speeds.size() != nd) {
        throw ConfigError("one max speed per defender is required");
    }
    if (nd == 1) {
        throw ConfigError("an arc formation needs at least two defenders");
    }
    if (nd >= 2) {
        w.formation = formation_spec(static_cast<int>(nd), cfg.formation.spread, cfg.formation.attacker_min,
                                     cfg.formation.peer_min, cfg.formation.arc_radius);
    }
    for (double v : cfg.defenders.max_speeds) {
        w.gains.push_back(solve_tracking_params(cfg.controller.exponent, v, cfg.attacker.max_speed,
                                                cfg.formation.arc_radius, cfg.heading.psi_prime_rate_max,
                                                cfg.controller.solver_tolerance));
    }
    w.attacker.sensing_radius = cfg.attacker.sensing_radius;
    w.attacker.defender_triplet = cfg.attacker_defender_triplet();
    w.attacker.deadlock_escape = cfg.attacker.deadlock_escape;
    w.attacker.deadlock_tolerance = cfg.attacker.deadlock_tolerance;
    require_valid(w.attacker.defender_triplet, "attacker/defender thresholds");
    w.peer = cfg.peer_triplet();
    require_valid(w.peer, "defender/defender thresholds");
    w.schedule = {cfg.heading.transition_time, cfg.heading.capture_offset};
    if (!(w.schedule.transition_time > 0.0)) {
        throw ConfigError("transition time must be positive");
    }
    return w;
}

/// Threshold-over-actual distance ratios; every value must stay below 1.
struct SafetySnapshot {
    double attacker_obstacle = 0.0; // E_rel^ao
    double defender_obstacle = 0.0; // E_rel^do
    double defender_defender = 0.0; // R_rel^dd
    double attacker_defender = 0.0; // R_rel^ad

    double worst() const
    {
        return std::max({attacker_obstacle, defender_obstacle, defender_defender, attacker_defender});
    }
    bool safe() const { return worst() < 1.0; }

    void merge_max(const SafetySnapshot& o)
    {
        attacker_obstacle = std::max(attacker_obstacle, o.attacker_obstacle);
        defender_obstacle = std::max(defender_obstacle, o.defender_obstacle);
        defender_defender = std::max(defender_defender, o.defender_defender);
        attacker_defender = std::max(attacker_defender, o.attacker_defender);
    }
};

namespace detail {
inline double ratio(double threshold, double actual)
{
    return actual > 0.0 ? threshold / actual : std::numeric_limits<double>::infinity();
}
} // namespace detail

inline SafetySnapshot safety_snapshot(Vec2 attacker, std::span<const Vec2> defenders, const World& w)
{
    SafetySnapshot s;
    for (const Obstacle& ob : w.obstacles) {
        s.attacker_obstacle = std::max(s.attacker_obstacle,
                                       detail::ratio(ob.xi_m(), superelliptic_distance(attacker, ob)));
        for (const Vec2& d : defenders) {
            s.defender_obstacle = std::max(s.defender_obstacle,
                                           detail::ratio(ob.defender.delta_m, superelliptic_distance(d, ob)));
        }
    }
    for (std::size_t j = 0; j < defenders.size(); ++j) {
        s.attacker_defender = std::max(s.attacker_defender,
                                       detail::ratio(w.cfg.formation.attacker_min, distance(attacker, defenders[j])));
        for (std::size_t l = j + 1; l < defenders.size(); ++l) {
            s.defender_defender = std::max(s.defender_defender,
                                           detail::ratio(w.cfg.formation.peer_min, distance(defenders[j], defenders[l])));
        }
    }
    return s;
}

struct DefenderState {
    Vec2 position;
    Vec2 goal;
    Vec2 goal_velocity;
    Vec2 velocity;
    bool in_conflict = false;
    bool degenerate = false;
};

struct Events {
    std::optional<double> sense;               // attacker enters the sensing zone
    std::optional<double> defenders_converged; // all goals reached (T_d^c)
    std::optional<double> safe_entry;          // attacker enters the safe area (T_s)
    std::optional<double> protected_breach;    // attacker enters the protected area
};

struct SimState {
    double t = 0.0;
    long long step = 0;
    AttackerState attacker;
    Vec2 attacker_velocity;
    std::vector<DefenderState> defenders;
    HeadingState heading;
    bool defenders_active = false;
    Events events;
    std::optional<double> inside_safe_since;
    int safe_exits = 0; // exits from the safe area after T_s

    std::vector<Vec2> defender_positions() const
    {
        std::vector<Vec2> out;
        out.reserve(defenders.size());
        for (const auto& d : defenders) {
            out.push_back(d.position);
        }
        return out;
    }
};

inline SafetySnapshot safety_snapshot(const SimState& s, const World& w)
{
    const auto pos = s.defender_positions();
    return safety_snapshot(s.attacker.position, pos, w);
}

inline SimState initial_state(const World& w)
{
    SimState s;
    s.attacker.position = w.cfg.attacker.position;
    s.attacker.speed = w.cfg.attacker.cruise_speed();
    s.attacker.heading = (w.cfg.protected_area.center - w.cfg.attacker.position).angle();
    for (const Vec2& p : w.cfg.defenders.positions) {
        DefenderState d;
        d.position = p;
        d.goal = p;
        s.defenders.push_back(d);
    }
    return s;
}

/// Everything commanded during one step, logged against the step-start state.
struct TraceRow {
    double t = 0.0;
    Vec2 attacker_position;
    Vec2 attacker_velocity;
    std::vector<DefenderState> defenders;
    double psi = 0.0;
    double psi_prime = 0.0;
    double psi_prime_rate = 0.0;
    HeadingPhase phase = HeadingPhase::Approach;
    bool defenders_active = false;
    bool attacker_deadlock = false;
    SafetySnapshot safety;
};

struct StepOutput {
    SimState next;
    TraceRow row;
};

/**
 * One explicit-Euler step. Order: sense, plan (formation field -> psi ->
 * psi' -> goals), attacker field, defender fields and commands, position
 * update, safety snapshot of the step-start state. All fields read the
 * step-start snapshot; positions are written together at the end.
 */
inline StepOutput step(const SimState& state, const World& w)
{
    const ScenarioConfig& cfg = w.cfg;
    const double dt = cfg.integrator.dt;
    if (!(dt > 0.0)) {
        throw ConfigError("time step must be positive");
    }
    StepOutput out;
    SimState& next = out.next;
    next = state;
    const Vec2 r_a = state.attacker.position;
    const bool inside_safe = cfg.safe_area.contains(r_a);

    // Sense. Once engaged the defenders keep tracking.
    bool just_activated = false;
    if (!next.defenders_active && w.formation && distance(r_a, cfg.protected_area.center) <= cfg.defenders.sensing_zone_radius) {
        next.defenders_active = true;
        next.events.sense = state.t;
        just_activated = true;
    }

    // Plan.
    const FieldSample field = combined_field(r_a, w.obstacles, cfg.safe_area.center);
    const double field_dir = field.direction.norm() > 0.0 ? field.direction.angle() : state.heading.psi;
    psi_schedule(field_dir, state.t, inside_safe, next.heading, w.schedule);
    if (next.heading.capture_time && !next.events.safe_entry) {
        next.events.safe_entry = next.heading.capture_time;
    }

    std::vector<Goal> goals;
    if (next.defenders_active) {
        const Resultant rep = obstacle_resultant(r_a, w.obstacles, cfg.attacker.sensing_radius);
        const double desired = solve_psi_prime(next.heading.psi, rep.magnitude, rep.angle, w.formation->magnitude);
        if (just_activated) {
            next.heading.psi_prime = desired;
            next.heading.psi_prime_rate = 0.0;
        } else {
            const double max_turn = cfg.heading.psi_prime_rate_max * dt;
            const double prev = state.heading.psi_prime;
            const double turned = wrap_angle(prev + std::clamp(wrap_angle(desired - prev), -max_turn, max_turn));
            const std::array<double, 2> history{prev, turned};
            next.heading.psi_prime = turned;
            next.heading.psi_prime_rate = psi_prime_rate(history, dt, cfg.heading.psi_prime_rate_max);
        }
        goals = formation_goals(r_a, state.attacker_velocity, next.heading.psi_prime, next.heading.psi_prime_rate,
                                *w.formation);
    }

    // Attacker.
    const std::vector<Vec2> positions = state.defender_positions();
    const Vec2 fa = attacker_field(state.attacker, positions, w.obstacles, cfg.protected_area.center, w.attacker);
    const AttackerMotion motion = attacker_velocity(state.attacker, fa, w.attacker);

    // Defenders.
    bool all_reached = next.defenders_active;
    for (std::size_t j = 0; j < next.defenders.size(); ++j) {
        DefenderState& d = next.defenders[j];
        if (!next.defenders_active) {
            d.goal = d.position;
            d.goal_velocity = {};
            d.velocity = {};
            d.in_conflict = false;
            d.degenerate = false;
            continue;
        }
        d.goal = goals[j].position;
        d.goal_velocity = goals[j].velocity;
        const DefenderField df = defender_field(j, positions, d.goal, w.obstacles, w.peer);
        const DefenderCommand cmd =
            defender_velocity(d.position, d.goal, d.goal_velocity, df.field, w.gains[j], df.conflict);
        d.velocity = cmd.velocity;
        d.in_conflict = df.conflict;
        d.degenerate = cmd.degenerate;
        all_reached = all_reached && distance(d.position, d.goal) <= cfg.controller.goal_tolerance;
    }
    if (all_reached && !next.events.defenders_converged) {
        next.events.defenders_converged = state.t;
    }

    TraceRow& row = out.row;
    row.t = state.t;
    row.attacker_position = r_a;
    row.attacker_velocity = motion.velocity;
    row.defenders = next.defenders;
    row.psi = next.heading.psi;
    row.psi_prime = next.heading.psi_prime;
    row.psi_prime_rate = next.heading.psi_prime_rate;
    row.phase = next.heading.phase;
    row.defenders_active = next.defenders_active;
    row.attacker_deadlock = motion.deadlock;
    row.safety = safety_snapshot(r_a, positions, w);

    // Integrate.
    next.step = state.step + 1;
    next.t = static_cast<double>(next.step) * dt;
    next.attacker.position = r_a + motion.velocity * dt;
    next.attacker.heading = motion.heading;
    next.attacker_velocity = motion.velocity;
    for (DefenderState& d : next.defenders) {
        d.position += d.velocity * dt;
    }

    bool finite = next.attacker.position.finite();
    for (const DefenderState& d : next.defenders) {
        finite = finite && d.position.finite() && d.velocity.finite();
    }
    if (!finite) {
        std::string dump = fmt::format("non-finite state at t = {} (step {}): attacker ({}, {})", state.t,
                                       state.step, next.attacker.position.x, next.attacker.position.y);
        for (std::size_t j = 0; j < next.defenders.size(); ++j) {
            dump += fmt::format(", defender {} ({}, {})", j, next.defenders[j].position.x,
                                next.defenders[j].position.y);
        }
        throw IntegrityError(dump);
    }

    const bool inside_after = cfg.safe_area.contains(next.attacker.position);
    if (inside_after) {
        if (!next.inside_safe_since) {
            next.inside_safe_since = next.t;
        }
    } else {
        if (next.inside_safe_since && next.events.safe_entry) {
            ++next.safe_exits;
        }
        next.inside_safe_since.reset();
    }
    if (inside_safe && !state.inside_safe_since) {
        next.inside_safe_since = std::min(next.inside_safe_since.value_or(state.t), state.t);
    }
    if (cfg.protected_area.contains(next.attacker.position) && !next.events.protected_breach) {
        next.events.protected_breach = next.t;
    }
    return out;
}

enum class StopReason { TimeLimit, Captured, Breached };

inline const char* to_string(StopReason r)
{
    switch (r) {
    case StopReason::TimeLimit:
        return "time_limit";
    case StopReason::Captured:
        return "captured";
    case StopReason::Breached:
        return "protected_area_breached";
    }
    return "?";
}

struct SimTrace {
    std::vector<TraceRow> rows;
    SimState final_state;
    StopReason stop = StopReason::TimeLimit;
    SafetySnapshot max_safety;
    double max_defender_speed_ratio = 0.0; // max over steps and defenders of |v| / v_max
    double max_attacker_speed = 0.0;
    long long degenerate_steps = 0;
    long long deadlock_steps = 0;

    const Events& events() const { return final_state.events; }
    bool captured() const { return stop == StopReason::Captured; }
};

inline long long step_count(double t_max, double dt)
{
    const double ratio = t_max / dt;
    const double rounded = std::round(ratio);
    return static_cast<long long>(std::abs(ratio - rounded) < 1e-9 * std::max(1.0, ratio) ? rounded : std::ceil(ratio));
}

/// Capture is stable once the attacker has stayed inside the safe area for
/// the dwell time, counted from the end of the heading transition.
inline bool capture_stable(const SimState& s, const World& w)
{
    if (!s.heading.capture_time || !s.inside_safe_since) {
        return false;
    }
    const double from = std::max(*s.inside_safe_since, *s.heading.capture_time + w.cfg.heading.transition_time);
    return s.t - from >= w.cfg.capture_dwell() - 1e-9;
}

inline SimTrace run(const World& w)
{
    if (!(w.cfg.integrator.dt > 0.0)) {
        throw ConfigError("time step must be positive");
    }
    SimTrace trace;
    SimState state = initial_state(w);
    if (w.cfg.safe_area.contains(state.attacker.position)) {
        state.inside_safe_since = 0.0;
    }
    const long long steps = step_count(w.cfg.integrator.t_max, w.cfg.integrator.dt);
    trace.rows.reserve(static_cast<std::size_t>(std::min<long long>(steps, 2'000'000)));
    for (long long k = 0; k < steps; ++k) {
        StepOutput out = step(state, w);
        const TraceRow& row = out.row;
        trace.max_safety.merge_max(row.safety);
        trace.max_attacker_speed = std::max(trace.max_attacker_speed, row.attacker_velocity.norm());
        for (std::size_t j = 0; j < row.defenders.size(); ++j) {
            trace.max_defender_speed_ratio =
                std::max(trace.max_defender_speed_ratio, row.defenders[j].velocity.norm() / w.gains[j].v_max);
            trace.degenerate_steps += row.defenders[j].degenerate ? 1 : 0;
        }
        trace.deadlock_steps += row.attacker_deadlock ? 1 : 0;
        trace.rows.push_back(std::move(out.row));
        state = std::move(out.next);
        if (state.events.protected_breach) {
            trace.stop = StopReason::Breached;
            break;
        }
        if (capture_stable(state, w)) {
            trace.stop = StopReason::Captured;
            break;
        }
    }
    trace.max_safety.merge_max(safety_snapshot(state, w));
    trace.final_state = std::move(state);
    return trace;
}

inline SimTrace run(const ScenarioConfig& cfg) { return run(prepare_world(cfg)); }

} // namespace herdsim
