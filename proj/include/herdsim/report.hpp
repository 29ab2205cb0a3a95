#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "herdsim/formation_field.hpp"
#include "herdsim/sim.hpp"

namespace herdsim {

namespace report_detail {

using json = nlohmann::ordered_json;

inline std::string num(double v) { return fmt::format("{:.12g}", v); }

// JSON has no infinity; non-finite values are written as strings.
inline json jnum(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

inline json jtime(const std::optional<double>& t) { return t ? jnum(*t) : json(nullptr); }

inline json safety_json(const SafetySnapshot& s)
{
    return json{{"attacker_obstacle", jnum(s.attacker_obstacle)},
                {"defender_obstacle", jnum(s.defender_obstacle)},
                {"defender_defender", jnum(s.defender_defender)},
                {"attacker_defender", jnum(s.attacker_defender)}};
}

// Maps world coordinates into an SVG canvas with y pointing up.
struct Viewport {
    double x0, y0, x1, y1;
    double width, height, pad;

    double sx(double x) const { return pad + (x - x0) / (x1 - x0) * (width - 2 * pad); }
    double sy(double y) const { return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad); }
};

inline std::string svg_open(double w, double h)
{
    return fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
                       "viewBox=\"0 0 {:.0f} {:.0f}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
                       w, h, w, h);
}

inline std::size_t stride_for(std::size_t n, std::size_t target = 2000)
{
    return std::max<std::size_t>(1, (n + target - 1) / target);
}

inline std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* color, double width)
{
    std::string s = fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{:.2f}\" points=\"", color, width);
    for (const auto& [x, y] : pts) {
        s += fmt::format("{:.2f},{:.2f} ", x, y);
    }
    s += "\"/>\n";
    return s;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

} // namespace report_detail

/// One row per step: step-start state and the velocities commanded for it.
inline void write_trace_csv(std::ostream& out, const SimTrace& trace, std::size_t defender_count)
{
    using report_detail::num;
    out << "t_s,attacker_x_m,attacker_y_m,attacker_vx_mps,attacker_vy_mps";
    for (std::size_t j = 0; j < defender_count; ++j) {
        out << fmt::format(",d{0}_x_m,d{0}_y_m,d{0}_vx_mps,d{0}_vy_mps,d{0}_goal_x_m,d{0}_goal_y_m", j);
    }
    out << ",psi_rad,psi_prime_rad,phase,defenders_active,e_rel_ao,e_rel_do,r_rel_dd,r_rel_ad\n";
    for (const TraceRow& r : trace.rows) {
        std::string line = fmt::format("{},{},{},{},{}", num(r.t), num(r.attacker_position.x),
                                       num(r.attacker_position.y), num(r.attacker_velocity.x),
                                       num(r.attacker_velocity.y));
        for (const DefenderState& d : r.defenders) {
            line += fmt::format(",{},{},{},{},{},{}", num(d.position.x), num(d.position.y), num(d.velocity.x),
                                num(d.velocity.y), num(d.goal.x), num(d.goal.y));
        }
        line += fmt::format(",{},{},{},{},{},{},{},{}\n", num(r.psi), num(r.psi_prime), to_string(r.phase),
                            r.defenders_active ? 1 : 0, num(r.safety.attacker_obstacle),
                            num(r.safety.defender_obstacle), num(r.safety.defender_defender),
                            num(r.safety.attacker_defender));
        out << line;
    }
}

inline nlohmann::ordered_json summary_json(const SimTrace& trace, const World& w)
{
    using namespace report_detail;
    const Events& ev = trace.events();
    json events{{"sense_s", jtime(ev.sense)},
                {"defenders_converged_s", jtime(ev.defenders_converged)},
                {"safe_entry_s", jtime(ev.safe_entry)},
                {"protected_breach_s", jtime(ev.protected_breach)}};
    const bool safe = trace.max_safety.safe();
    const bool speeds_ok = trace.max_defender_speed_ratio <= 1.0 + 1e-12;
    json doc;
    doc["scenario"] = w.cfg.name;
    doc["stop_reason"] = to_string(trace.stop);
    doc["captured"] = trace.captured();
    doc["steps"] = trace.rows.size();
    doc["final_time_s"] = jnum(trace.final_state.t);
    doc["events"] = events;
    doc["safe_area_exits_after_entry"] = trace.final_state.safe_exits;
    doc["max_safety_ratios"] = safety_json(trace.max_safety);
    doc["safety_ok"] = safe;
    doc["max_defender_speed_ratio"] = jnum(trace.max_defender_speed_ratio);
    doc["defender_speeds_ok"] = speeds_ok;
    doc["max_attacker_speed_mps"] = jnum(trace.max_attacker_speed);
    doc["degenerate_defender_steps"] = trace.degenerate_steps;
    doc["attacker_deadlock_steps"] = trace.deadlock_steps;
    const Vec2 fa = trace.final_state.attacker.position;
    doc["final_attacker_position_m"] = json::array({jnum(fa.x), jnum(fa.y)});
    return doc;
}

inline void write_sweep_csv(std::ostream& out, const SweepReport& rep)
{
    using report_detail::num;
    out << "beta_s_rad,delta_beta_lo_rad,delta_beta_hi_rad,min_partial_beta_rad,max_partial_beta_rad\n";
    for (const SweepCell& c : rep.cells) {
        out << fmt::format("{},{},{},{},{}\n", num(c.beta_s), num(c.delta_beta_lo), num(c.delta_beta_hi),
                           num(c.min), num(c.max));
    }
}

inline nlohmann::ordered_json sweep_summary_json(const SweepReport& rep, std::size_t obstacle_index,
                                                 const Obstacle& ob)
{
    using report_detail::jnum;
    nlohmann::ordered_json doc;
    doc["obstacle_index"] = obstacle_index;
    doc["exponent_n"] = jnum(ob.n);
    doc["resolution"] = rep.resolution;
    doc["margin_rad"] = jnum(rep.margin);
    doc["limit_rad"] = jnum(kPi - rep.margin);
    doc["min_partial_beta_rad"] = jnum(rep.global_min);
    doc["max_partial_beta_rad"] = jnum(rep.global_max);
    doc["max_abs_partial_beta_rad"] = jnum(rep.max_abs());
    doc["passed"] = rep.passed;
    return doc;
}

/// Heatmap of the per-cell max |dbeta| over (beta_s, delta_beta).
inline std::string sweep_svg(const SweepReport& rep)
{
    const int n = rep.resolution;
    const std::size_t rows = rep.rows.size();
    const double cell = 4.0;
    const double pad = 40.0;
    const double w = 2 * pad + n * cell;
    const double h = 2 * pad + static_cast<double>(rows) * cell;
    std::string s = report_detail::svg_open(w, h);
    for (std::size_t i = 0; i < rep.cells.size(); ++i) {
        const SweepCell& c = rep.cells[i];
        const double mag = std::max(std::abs(c.min), std::abs(c.max)) / kPi;
        const int shade = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(mag, 0.0, 1.0))));
        const std::size_t row = i / static_cast<std::size_t>(n);
        const std::size_t col = i % static_cast<std::size_t>(n);
        s += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"rgb(255,{},{})\"/>\n",
                         pad + col * cell, h - pad - (row + 1) * cell, cell, cell, shade, shade);
    }
    s += fmt::format("<text x=\"{:.0f}\" y=\"{:.0f}\" font-size=\"12\" text-anchor=\"middle\">delta beta (0..2pi)</text>\n",
                     w / 2, h - 12);
    s += fmt::format("<text x=\"12\" y=\"{:.0f}\" font-size=\"12\" transform=\"rotate(-90 12 {:.0f})\" "
                     "text-anchor=\"middle\">beta_s (0..pi/2)</text>\n",
                     h / 2, h / 2);
    s += fmt::format("<text x=\"{:.0f}\" y=\"24\" font-size=\"12\" text-anchor=\"middle\">max |dbeta| = {:.4f} rad</text>\n",
                     w / 2, rep.max_abs());
    s += "</svg>\n";
    return s;
}

/// Plan view: obstacles with their formation shells, areas and agent paths.
inline std::string trajectory_svg(const SimTrace& trace, const World& w)
{
    using namespace report_detail;
    double x0 = std::min(w.cfg.protected_area.center.x - w.cfg.protected_area.radius,
                         w.cfg.safe_area.center.x - w.cfg.safe_area.radius);
    double x1 = std::max(w.cfg.protected_area.center.x + w.cfg.protected_area.radius,
                         w.cfg.safe_area.center.x + w.cfg.safe_area.radius);
    double y0 = std::min(w.cfg.protected_area.center.y - w.cfg.protected_area.radius,
                         w.cfg.safe_area.center.y - w.cfg.safe_area.radius);
    double y1 = std::max(w.cfg.protected_area.center.y + w.cfg.protected_area.radius,
                         w.cfg.safe_area.center.y + w.cfg.safe_area.radius);
    auto grow = [&](Vec2 p) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    };
    for (const Obstacle& ob : w.obstacles) {
        grow(ob.center - Vec2{ob.w_bar, ob.h_bar});
        grow(ob.center + Vec2{ob.w_bar, ob.h_bar});
    }
    for (const TraceRow& r : trace.rows) {
        grow(r.attacker_position);
        for (const DefenderState& d : r.defenders) {
            grow(d.position);
        }
    }
    x0 -= 2;
    x1 += 2;
    y0 -= 2;
    y1 += 2;
    const double span = std::max(x1 - x0, y1 - y0);
    const double width = 700.0;
    const double height = 700.0;
    const double cx = 0.5 * (x0 + x1);
    const double cy = 0.5 * (y0 + y1);
    const Viewport vp{cx - span / 2, cy - span / 2, cx + span / 2, cy + span / 2, width, height, 20.0};
    const double scale = (width - 2 * vp.pad) / span;

    std::string s = svg_open(width, height);
    auto circle = [&](const Disc& d, const char* fill, const char* stroke) {
        s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"{}\" stroke=\"{}\"/>\n",
                         vp.sx(d.center.x), vp.sy(d.center.y), d.radius * scale, fill, stroke);
    };
    circle(w.cfg.protected_area, "#fdd", "#c00");
    circle(w.cfg.safe_area, "#dfd", "#080");
    for (const Obstacle& ob : w.obstacles) {
        s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#888\"/>\n",
                         vp.sx(ob.center.x - ob.w / 2), vp.sy(ob.center.y + ob.h / 2), ob.w * scale, ob.h * scale);
        std::vector<std::pair<double, double>> shell;
        for (int i = 0; i <= 180; ++i) {
            const Vec2 p = contour_point(kTwoPi * i / 180.0, ob, ob.xi_m());
            shell.emplace_back(vp.sx(p.x), vp.sy(p.y));
        }
        s += polyline(shell, "#444", 0.8);
    }
    const std::size_t stride = stride_for(trace.rows.size());
    std::vector<std::pair<double, double>> path;
    for (std::size_t i = 0; i < trace.rows.size(); i += stride) {
        path.emplace_back(vp.sx(trace.rows[i].attacker_position.x), vp.sy(trace.rows[i].attacker_position.y));
    }
    s += polyline(path, "#d62728", 1.5);
    const std::size_t nd = trace.rows.empty() ? 0 : trace.rows.front().defenders.size();
    for (std::size_t j = 0; j < nd; ++j) {
        path.clear();
        for (std::size_t i = 0; i < trace.rows.size(); i += stride) {
            const Vec2 p = trace.rows[i].defenders[j].position;
            path.emplace_back(vp.sx(p.x), vp.sy(p.y));
        }
        s += polyline(path, kPalette[j % std::size(kPalette)], 1.0);
    }
    s += "</svg>\n";
    return s;
}

/// The four safety ratios over time against the unit limit.
inline std::string ratio_svg(const SimTrace& trace)
{
    using namespace report_detail;
    const double width = 800.0;
    const double height = 400.0;
    const double t_end = trace.rows.empty() ? 1.0 : std::max(trace.rows.back().t, 1e-9);
    const double y_top = 1.2;
    const Viewport vp{0.0, 0.0, t_end, y_top, width, height, 40.0};
    std::string s = svg_open(width, height);
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" "
                     "stroke-dasharray=\"4 4\"/>\n",
                     vp.sx(0), vp.sy(1.0), vp.sx(t_end), vp.sy(1.0));
    const std::size_t stride = stride_for(trace.rows.size());
    const char* colors[] = {"#1f77b4", "#2ca02c", "#ff7f0e", "#d62728"};
    const char* labels[] = {"E_rel_ao", "E_rel_do", "R_rel_dd", "R_rel_ad"};
    for (int k = 0; k < 4; ++k) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < trace.rows.size(); i += stride) {
            const SafetySnapshot& q = trace.rows[i].safety;
            const double v[] = {q.attacker_obstacle, q.defender_obstacle, q.defender_defender, q.attacker_defender};
            pts.emplace_back(vp.sx(trace.rows[i].t), vp.sy(std::clamp(v[k], 0.0, y_top)));
        }
        s += polyline(pts, colors[k], 1.2);
        s += fmt::format("<text x=\"{:.0f}\" y=\"{:.0f}\" font-size=\"12\" fill=\"{}\">{}</text>\n",
                         width - 120, 20.0 + 14.0 * k, colors[k], labels[k]);
    }
    s += fmt::format("<text x=\"{:.0f}\" y=\"{:.0f}\" font-size=\"12\" text-anchor=\"middle\">t (0..{:.1f} s)</text>\n",
                     width / 2, height - 10, t_end);
    s += "</svg>\n";
    return s;
}

} // namespace herdsim
