#pragma once

#include <algorithm>
#include <functional>
#include <map>

#include "glab/chambers.hpp"

namespace glab {

enum class WallKind { divisorial, flipping, fiber_type_boundary };

inline const char* to_string(WallKind k) {
    switch (k) {
    case WallKind::divisorial:
        return "divisorial";
    case WallKind::flipping:
        return "flipping";
    case WallKind::fiber_type_boundary:
        return "fiber_type_boundary";
    }
    return "?";
}

enum class WalkStatus { minimal_model, fiber_type };

inline const char* to_string(WalkStatus s) { return s == WalkStatus::minimal_model ? "minimal_model" : "fiber_type"; }

struct WallCrossing {
    Cone wall;
    std::ptrdiff_t from = -1;
    std::ptrdiff_t to = -1; // -1 when the wall lies on the support boundary
    WallKind kind = WallKind::divisorial;
};

struct MMPTrace {
    Fan start_fan;
    Vec target;
    Vec ample;                           // fixed interior ample class the segment starts from
    std::vector<std::ptrdiff_t> visited; // chambers in walk order
    std::vector<Fan> models;             // Proj fan of each visited chamber
    std::vector<WallCrossing> crossings;
    WalkStatus status = WalkStatus::minimal_model;
    Fan final_fan;
    std::size_t fiber_dim = 0; // dimension of Proj of the target when fiber type
};

namespace detail {

inline bool same_rays(const Fan& a, const Fan& b) { return a.rays == b.rays; }

inline bool rays_minus_one(const Fan& big, const Fan& small) {
    if (big.rays.size() != small.rays.size() + 1)
        return false;
    return std::all_of(small.rays.begin(), small.rays.end(), [&](const Vec& r) {
        return std::find(big.rays.begin(), big.rays.end(), r) != big.rays.end();
    });
}

} // namespace detail

/// Wall type from the canonical Proj fans on both sides.
inline WallKind classify_wall(const ChamberComplex& cx, const Cone& wall, std::ptrdiff_t from, std::ptrdiff_t to) {
    const bool listed = std::any_of(cx.walls.begin(), cx.walls.end(), [&](const Wall& w) {
        return w.cone == wall && ((w.a == from && w.b == to) || (w.a == to && w.b == from));
    });
    if (!listed)
        throw Error("non_adjacent", "chambers do not meet along the given wall");
    if (to < 0)
        return WallKind::fiber_type_boundary;
    const auto& a = cx.chambers[static_cast<std::size_t>(from)];
    const auto& b = cx.chambers[static_cast<std::size_t>(to)];
    if (!a.has_model || !b.has_model)
        throw Error("no_big_class", "wall is not between big chambers");
    if (a.model_fan == b.model_fan)
        throw Error("internal", "equal Proj fans on both sides of a wall");
    if (detail::rays_minus_one(a.model_fan, b.model_fan))
        return WallKind::divisorial;
    if (detail::same_rays(a.model_fan, b.model_fan))
        return WallKind::flipping;
    throw Error("unclassified_wall", "Proj fans differ in more than one ray");
}

inline WallKind classify_wall(const RingSpec& spec, const Cone& wall, std::ptrdiff_t from, std::ptrdiff_t to) {
    return classify_wall(chamber_decomposition(spec), wall, from, to);
}

/// Walk from the chamber of a fixed ample class A along the segment [A, target], crossing the
/// wall through which the segment leaves each chamber. Ties at lower-dimensional faces go to
/// the smallest wall, in canonical ray order, that leads to an unvisited chamber.
inline MMPTrace run_walk(const RingSpec& spec, const ChamberComplex& cx, const Vec& target) {
    const ToricModel& m = spec.model;
    if (target.size() != m.class_rank)
        throw Error("dimension_mismatch", "target class has the wrong length");
    if (!cx.support.contains_ample)
        throw Error("no_ample_in_support", "support contains no ample class");
    if (!cx.support.cone.contains(target) || is_zero(target))
        throw Error("target_outside_support", "target class is not a nonzero class of the support");

    MMPTrace tr;
    tr.target = target;
    tr.ample = intersect(cx.support.cone, nef_cone(m)).interior_point();
    std::ptrdiff_t cur = cx.locate(tr.ample);
    if (cur < 0 || !cx.chambers[static_cast<std::size_t>(cur)].has_model)
        throw Error("internal", "ample class not found in the complex");
    tr.start_fan = cx.chambers[static_cast<std::size_t>(cur)].model_fan;
    tr.visited.push_back(cur);
    tr.models.push_back(tr.start_fan);
    std::vector<bool> seen(cx.chambers.size(), false);
    seen[static_cast<std::size_t>(cur)] = true;

    const Vec dir = sub(target, tr.ample);
    auto check_model = [&](const Chamber& ch) {
        if (!check_fan(ch.model_fan).ok_for_model())
            throw Error("internal", "model along the walk is not complete and simplicial");
    };
    check_model(cx.chambers[static_cast<std::size_t>(cur)]);

    while (!cx.chambers[static_cast<std::size_t>(cur)].cone.contains(target)) {
        if (tr.crossings.size() >= cx.chambers.size())
            throw Error("internal", "walk exceeded the number of chambers");
        const Chamber& ch = cx.chambers[static_cast<std::size_t>(cur)];
        // exit time of the segment
        std::optional<Rational> t_out;
        for (const auto& f : ch.cone.facets()) {
            const Rational fd = dot(f, dir);
            if (fd < 0) {
                const Rational t = -dot(f, tr.ample) / fd;
                if (!t_out || t < *t_out)
                    t_out = t;
            }
        }
        if (!t_out)
            throw Error("internal", "segment does not leave the current chamber");
        const Vec exit_point = add(tr.ample, scale(*t_out, dir));
        const Wall* best = nullptr;
        std::ptrdiff_t best_to = -1;
        for (const auto& w : cx.walls) {
            if (w.b < 0 || (w.a != cur && w.b != cur) || !w.cone.contains(exit_point))
                continue;
            const std::ptrdiff_t other = w.a == cur ? w.b : w.a;
            // the wall must face the target: its outward side contains the direction
            const Vec inward = w.a == cur ? w.normal : neg(w.normal);
            if (dot(inward, dir) >= 0 || seen[static_cast<std::size_t>(other)])
                continue;
            if (!best || detail::cone_less(w.cone, best->cone)) {
                best = &w;
                best_to = other;
            }
        }
        if (!best)
            throw Error("internal", "no admissible wall at the exit point");
        const WallKind kind = classify_wall(cx, best->cone, cur, best_to);
        tr.crossings.push_back({best->cone, cur, best_to, kind});
        cur = best_to;
        seen[static_cast<std::size_t>(cur)] = true;
        tr.visited.push_back(cur);
        tr.models.push_back(cx.chambers[static_cast<std::size_t>(cur)].model_fan);
        check_model(cx.chambers[static_cast<std::size_t>(cur)]);
    }

    if (is_big(m, target)) {
        tr.final_fan = cx.chambers[static_cast<std::size_t>(cur)].model_fan;
        tr.status = WalkStatus::minimal_model;
        return tr;
    }
    tr.status = WalkStatus::fiber_type;
    auto boundary_wall = [&](std::ptrdiff_t c) {
        const Wall* best = nullptr;
        for (const auto& w : cx.walls)
            if (w.b < 0 && w.a == c && w.cone.contains(target) && (!best || detail::cone_less(w.cone, best->cone)))
                best = &w;
        return best;
    };
    // The chamber first reached may touch the support boundary at the target only in a smaller
    // face. Continue through walls containing the target, shortest path first, to a chamber
    // with a boundary wall through it.
    if (!boundary_wall(cur)) {
        std::vector<const Wall*> through;
        for (const auto& w : cx.walls)
            if (w.b >= 0 && w.cone.contains(target))
                through.push_back(&w);
        std::sort(through.begin(), through.end(),
                  [](const Wall* x, const Wall* y) { return detail::cone_less(x->cone, y->cone); });
        std::map<std::ptrdiff_t, std::pair<std::ptrdiff_t, const Wall*>> parent;
        std::vector<std::ptrdiff_t> queue{cur};
        std::ptrdiff_t found = -1;
        for (std::size_t qi = 0; qi < queue.size() && found < 0; ++qi) {
            const std::ptrdiff_t c = queue[qi];
            for (const Wall* w : through) {
                if (w->a != c && w->b != c)
                    continue;
                const std::ptrdiff_t o = w->a == c ? w->b : w->a;
                if (seen[static_cast<std::size_t>(o)] || parent.count(o))
                    continue;
                parent[o] = {c, w};
                if (boundary_wall(o)) {
                    found = o;
                    break;
                }
                queue.push_back(o);
            }
        }
        if (found < 0)
            throw Error("internal", "non-big target off the support boundary");
        std::vector<std::ptrdiff_t> path;
        for (std::ptrdiff_t c = found; c != cur; c = parent[c].first)
            path.push_back(c);
        std::reverse(path.begin(), path.end());
        for (const std::ptrdiff_t next : path) {
            const Wall* w = parent[next].second;
            tr.crossings.push_back({w->cone, cur, next, classify_wall(cx, w->cone, cur, next)});
            cur = next;
            seen[static_cast<std::size_t>(cur)] = true;
            tr.visited.push_back(cur);
            tr.models.push_back(cx.chambers[static_cast<std::size_t>(cur)].model_fan);
            check_model(cx.chambers[static_cast<std::size_t>(cur)]);
        }
    }
    tr.final_fan = cx.chambers[static_cast<std::size_t>(cur)].model_fan;
    const Wall* boundary = boundary_wall(cur);
    tr.crossings.push_back({boundary->cone, cur, -1, WallKind::fiber_type_boundary});
    const auto data = vertices(m.rank(), section_polytope(m, {m.representative(target)}).inequalities());
    Mat diffs;
    for (const auto& v : data.vertices)
        diffs.push_back(sub(v.point, data.vertices.front().point));
    tr.fiber_dim = rank(diffs, m.rank());
    return tr;
}

inline MMPTrace run_walk(const RingSpec& spec, const Vec& target) {
    return run_walk(spec, chamber_decomposition(spec), target);
}

/// f_*D on a model whose rays are a subset of the original rays: coefficients of contracted
/// rays are dropped.
using Pushforward = std::function<Vec(const Fan& from, const Fan& to, const Vec& coeffs)>;

inline Vec contracted_pushforward(const Fan& from, const Fan& to, const Vec& coeffs) {
    Vec out;
    for (const auto& r : to.rays) {
        const auto it = std::find(from.rays.begin(), from.rays.end(), r);
        if (it == from.rays.end())
            throw Error("not_a_contraction", "target model has a ray the source lacks");
        out.push_back(coeffs[static_cast<std::size_t>(it - from.rays.begin())]);
    }
    return out;
}

struct SectionCheck {
    bool holds = true;
    std::vector<std::size_t> start_dims;
    std::vector<std::size_t> final_dims;
    std::vector<Rational> discrepancies; // r_rho = a_rho + psi_{f_*D}(v_rho) at contracted rays
};

/// h^0(kD) on the start model against h^0(k f_*D) on the final model for k = 0..k_max, and the
/// decomposition D = f^* f_* D + sum r_rho D_rho with r_rho >= 0 at the contracted rays.
inline SectionCheck section_preservation_check(const RingSpec& spec, const MMPTrace& trace, const ToricDivisor& target,
                                               long k_max, const Pushforward& push = contracted_pushforward) {
    const ToricModel& m = spec.model;
    if (m.class_of(target.coeffs) != trace.target)
        throw Error("class_mismatch", "divisor does not have the trace's target class");
    // coefficients in the canonical ray order of the start fan
    Vec a;
    for (const auto& r : trace.start_fan.rays) {
        const auto it = std::find(m.fan.rays.begin(), m.fan.rays.end(), r);
        if (it == m.fan.rays.end())
            throw Error("not_a_contraction", "start model is not the ring spec's model");
        a.push_back(target.coeffs[static_cast<std::size_t>(it - m.fan.rays.begin())]);
    }
    const ToricModel start = build_model(trace.start_fan);
    const ToricModel fin = build_model(trace.final_fan);
    const Vec pushed = push(trace.start_fan, trace.final_fan, a);
    SectionCheck res;
    for (long k = 0; k <= k_max; ++k) {
        res.start_dims.push_back(h0(start, {scale(Rational(k), a)}));
        res.final_dims.push_back(h0(fin, {scale(Rational(k), pushed)}));
    }
    res.holds = res.start_dims == res.final_dims;
    const Vec exact = contracted_pushforward(trace.start_fan, trace.final_fan, a);
    for (std::size_t i = 0; i < start.num_rays(); ++i) {
        const Vec& v = start.fan.rays[i];
        if (std::find(fin.fan.rays.begin(), fin.fan.rays.end(), v) != fin.fan.rays.end())
            continue;
        const Rational r = a[i] + support_function_value(fin, {exact}, v);
        res.discrepancies.push_back(r);
        if (r < 0)
            res.holds = false;
    }
    return res;
}

/// Class group ranks of the models along the walk.
inline std::vector<std::size_t> picard_rank_ledger(const MMPTrace& trace) {
    std::vector<std::size_t> out;
    for (const auto& f : trace.models)
        out.push_back(f.rays.size() - f.ambient_rank);
    std::size_t step = 1;
    for (const auto& c : trace.crossings) {
        if (c.to < 0)
            continue;
        if (c.kind == WallKind::divisorial && out[step] + 1 != out[step - 1])
            throw Error("internal", "divisorial step must drop the rank by one");
        if (c.kind == WallKind::flipping && out[step] != out[step - 1])
            throw Error("internal", "flipping step must keep the rank");
        ++step;
    }
    return out;
}

} // namespace glab
