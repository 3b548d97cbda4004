#pragma once

#include <map>
#include <set>

#include "glab/normal_form.hpp"
#include "glab/polyhedron.hpp"

namespace glab {

using Indices = std::vector<std::size_t>;

/// A fan in N_R: primitive rays and maximal cones given as ray-index sets.
struct Fan {
    std::size_t ambient_rank = 0;
    Mat rays;
    std::vector<Indices> max_cones;

    Cone cone(std::size_t i) const {
        Mat gens;
        for (auto r : max_cones[i])
            gens.push_back(rays[r]);
        return Cone::from_generators(ambient_rank, gens);
    }

    bool is_simplicial() const {
        for (std::size_t i = 0; i < max_cones.size(); ++i) {
            Mat gens;
            for (auto r : max_cones[i])
                gens.push_back(rays[r]);
            if (rank(gens, ambient_rank) != gens.size())
                return false;
        }
        return true;
    }

    friend bool operator==(const Fan& a, const Fan& b) {
        return a.ambient_rank == b.ambient_rank && a.rays == b.rays && a.max_cones == b.max_cones;
    }
};

/// Rays in canonical order, each cone's indices sorted, cones sorted. Unused rays dropped.
inline Fan canonical(const Fan& f) {
    std::set<std::size_t> used;
    for (const auto& c : f.max_cones)
        used.insert(c.begin(), c.end());
    Mat rays;
    for (auto r : used)
        rays.push_back(f.rays[r]);
    canonical_sort(rays);
    auto index_of = [&](const Vec& v) {
        return static_cast<std::size_t>(std::find(rays.begin(), rays.end(), v) - rays.begin());
    };
    Fan out{f.ambient_rank, rays, {}};
    for (const auto& c : f.max_cones) {
        Indices ic;
        for (auto r : c)
            ic.push_back(index_of(f.rays[r]));
        std::sort(ic.begin(), ic.end());
        out.max_cones.push_back(std::move(ic));
    }
    std::sort(out.max_cones.begin(), out.max_cones.end());
    out.max_cones.erase(std::unique(out.max_cones.begin(), out.max_cones.end()), out.max_cones.end());
    return out;
}

struct FanCheck {
    bool well_formed = true; // ray lengths, primitivity, index ranges
    bool pointed = true;
    bool proper = true; // pairwise intersections are common faces
    bool complete = false;
    std::vector<bool> simplicial;
    std::string problem;

    bool ok_for_model() const {
        return well_formed && pointed && proper && complete &&
               std::all_of(simplicial.begin(), simplicial.end(), [](bool b) { return b; });
    }
};

/// Validates the fan axioms. Completeness uses the ridge criterion: with proper
/// intersections and full-dimensional cones, the fan is complete iff every facet of a
/// maximal cone is shared by exactly two maximal cones.
inline FanCheck check_fan(const Fan& f) {
    FanCheck res;
    const std::size_t n = f.ambient_rank;
    auto fail = [&](bool FanCheck::*flag, const std::string& why) {
        res.*flag = false;
        if (res.problem.empty())
            res.problem = why;
    };
    if (n == 0)
        fail(&FanCheck::well_formed, "ambient rank must be positive");
    for (std::size_t i = 0; i < f.rays.size(); ++i) {
        if (f.rays[i].size() != n)
            fail(&FanCheck::well_formed, "ray " + std::to_string(i) + " has the wrong length");
        else if (is_zero(f.rays[i]) || primitive(f.rays[i]) != f.rays[i])
            fail(&FanCheck::well_formed, "ray " + std::to_string(i) + " is not a primitive integer vector");
    }
    for (const auto& c : f.max_cones)
        for (auto r : c)
            if (r >= f.rays.size())
                fail(&FanCheck::well_formed, "cone refers to a missing ray");
    if (!res.well_formed)
        return res;

    std::vector<Cone> cones;
    for (std::size_t i = 0; i < f.max_cones.size(); ++i) {
        cones.push_back(f.cone(i));
        res.simplicial.push_back(cones.back().is_simplicial() && cones.back().rays().size() == f.max_cones[i].size());
        if (!cones.back().is_pointed())
            fail(&FanCheck::pointed, "cone " + std::to_string(i) + " is not pointed");
    }
    if (!res.pointed)
        return res;

    for (std::size_t i = 0; i < cones.size(); ++i)
        for (std::size_t j = i + 1; j < cones.size(); ++j) {
            Mat common;
            for (auto r : f.max_cones[i])
                if (std::find(f.max_cones[j].begin(), f.max_cones[j].end(), r) != f.max_cones[j].end())
                    common.push_back(f.rays[r]);
            if (intersect(cones[i], cones[j]) != Cone::from_generators(n, common))
                fail(&FanCheck::proper, "cones " + std::to_string(i) + " and " + std::to_string(j) +
                                            " meet outside a common face");
        }
    if (!res.proper)
        return res;

    bool complete = !cones.empty();
    std::map<Indices, int> ridges;
    for (std::size_t i = 0; i < cones.size() && complete; ++i) {
        if (!cones[i].is_full_dimensional()) {
            complete = false;
            break;
        }
        for (const auto& facet : cones[i].facets()) {
            Indices ridge;
            for (auto r : f.max_cones[i])
                if (dot(facet, f.rays[r]) == 0)
                    ridge.push_back(r);
            std::sort(ridge.begin(), ridge.end());
            ++ridges[ridge];
        }
    }
    for (const auto& [ridge, count] : ridges)
        if (count != 2)
            complete = false;
    res.complete = complete;
    if (!complete && res.problem.empty())
        res.problem = "fan is not complete";
    return res;
}

/// A complete simplicial toric variety: fan plus its divisor class group
/// Cl = Z^rays / {(<m, v_rho>)_rho}.
struct ToricModel {
    Fan fan;
    std::size_t class_rank = 0;
    std::vector<Integer> torsion; // invariant factors > 1
    Mat degree_map;               // class_rank x rays: free part of the class of a coefficient vector
    Mat torsion_map;              // one row per torsion factor, read modulo that factor
    Mat lift;                     // rays x class_rank with degree_map * lift = identity

    std::size_t rank() const { return fan.ambient_rank; }
    std::size_t num_rays() const { return fan.rays.size(); }

    Vec class_of(const Vec& coeffs) const {
        if (coeffs.size() != num_rays())
            throw Error("dimension_mismatch", "divisor has " + std::to_string(coeffs.size()) +
                                                  " coefficients, model has " + std::to_string(num_rays()) + " rays");
        return glab::apply(degree_map, coeffs);
    }

    /// A coefficient vector with the given class (integral for integral classes).
    Vec representative(const Vec& cls) const {
        if (cls.size() != class_rank)
            throw Error("dimension_mismatch", "class vector has the wrong length");
        return glab::apply(lift, cls);
    }

    /// Coefficients of the principal divisor of the character m.
    Vec principal(const Vec& m) const {
        Vec a;
        for (const auto& v : fan.rays)
            a.push_back(dot(m, v));
        return a;
    }

    /// Class of the torus-invariant prime divisor of ray `r`.
    Vec ray_class(std::size_t r) const { return class_of(unit(num_rays(), r)); }
};

/// Builds the class group from the Smith form of the ray matrix. The free part of the
/// degree map is then put in Hermite normal form, so coordinates do not depend on the
/// pivoting inside the Smith reduction.
inline ToricModel build_model(const Fan& fan) {
    const FanCheck chk = check_fan(fan);
    if (!chk.well_formed || !chk.pointed || !chk.proper)
        throw Error("invalid_fan", chk.problem);
    if (!chk.complete)
        throw Error("non_complete_fan", "fan is not complete");
    for (bool s : chk.simplicial)
        if (!s)
            throw Error("non_simplicial_fan", "fan has a non-simplicial cone");

    ToricModel m;
    m.fan = fan;
    const std::size_t k = fan.rays.size();
    const auto f = smith_normal_form(to_integer(fan.rays));
    const std::size_t q = f.rank();
    m.class_rank = k - q;
    const auto d = f.diagonal();
    for (std::size_t i = 0; i < q; ++i)
        if (d[i] > 1) {
            m.torsion.push_back(d[i]);
            Vec row;
            for (const auto& x : f.u[i])
                row.emplace_back(Rational(((x % d[i]) + d[i]) % d[i]));
            m.torsion_map.push_back(row);
        }
    IMat free_rows(f.u.begin() + static_cast<std::ptrdiff_t>(q), f.u.end());
    const auto h = hermite_normal_form(free_rows);
    m.degree_map = to_rational(h.h);

    // lift = (columns q.. of u^{-1}) * w^{-1}
    const Mat uinv = *inverse(to_rational(f.u));
    Mat right(k, zeros(m.class_rank));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m.class_rank; ++j)
            right[i][j] = uinv[i][q + j];
    m.lift = m.class_rank ? multiply(right, *inverse(to_rational(h.w))) : Mat(k);
    return m;
}

struct ToricDivisor {
    Vec coeffs;
};

/// Primitive nonzero vector of N: the torus-invariant valuation it defines.
struct ToricValuation {
    Vec v;
    explicit ToricValuation(Vec vec) : v(std::move(vec)) {
        if (is_zero(v) || primitive(v) != v)
            throw Error("invalid_valuation", "valuation vector must be primitive and nonzero");
    }
};

/// P_D = {m : <m, v_rho> >= -a_rho}.
inline Polyhedron section_polytope(const ToricModel& model, const ToricDivisor& d) {
    if (d.coeffs.size() != model.num_rays())
        throw Error("dimension_mismatch", "divisor length differs from the number of rays");
    std::vector<Inequality> rows;
    for (std::size_t r = 0; r < model.num_rays(); ++r)
        rows.push_back({model.fan.rays[r], -d.coeffs[r]});
    return Polyhedron(model.rank(), rows);
}

inline ToricDivisor round_down(const ToricDivisor& d) {
    ToricDivisor out;
    for (const auto& a : d.coeffs)
        out.coeffs.emplace_back(floor(a));
    return out;
}

/// h^0(X, D) = #(P_{floor D} ∩ M).
inline std::size_t h0(const ToricModel& model, const ToricDivisor& d) {
    return lattice_points(section_polytope(model, round_down(d))).size();
}

/// psi_D(v): linear on each cone with psi_D(v_rho) = -a_rho.
inline Rational support_function_value(const ToricModel& model, const ToricDivisor& d, const Vec& v) {
    const std::size_t n = model.rank();
    if (v.size() != n)
        throw Error("dimension_mismatch", "vector length differs from the fan's ambient rank");
    for (const auto& cone : model.fan.max_cones) {
        Mat cols;
        for (auto r : cone)
            cols.push_back(model.fan.rays[r]);
        const auto lam = solve(transpose(cols, n), v, cols.size());
        if (!lam || std::any_of(lam->begin(), lam->end(), [](const Rational& x) { return x < 0; }))
            continue;
        Rational psi = 0;
        for (std::size_t i = 0; i < cone.size(); ++i)
            psi -= (*lam)[i] * d.coeffs[cone[i]];
        return psi;
    }
    throw Error("not_in_fan", "vector lies outside the support of the fan");
}

/// o_v(D) = min over the rational polytope P_D of <m, v>, minus psi_D(v).
inline Rational asymptotic_order(const ToricModel& model, const ToricDivisor& d, const ToricValuation& val) {
    const auto lp = lp_minimize(val.v, section_polytope(model, d));
    if (lp.status == LpStatus::infeasible)
        throw Error("not_effective", "divisor class is not effective");
    return lp.value - support_function_value(model, d, val.v);
}

inline Cone effective_cone(const ToricModel& model) {
    Mat gens;
    for (std::size_t r = 0; r < model.num_rays(); ++r)
        gens.push_back(model.ray_class(r));
    return Cone::from_generators(model.class_rank, gens);
}

/// Intersection over maximal cones sigma of cone{[D_rho] : rho not in sigma}.
inline Cone nef_cone(const ToricModel& model) {
    Cone acc = Cone::whole_space(model.class_rank);
    for (const auto& sigma : model.fan.max_cones) {
        Mat gens;
        for (std::size_t r = 0; r < model.num_rays(); ++r)
            if (std::find(sigma.begin(), sigma.end(), r) == sigma.end())
                gens.push_back(model.ray_class(r));
        acc = intersect(acc, Cone::from_generators(model.class_rank, gens));
    }
    return acc;
}

/// Intersection over rays rho of the classes with o_rho = 0, i.e. of cone{[D_r] : r != rho}.
inline Cone movable_cone(const ToricModel& model) {
    Cone acc = effective_cone(model);
    for (std::size_t rho = 0; rho < model.num_rays(); ++rho) {
        Mat gens;
        for (std::size_t r = 0; r < model.num_rays(); ++r)
            if (r != rho)
                gens.push_back(model.ray_class(r));
        acc = intersect(acc, Cone::from_generators(model.class_rank, gens));
    }
    return acc;
}

/// Linear piece of psi_D on a maximal cone: the m with <m, v_rho> = -a_rho on the cone.
inline Vec local_character(const ToricModel& model, const ToricDivisor& d, const Indices& sigma) {
    Mat rows;
    Vec rhs;
    for (auto r : sigma) {
        rows.push_back(model.fan.rays[r]);
        rhs.push_back(-d.coeffs[r]);
    }
    return *solve(rows, rhs, model.rank());
}

/// Toric criterion: every linear piece m_sigma of psi_D satisfies all inequalities of P_D,
/// i.e. psi_D lies below each of its linear pieces.
inline bool is_semiample(const ToricModel& model, const ToricDivisor& d) {
    for (const auto& sigma : model.fan.max_cones) {
        const Vec m = local_character(model, d, sigma);
        for (std::size_t r = 0; r < model.num_rays(); ++r)
            if (dot(m, model.fan.rays[r]) < -d.coeffs[r])
                return false;
    }
    return true;
}

inline bool is_big(const ToricModel& model, const Vec& cls) {
    const Cone eff = effective_cone(model);
    return eff.is_full_dimensional() && eff.in_relative_interior(cls);
}

inline bool is_ample(const ToricModel& model, const Vec& cls) {
    const Cone nef = nef_cone(model);
    return nef.is_full_dimensional() && nef.in_relative_interior(cls);
}

} // namespace glab
