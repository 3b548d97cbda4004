#pragma once

#include <deque>

#include "glab/hash.hpp"
#include "glab/toric.hpp"

namespace glab {

/// The divisorial ring R(X; D_1, ..., D_r) on a toric model.
struct RingSpec {
    ToricModel model;
    std::vector<ToricDivisor> divisors;

    void check() const {
        if (divisors.empty())
            throw Error("empty_spec", "a ring spec needs at least one divisor");
        for (const auto& d : divisors)
            if (d.coeffs.size() != model.num_rays())
                throw Error("dimension_mismatch", "divisor length differs from the number of rays");
    }
};

/// Support of the ring: the classes of C = sum R_+ D_i that are effective. Kept both in class
/// space, where chambers live, and in divisor space as C ∩ pi^{-1}(Eff).
struct SupportCone {
    Cone cone;         // class space
    Cone divisor_cone; // divisor space
    Cone image;        // pi(C)
    bool contains_big = false;
    bool contains_ample = false;
};

inline SupportCone support_cone(const RingSpec& spec) {
    spec.check();
    const ToricModel& m = spec.model;
    const std::size_t c = m.class_rank;
    Mat classes, coeffs;
    for (const auto& d : spec.divisors) {
        classes.push_back(m.class_of(d.coeffs));
        coeffs.push_back(d.coeffs);
    }
    const Cone eff = effective_cone(m);
    SupportCone s{intersect(Cone::from_generators(c, classes), eff), Cone::zero(m.num_rays()),
                  Cone::from_generators(c, classes)};

    Mat pulled_facets, pulled_eqs;
    const Mat qt = transpose(m.degree_map, m.num_rays());
    for (const auto& f : eff.facets())
        pulled_facets.push_back(glab::apply(qt, f));
    for (const auto& e : eff.equations())
        pulled_eqs.push_back(glab::apply(qt, e));
    s.divisor_cone = intersect(Cone::from_generators(m.num_rays(), coeffs),
                               Cone::from_inequalities(m.num_rays(), pulled_facets, pulled_eqs));

    s.contains_big = eff.is_full_dimensional() && eff.in_relative_interior(s.cone.interior_point()) && !s.cone.is_zero();
    const Cone nef = nef_cone(m);
    if (nef.is_full_dimensional() && !s.cone.is_zero()) {
        std::vector<Inequality> rows;
        for (const auto& f : s.cone.facets())
            rows.push_back({f, 0});
        for (const auto& e : s.cone.equations()) {
            rows.push_back({e, 0});
            rows.push_back({neg(e), 0});
        }
        for (const auto& f : nef.facets())
            rows.push_back({f, 1});
        s.contains_ample = Polyhedron(c, rows).feasible();
    }
    return s;
}

namespace detail {

/// A vertex of P_{lift(y)} with a basis of tight rays and the linear map y -> m_beta(y).
struct VertexBasis {
    Vec point;
    Indices tight;
    Indices basis;
    Mat map; // rank x class_rank
};

inline std::vector<VertexBasis> vertex_bases(const ToricModel& m, const Vec& y) {
    const std::size_t n = m.rank();
    const auto data = vertices(n, section_polytope(m, {m.representative(y)}).inequalities());
    std::vector<VertexBasis> out;
    for (const auto& v : data.vertices) {
        VertexBasis vb{v.point, v.tight, {}, {}};
        vb.basis = independent_subset(m.fan.rays, n, v.tight);
        Mat vb_rows, lb_rows;
        for (auto r : vb.basis) {
            vb_rows.push_back(m.fan.rays[r]);
            lb_rows.push_back(scale(Rational(-1), m.lift[r]));
        }
        vb.map = multiply(*inverse(vb_rows), lb_rows);
        out.push_back(std::move(vb));
    }
    return out;
}

/// y -> <m_beta(y), v_rho> + a_rho(y), the slack of ray rho at the vertex, as a row vector.
inline Vec slack_form(const ToricModel& m, const VertexBasis& vb, std::size_t rho) {
    Vec row = m.lift[rho];
    const Vec& v = m.fan.rays[rho];
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] += v[i] * vb.map[i][j];
    return row;
}

/// Cell of the secondary fan whose relative interior contains y: the classes at which every
/// vertex of P_y persists with the same tight rays becoming at worst more tight.
inline Cone secondary_cell(const ToricModel& m, const Vec& y) {
    Mat ineqs, eqs;
    for (const auto& vb : vertex_bases(m, y))
        for (std::size_t r = 0; r < m.num_rays(); ++r) {
            if (std::find(vb.basis.begin(), vb.basis.end(), r) != vb.basis.end())
                continue;
            const Vec f = slack_form(m, vb, r);
            if (std::find(vb.tight.begin(), vb.tight.end(), r) != vb.tight.end())
                eqs.push_back(f);
            else
                ineqs.push_back(f);
        }
    return Cone::from_inequalities(m.class_rank, ineqs, eqs);
}

inline std::string fan_key(const Fan& f) {
    std::string s = std::to_string(f.ambient_rank) + ";";
    for (const auto& r : f.rays)
        s += to_string(r) + "|";
    s += ";";
    for (const auto& c : f.max_cones) {
        for (auto i : c)
            s += std::to_string(i) + ",";
        s += "|";
    }
    return s;
}

inline bool cone_less(const Cone& a, const Cone& b) {
    return std::lexicographical_compare(a.rays().begin(), a.rays().end(), b.rays().begin(), b.rays().end(),
                                        canonical_less);
}

} // namespace detail

inline std::string model_id(const Fan& f) { return hex_digest(detail::fan_key(canonical(f))); }

/// Normal fan of the convex hull of a full-dimensional point set, canonicalized.
inline Fan normal_fan_of_points(std::size_t n, const Mat& points) {
    Mat hom;
    for (const auto& p : points) {
        Vec h = p;
        h.emplace_back(1);
        hom.push_back(std::move(h));
    }
    const Cone c = Cone::from_generators(n + 1, hom);
    if (!c.is_full_dimensional())
        throw Error("no_big_class", "polytope is not full-dimensional");
    Fan f{n, {}, {}};
    for (const auto& fac : c.facets())
        f.rays.push_back(primitive(Vec(fac.begin(), fac.end() - 1)));
    for (const auto& r : c.rays()) {
        Indices cone;
        for (std::size_t i = 0; i < c.facets().size(); ++i)
            if (dot(c.facets()[i], r) == 0)
                cone.push_back(i);
        f.max_cones.push_back(std::move(cone));
    }
    return canonical(f);
}

/// Normal fan of the rational polytope P_D (scale invariant).
inline Fan rational_normal_fan(const ToricModel& m, const ToricDivisor& d) {
    const auto data = vertices(m.rank(), section_polytope(m, d).inequalities());
    Mat pts;
    for (const auto& v : data.vertices)
        pts.push_back(v.point);
    if (pts.empty())
        throw Error("no_big_class", "divisor has no sections");
    return normal_fan_of_points(m.rank(), pts);
}

struct ProjModel {
    Fan fan;
    Integer multiple = 1;
    std::string model_id;
};

/// Proj R(X, D) for big D: normal fan of the lattice hull of P_{kD}. k starts at the
/// smallest multiple making both kD and the vertices of P_{kD} integral, and doubles until
/// the fans at k and 2k agree.
inline ProjModel proj_model(const ToricModel& m, const ToricDivisor& d) {
    if (!is_big(m, m.class_of(d.coeffs)))
        throw Error("no_big_class", "Proj model needs a big class");
    Integer k = 1;
    for (const auto& a : d.coeffs)
        k = lcm(k, denominator(a));
    for (const auto& v : vertices(m.rank(), section_polytope(m, d).inequalities()).vertices)
        for (const auto& x : v.point)
            k = lcm(k, denominator(x));
    auto fan_at = [&](const Integer& mult) {
        const auto pts = lattice_points(section_polytope(m, {scale(Rational(mult), d.coeffs)}));
        try {
            return std::optional<Fan>(normal_fan_of_points(m.rank(), pts));
        } catch (const Error&) {
            return std::optional<Fan>();
        }
    };
    auto cur = fan_at(k);
    for (int step = 0; step < 4; ++step) {
        auto next = fan_at(2 * k);
        if (cur && next && *cur == *next)
            return {*cur, k, model_id(*cur)};
        cur = std::move(next);
        k *= 2;
    }
    throw Error("proj_unstable", "normal fan did not stabilize");
}

struct Chamber {
    Cone cone;
    Vec interior;      // a relative-interior class
    Mat linear_forms;  // row rho: o_rho(y) = <row, y> on the chamber
    bool has_model = false;
    Fan model_fan;
    std::string model_id;
};

/// Codimension-one face of the complex. `b` is -1 for faces on the support boundary.
struct Wall {
    Cone cone;
    std::ptrdiff_t a = -1;
    std::ptrdiff_t b = -1;
    Vec normal; // points into chamber a
};

struct ChamberComplex {
    SupportCone support;
    std::vector<Chamber> chambers;
    std::vector<Wall> walls;

    /// Index of a chamber containing y, preferring one whose relative interior contains it.
    std::ptrdiff_t locate(const Vec& y) const {
        std::ptrdiff_t found = -1;
        for (std::size_t i = 0; i < chambers.size(); ++i) {
            if (chambers[i].cone.in_relative_interior(y))
                return static_cast<std::ptrdiff_t>(i);
            if (found < 0 && chambers[i].cone.contains(y))
                found = static_cast<std::ptrdiff_t>(i);
        }
        return found;
    }
};

/// Linear forms of every o_rho on a chamber, read off the minimizing vertex at an interior class.
inline Mat chamber_linear_forms(const ToricModel& m, const Vec& interior) {
    const auto vbs = detail::vertex_bases(m, interior);
    Mat forms;
    for (std::size_t r = 0; r < m.num_rays(); ++r) {
        const detail::VertexBasis* best = nullptr;
        for (const auto& vb : vbs)
            if (!best || dot(vb.point, m.fan.rays[r]) < dot(best->point, m.fan.rays[r]))
                best = &vb;
        forms.push_back(detail::slack_form(m, *best, r));
    }
    return forms;
}

inline ChamberComplex chamber_decomposition(const RingSpec& spec) {
    const ToricModel& m = spec.model;
    ChamberComplex cx;
    cx.support = support_cone(spec);
    const Cone& supp = cx.support.cone;
    if (supp.is_zero() || supp.dim() < cx.support.image.dim())
        throw Error("degenerate_support", "support has empty interior in the span of the ring spec divisors");

    auto chamber_at = [&](const Vec& y) { return intersect(detail::secondary_cell(m, y), supp); };
    auto full = [&](const Cone& c) { return c.dim() == supp.dim(); };

    // seed: perturb the support's interior point until it is generic
    const Vec x0 = supp.interior_point();
    std::optional<Cone> seed;
    for (int t = 0; t < 64 && !seed; ++t) {
        Vec x = x0;
        Rational w = 1;
        for (std::size_t j = 0; j < supp.rays().size() && t > 0; ++j) {
            w /= t + 2;
            x = add(x, scale(w, supp.rays()[j]));
        }
        Cone c = chamber_at(x);
        if (full(c))
            seed = c;
    }
    if (!seed)
        throw Error("internal", "no generic seed class found");

    std::vector<Cone> cones{*seed};
    struct RawWall {
        Cone cone;
        std::size_t a;
        std::ptrdiff_t b;
        Vec normal;
    };
    std::vector<RawWall> raw;
    auto index_of = [&](const Cone& c) -> std::ptrdiff_t {
        for (std::size_t i = 0; i < cones.size(); ++i)
            if (cones[i] == c)
                return static_cast<std::ptrdiff_t>(i);
        return -1;
    };
    for (std::size_t i = 0; i < cones.size(); ++i) {
        const Cone cur = cones[i];
        for (std::size_t f = 0; f < cur.facets().size(); ++f) {
            const Cone face = cur.facet_face(f);
            const Vec& n = cur.facets()[f];
            bool boundary = false;
            for (const auto& g : supp.facets()) {
                bool all = true;
                for (const auto& r : face.rays())
                    all = all && dot(g, r) == 0;
                boundary = boundary || all;
            }
            if (boundary) {
                raw.push_back({face, i, -1, n});
                continue;
            }
            const Vec p = face.interior_point();
            std::optional<Cone> next;
            Rational eps = 1;
            for (int k = 0; k < 60 && !next; ++k, eps /= 2) {
                const Vec q = sub(p, scale(eps, n));
                if (!supp.in_relative_interior(q))
                    continue;
                Cone c = chamber_at(q);
                if (full(c) && c.contains(p) && c != cur)
                    next = c;
            }
            if (!next)
                throw Error("internal", "could not cross an interior wall");
            std::ptrdiff_t j = index_of(*next);
            if (j < 0) {
                cones.push_back(*next);
                j = static_cast<std::ptrdiff_t>(cones.size() - 1);
            }
            raw.push_back({face, i, j, n});
        }
    }

    // canonical order of chambers, independent of the exploration order
    std::vector<std::size_t> order(cones.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return detail::cone_less(cones[x], cones[y]); });
    std::vector<std::ptrdiff_t> rank_of(cones.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        rank_of[order[i]] = static_cast<std::ptrdiff_t>(i);

    for (auto idx : order) {
        Chamber ch;
        ch.cone = cones[idx];
        ch.interior = ch.cone.interior_point();
        ch.linear_forms = chamber_linear_forms(m, ch.interior);
        if (is_big(m, ch.interior)) {
            const auto pm = proj_model(m, {m.representative(ch.interior)});
            ch.has_model = true;
            ch.model_fan = pm.fan;
            ch.model_id = pm.model_id;
        }
        cx.chambers.push_back(std::move(ch));
    }
    for (const auto& w : raw) {
        std::ptrdiff_t a = rank_of[w.a];
        std::ptrdiff_t b = w.b < 0 ? -1 : rank_of[static_cast<std::size_t>(w.b)];
        Vec normal = w.normal;
        if (b >= 0 && b < a) {
            std::swap(a, b);
            normal = neg(normal);
        }
        const bool dup = std::any_of(cx.walls.begin(), cx.walls.end(), [&](const Wall& x) {
            return x.a == a && x.b == b && x.cone == w.cone;
        });
        if (!dup)
            cx.walls.push_back({w.cone, a, b, normal});
    }
    std::sort(cx.walls.begin(), cx.walls.end(), [](const Wall& x, const Wall& y) {
        if (x.a != y.a)
            return x.a < y.a;
        if ((x.b < 0) != (y.b < 0))
            return y.b < 0;
        if (x.b != y.b)
            return x.b < y.b;
        return detail::cone_less(x.cone, y.cone);
    });
    return cx;
}

/// Proj model at a chamber's interior class.
inline ProjModel proj_model(const RingSpec& spec, const Chamber& ch) {
    return proj_model(spec.model, {spec.model.representative(ch.interior)});
}

/// Whether two big divisors of the same class have identical canonical Proj fans.
inline bool numerical_proj_invariance(const RingSpec& spec, const ToricDivisor& d1, const ToricDivisor& d2) {
    const auto& m = spec.model;
    if (m.class_of(d1.coeffs) != m.class_of(d2.coeffs))
        throw Error("class_mismatch", "divisors have different classes");
    return proj_model(m, d1).fan == proj_model(m, d2).fan;
}

inline Cone nef_slice(const RingSpec& spec) { return intersect(support_cone(spec).cone, nef_cone(spec.model)); }

/// Hull of the chambers on which every o_rho vanishes identically.
inline Cone movable_slice(const ChamberComplex& cx) {
    const std::size_t c = cx.support.cone.ambient_dim();
    Mat gens;
    for (const auto& ch : cx.chambers)
        if (std::all_of(ch.linear_forms.begin(), ch.linear_forms.end(), [](const Vec& f) { return is_zero(f); }))
            gens.insert(gens.end(), ch.cone.rays().begin(), ch.cone.rays().end());
    return Cone::from_generators(c, gens);
}

inline Cone movable_slice(const RingSpec& spec) { return movable_slice(chamber_decomposition(spec)); }

/// Every maximal cone of `fine` lies inside some maximal cone of `coarse`.
inline bool fan_refines(const Fan& fine, const Fan& coarse) {
    if (fine.ambient_rank != coarse.ambient_rank)
        return false;
    std::vector<Cone> big;
    for (std::size_t j = 0; j < coarse.max_cones.size(); ++j)
        big.push_back(coarse.cone(j));
    for (std::size_t i = 0; i < fine.max_cones.size(); ++i) {
        const Cone c = fine.cone(i);
        if (std::none_of(big.begin(), big.end(), [&](const Cone& b) { return b.contains(c); }))
            return false;
    }
    return true;
}

struct VisibleFacet {
    Vec normal; // inward
    Cone face;
};

/// Facets F of a full-dimensional cone with <n_F, kappa> < 0: exactly those whose relative
/// interior points delta satisfy [kappa, delta] ∩ cone = {delta}.
inline std::vector<VisibleFacet> visible_boundary(const Cone& cone, const Vec& kappa) {
    if (kappa.size() != cone.ambient_dim())
        throw Error("dimension_mismatch", "kappa has the wrong length");
    if (!cone.is_full_dimensional())
        throw Error("degenerate_cone", "visible boundary needs a full-dimensional cone");
    if (cone.contains(kappa))
        throw Error("kappa_inside", "kappa lies in the cone");
    std::vector<VisibleFacet> out;
    for (std::size_t i = 0; i < cone.facets().size(); ++i)
        if (dot(cone.facets()[i], kappa) < 0)
            out.push_back({cone.facets()[i], cone.facet_face(i)});
    return out;
}

} // namespace glab
