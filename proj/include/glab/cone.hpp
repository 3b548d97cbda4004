#pragma once

#include <boost/dynamic_bitset.hpp>

#include "glab/linalg.hpp"

namespace glab {

namespace detail {

struct RayBasis {
    Mat rays;      // extreme rays of the pointed part, orthogonal to the lineality space
    Mat lineality; // canonical basis of the lineality space
};

inline Mat stack(const Mat& a, const Mat& b) {
    Mat r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

/// Double description: extreme rays and lineality of {x : ineqs x >= 0, eqs x = 0}.
///
/// The cone is cut down to the complement of its lineality space, where it is pointed, and
/// the constraints are then added one at a time starting from a simplicial cone. Adjacency
/// of two rays uses the combinatorial test on their zero sets.
inline RayBasis extreme_rays(std::size_t dim, const Mat& ineqs, const Mat& eqs) {
    RayBasis out;
    out.lineality = canonical_basis(nullspace(stack(ineqs, eqs), dim), dim);

    const Mat slice = nullspace(stack(eqs, out.lineality), dim);
    const std::size_t k = slice.size();
    if (k == 0 || ineqs.empty())
        return out;

    // Constraint rows in slice coordinates: x = slice^T t.
    const std::size_t m = ineqs.size();
    Mat rows(m, zeros(k));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j)
            rows[i][j] = dot(ineqs[i], slice[j]);

    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i)
        order[i] = i;
    const auto initial = independent_subset(rows, k, order);
    if (initial.size() != k)
        throw Error("internal", "double description: sliced cone is not pointed");

    Mat square;
    for (auto i : initial)
        square.push_back(rows[i]);
    const Mat inv = *inverse(square);

    struct Ray {
        Vec t;
        boost::dynamic_bitset<> zero;
    };
    std::vector<Ray> rays;
    for (std::size_t j = 0; j < k; ++j) {
        Ray r{zeros(k), boost::dynamic_bitset<>(m)};
        for (std::size_t i = 0; i < k; ++i)
            r.t[i] = inv[i][j];
        r.t = primitive(r.t);
        for (std::size_t i = 0; i < k; ++i)
            if (i != j)
                r.zero.set(initial[i]);
        rays.push_back(std::move(r));
    }

    std::vector<bool> done(m, false);
    for (auto i : initial)
        done[i] = true;

    for (std::size_t c = 0; c < m; ++c) {
        if (done[c])
            continue;
        done[c] = true;
        std::vector<Rational> val(rays.size());
        std::vector<std::size_t> pos, zer, negv;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            val[r] = dot(rows[c], rays[r].t);
            if (val[r] > 0)
                pos.push_back(r);
            else if (val[r] == 0)
                zer.push_back(r);
            else
                negv.push_back(r);
        }
        if (negv.empty()) {
            for (auto r : zer)
                rays[r].zero.set(c);
            continue;
        }
        std::vector<Ray> next;
        for (auto r : pos)
            next.push_back(rays[r]);
        for (auto r : zer) {
            next.push_back(rays[r]);
            next.back().zero.set(c);
        }
        for (auto p : pos) {
            for (auto n : negv) {
                const auto common = rays[p].zero & rays[n].zero;
                if (common.count() + 2 < k)
                    continue;
                bool adjacent = true;
                for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
                    if (o == p || o == n)
                        continue;
                    if (common.is_subset_of(rays[o].zero))
                        adjacent = false;
                }
                if (!adjacent)
                    continue;
                Ray r{add(scale(val[p], rays[n].t), scale(-val[n], rays[p].t)), common};
                r.t = primitive(r.t);
                r.zero.set(c);
                next.push_back(std::move(r));
            }
        }
        rays = std::move(next);
    }

    for (const auto& r : rays) {
        Vec x = zeros(dim);
        for (std::size_t j = 0; j < k; ++j)
            if (r.t[j] != 0)
                for (std::size_t i = 0; i < dim; ++i)
                    x[i] += r.t[j] * slice[j][i];
        out.rays.push_back(primitive(x));
    }
    canonical_sort(out.rays);
    return out;
}

} // namespace detail

/// Rational polyhedral cone held in both representations.
///
/// V-representation: `rays` (primitive, orthogonal to the lineality space) plus a lineality
/// basis. H-representation: `facets` (primitive inward normals lying in the linear span of
/// the cone) plus `equations` cutting out that span. Every list is in canonical order, so
/// equal cones compare equal member by member.
class Cone {
  public:
    Cone() = default;

    static Cone from_generators(std::size_t dim, const Mat& rays, const Mat& lineality = {}) {
        check_dims(dim, rays);
        check_dims(dim, lineality);
        const auto dual = detail::extreme_rays(dim, rays, lineality);
        const auto primal = detail::extreme_rays(dim, dual.rays, dual.lineality);
        return Cone(dim, primal.rays, primal.lineality, dual.rays, dual.lineality);
    }

    static Cone from_inequalities(std::size_t dim, const Mat& facets, const Mat& equations = {}) {
        check_dims(dim, facets);
        check_dims(dim, equations);
        const auto primal = detail::extreme_rays(dim, facets, equations);
        const auto dual = detail::extreme_rays(dim, primal.rays, primal.lineality);
        return Cone(dim, primal.rays, primal.lineality, dual.rays, dual.lineality);
    }

    static Cone zero(std::size_t dim) { return from_generators(dim, {}); }
    static Cone whole_space(std::size_t dim) { return from_inequalities(dim, {}); }

    std::size_t ambient_dim() const { return dim_; }
    const Mat& rays() const { return rays_; }
    const Mat& lineality() const { return lineality_; }
    const Mat& facets() const { return facets_; }
    const Mat& equations() const { return equations_; }

    std::size_t dim() const { return dim_ - equations_.size(); }
    std::size_t lineality_dim() const { return lineality_.size(); }
    bool is_pointed() const { return lineality_.empty(); }
    bool is_full_dimensional() const { return equations_.empty(); }
    bool is_zero() const { return rays_.empty() && lineality_.empty(); }
    bool is_simplicial() const { return is_pointed() && rays_.size() == dim(); }

    bool contains(const Vec& x) const {
        if (x.size() != dim_)
            throw Error("dimension_mismatch", "point dimension differs from the cone's ambient dimension");
        for (const auto& e : equations_)
            if (dot(e, x) != 0)
                return false;
        for (const auto& f : facets_)
            if (dot(f, x) < 0)
                return false;
        return true;
    }

    bool contains(const Cone& other) const {
        for (const auto& r : other.rays_)
            if (!contains(r))
                return false;
        for (const auto& l : other.lineality_)
            if (!contains(l) || !contains(neg(l)))
                return false;
        return true;
    }

    bool in_relative_interior(const Vec& x) const {
        if (!contains(x))
            return false;
        for (const auto& f : facets_)
            if (dot(f, x) <= 0)
                return false;
        return true;
    }

    /// Sum of the extreme rays: a point of the relative interior.
    Vec interior_point() const {
        Vec s = zeros(dim_);
        for (const auto& r : rays_)
            s = add(s, r);
        return s;
    }

    /// Face cut out by facet `i`.
    Cone facet_face(std::size_t i) const {
        Mat tight;
        for (const auto& r : rays_)
            if (dot(facets_[i], r) == 0)
                tight.push_back(r);
        return from_generators(dim_, tight, lineality_);
    }

    friend bool operator==(const Cone& a, const Cone& b) {
        return a.dim_ == b.dim_ && a.rays_ == b.rays_ && a.lineality_ == b.lineality_ &&
               a.facets_ == b.facets_ && a.equations_ == b.equations_;
    }
    friend bool operator!=(const Cone& a, const Cone& b) { return !(a == b); }

  private:
    Cone(std::size_t dim, Mat rays, Mat lin, Mat facets, Mat eqs)
        : dim_(dim), rays_(std::move(rays)), lineality_(std::move(lin)), facets_(std::move(facets)),
          equations_(std::move(eqs)) {}

    static void check_dims(std::size_t dim, const Mat& rows) {
        for (const auto& r : rows)
            if (r.size() != dim)
                throw Error("dimension_mismatch", "vector of length " + std::to_string(r.size()) +
                                                      " in a cone of ambient dimension " + std::to_string(dim));
    }

    std::size_t dim_ = 0;
    Mat rays_, lineality_, facets_, equations_;
};

/// Both representations of the same cone; the returned object is the canonical form.
inline Cone dualize(const Cone& c) { return Cone::from_generators(c.ambient_dim(), c.rays(), c.lineality()); }

/// The dual cone {y : <y, x> >= 0 for all x in c}.
inline Cone dual_cone(const Cone& c) { return Cone::from_generators(c.ambient_dim(), c.facets(), c.equations()); }

inline Cone intersect(const Cone& a, const Cone& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw Error("dimension_mismatch", "intersecting cones of different ambient dimension");
    return Cone::from_inequalities(a.ambient_dim(), detail::stack(a.facets(), b.facets()),
                                   detail::stack(a.equations(), b.equations()));
}

/// Triangulation of a pointed cone into simplicial cones using only its extreme rays.
/// Placing order: the first ray is coned over a triangulation of every facet avoiding it.
inline std::vector<Mat> triangulate(const Cone& c) {
    if (!c.is_pointed())
        throw Error("not_pointed", "triangulate needs a pointed cone");
    if (c.rays().size() == c.dim())
        return {c.rays()};
    const Vec& apex = c.rays().front();
    std::vector<Mat> out;
    for (std::size_t i = 0; i < c.facets().size(); ++i) {
        if (dot(c.facets()[i], apex) == 0)
            continue;
        for (auto simplex : triangulate(c.facet_face(i))) {
            simplex.insert(simplex.begin(), apex);
            out.push_back(std::move(simplex));
        }
    }
    return out;
}

/// Volume of {x in c : level(x) <= 1} for a full-dimensional pointed cone and a functional
/// positive on every ray.
inline Rational sliced_volume(const Cone& c, const Vec& level) {
    if (!c.is_full_dimensional())
        return 0;
    const std::size_t n = c.ambient_dim();
    Rational factorial = 1;
    for (std::size_t i = 2; i <= n; ++i)
        factorial *= Rational(static_cast<long>(i));
    Rational vol = 0;
    for (const auto& simplex : triangulate(c)) {
        Mat m;
        for (const auto& r : simplex) {
            const Rational l = dot(level, r);
            if (l <= 0)
                throw Error("domain", "slicing functional is not positive on the cone");
            m.push_back(scale(1 / l, r));
        }
        Rational d = determinant(m);
        vol += (d < 0 ? Rational(-d) : d) / factorial;
    }
    return vol;
}

} // namespace glab
