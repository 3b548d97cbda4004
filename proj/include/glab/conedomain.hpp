#pragma once

#include <map>
#include <random>
#include <set>

#include "glab/polyhedron.hpp"

namespace glab {

/// Finite group of lattice automorphisms given by generators acting on column vectors.
struct LatticeGroupAction {
    std::size_t rank = 0;
    std::vector<Mat> generators;
};

namespace detail {

inline bool is_integral(const Mat& g) {
    for (const auto& row : g)
        for (const auto& x : row)
            if (!is_integer(x))
                return false;
    return true;
}

/// Permutation of the cone's rays induced by g, or nothing if g does not preserve the cone.
inline std::optional<std::vector<std::size_t>> ray_permutation(const Mat& g, const Cone& cone) {
    std::vector<std::size_t> perm;
    for (const auto& r : cone.rays()) {
        const Vec img = glab::apply(g, r);
        const auto it = std::find(cone.rays().begin(), cone.rays().end(), img);
        if (it == cone.rays().end())
            return std::nullopt;
        perm.push_back(static_cast<std::size_t>(it - cone.rays().begin()));
    }
    return perm;
}

inline bool mat_less(const Mat& a, const Mat& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), canonical_less);
}

inline std::vector<long> primes(std::size_t count) {
    std::vector<long> ps;
    for (long c = 2; ps.size() < count; ++c)
        if (std::all_of(ps.begin(), ps.end(), [c](long p) { return c % p != 0; }))
            ps.push_back(c);
    return ps;
}

} // namespace detail

/// All elements of the group, identity first, the rest in lexicographic order.
/// The cone's rays span the space, so an element is determined by the permutation it induces
/// on them; closure is computed on matrices and capped at (#rays)!.
inline std::vector<Mat> enumerate_group(const LatticeGroupAction& action, const Cone& cone) {
    const std::size_t n = action.rank;
    if (cone.ambient_dim() != n)
        throw Error("dimension_mismatch", "cone and action have different ranks");
    if (!cone.is_full_dimensional() || !cone.is_pointed())
        throw Error("degenerate_cone", "cone must be full-dimensional and pointed");
    for (const auto& g : action.generators) {
        if (g.size() != n || std::any_of(g.begin(), g.end(), [n](const Vec& r) { return r.size() != n; }))
            throw Error("dimension_mismatch", "generator has the wrong shape");
        if (!detail::is_integral(g) || (determinant(g) != 1 && determinant(g) != -1))
            throw Error("not_unimodular", "generator is not an integral matrix of determinant +-1");
        if (!detail::ray_permutation(g, cone))
            throw Error("not_preserving", "generator does not map the cone onto itself");
    }
    Integer cap = 1;
    for (std::size_t i = 2; i <= cone.rays().size(); ++i)
        cap *= static_cast<long>(i);

    std::vector<Mat> elems{identity(n)};
    std::set<Mat> seen{identity(n)};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : action.generators) {
            Mat h = multiply(g, elems[i]);
            if (seen.insert(h).second) {
                if (Integer(static_cast<long>(seen.size())) > cap)
                    throw Error("group_cap_exceeded", "group larger than the ray permutation bound");
                elems.push_back(std::move(h));
            }
        }
    std::sort(elems.begin() + 1, elems.end(), detail::mat_less);
    return elems;
}

inline bool has_trivial_stabilizer(const std::vector<Mat>& group, const Vec& x) {
    const Mat id = identity(x.size());
    return std::none_of(group.begin(), group.end(), [&](const Mat& g) { return g != id && glab::apply(g, x) == x; });
}

/// Interior point with trivial stabilizer. Candidates are sum w_i delta_i over the rays in
/// canonical order with w_i = i, then w_i = i + p^i for the primes p = 2, 3, 5, ...
/// A fixed subspace contains only finitely many candidates, so the search ends.
inline Vec find_basepoint(const Cone& cone, const std::vector<Mat>& group) {
    const auto& rays = cone.rays();
    auto candidate = [&](auto weight) {
        Vec x = zeros(cone.ambient_dim());
        for (std::size_t i = 0; i < rays.size(); ++i)
            x = add(x, scale(weight(static_cast<long>(i + 1)), rays[i]));
        return x;
    };
    Vec x = candidate([](long i) { return Rational(i); });
    if (has_trivial_stabilizer(group, x))
        return x;
    for (long p : detail::primes(64)) {
        x = candidate([p](long i) {
            Integer pw = 1;
            for (long k = 0; k < i; ++k)
                pw *= p;
            return Rational(i) + Rational(pw);
        });
        if (has_trivial_stabilizer(group, x))
            return x;
    }
    throw Error("internal", "no basepoint with trivial stabilizer found");
}

/// G = sum over the group of g^T g, checked positive definite and invariant.
inline Mat averaged_gram(const std::vector<Mat>& group) {
    const std::size_t n = group.front().size();
    Mat gram(n, zeros(n));
    for (const auto& g : group) {
        const Mat gtg = multiply(transpose(g, n), g);
        for (std::size_t i = 0; i < n; ++i)
            gram[i] = add(gram[i], gtg[i]);
    }
    for (std::size_t k = 1; k <= n; ++k) {
        Mat lead;
        for (std::size_t i = 0; i < k; ++i)
            lead.emplace_back(gram[i].begin(), gram[i].begin() + static_cast<std::ptrdiff_t>(k));
        if (determinant(lead) <= 0)
            throw Error("internal", "averaged form is not positive definite");
    }
    for (const auto& g : group)
        if (multiply(multiply(transpose(g, n), gram), g) != gram)
            throw Error("internal", "averaged form is not invariant");
    return gram;
}

struct FundamentalDomain {
    Vec x0;
    Mat gram;
    Cone domain;
    std::vector<Mat> group;
    std::size_t group_order() const { return group.size(); }
};

/// Pi = {x in cone : d(x, x0) <= d(x, g x0) for all g}, d(x, y) = x^T G y.
inline FundamentalDomain fundamental_domain(const Cone& cone, const std::vector<Mat>& group, const Vec& x0) {
    if (!cone.in_relative_interior(x0))
        throw Error("invalid_basepoint", "basepoint must lie in the interior of the cone");
    if (!has_trivial_stabilizer(group, x0))
        throw Error("invalid_basepoint", "basepoint has a nontrivial stabilizer");
    FundamentalDomain fd{x0, averaged_gram(group), Cone(), group};
    Mat ineqs = cone.facets();
    for (std::size_t i = 1; i < group.size(); ++i)
        ineqs.push_back(glab::apply(fd.gram, sub(glab::apply(group[i], x0), x0)));
    fd.domain = Cone::from_inequalities(cone.ambient_dim(), ineqs, cone.equations());
    return fd;
}

inline FundamentalDomain fundamental_domain(const Cone& cone, const LatticeGroupAction& action) {
    const auto group = enumerate_group(action, cone);
    return fundamental_domain(cone, group, find_basepoint(cone, group));
}

struct TilingReport {
    std::size_t samples = 0;
    std::size_t covered = 0;        // h^{-1} w in Pi for the selected h
    std::size_t on_boundary = 0;    // sample in no g int(Pi), only on translates of the boundary
    std::size_t multiply_hit = 0;   // sample in more than one g int(Pi)
    std::vector<Vec> cover_failures;
    std::size_t disjoint_checked = 0;
    std::size_t disjoint_certified = 0; // strict LP infeasible
    std::vector<Vec> overlap_witnesses;
    bool ok() const { return covered == samples && multiply_hit == 0 && disjoint_certified == disjoint_checked; }
};

/// Random rational point of a cone: nonnegative combination of rays with a common denominator.
inline Vec sample_in_cone(const Cone& cone, std::mt19937_64& rng) {
    Vec w = zeros(cone.ambient_dim());
    const Rational den(static_cast<long>(1 + rng() % 7));
    for (const auto& r : cone.rays())
        w = add(w, scale(Rational(static_cast<long>(rng() % 10)) / den, r));
    return w;
}

inline TilingReport verify_tiling(const FundamentalDomain& fd, const Cone& cone, std::size_t sample_count,
                                  std::uint64_t seed) {
    const std::size_t n = cone.ambient_dim();
    std::vector<Mat> inverses;
    for (const auto& g : fd.group)
        inverses.push_back(*inverse(g));
    TilingReport rep;
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < sample_count; ++s) {
        const Vec w = sample_in_cone(cone, rng);
        ++rep.samples;
        std::size_t h = 0;
        Rational best = dot(w, glab::apply(fd.gram, glab::apply(fd.group[0], fd.x0)));
        for (std::size_t i = 1; i < fd.group.size(); ++i) {
            const Rational d = dot(w, glab::apply(fd.gram, glab::apply(fd.group[i], fd.x0)));
            if (d < best) {
                best = d;
                h = i;
            }
        }
        if (fd.domain.contains(glab::apply(inverses[h], w)))
            ++rep.covered;
        else
            rep.cover_failures.push_back(w);
        std::size_t hits = 0;
        for (const auto& gi : inverses)
            if (fd.domain.in_relative_interior(glab::apply(gi, w)))
                ++hits;
        if (hits == 0)
            ++rep.on_boundary;
        if (hits > 1)
            ++rep.multiply_hit;
    }
    for (std::size_t i = 1; i < fd.group.size(); ++i) {
        ++rep.disjoint_checked;
        std::vector<Inequality> rows;
        for (const auto& f : fd.domain.facets()) {
            rows.push_back({f, 1});
            // x in g Pi iff g^{-1} x in Pi: facet f of Pi pulls back to f g^{-1}
            rows.push_back({glab::apply(transpose(inverses[i], n), f), 1});
        }
        const Polyhedron p(n, rows);
        if (p.feasible())
            rep.overlap_witnesses.push_back(*p.witness());
        else
            ++rep.disjoint_certified;
    }
    return rep;
}

/// vol(Pi) / vol(cone) under a group-invariant slicing functional.
inline Rational volume_fraction(const FundamentalDomain& fd, const Cone& cone) {
    const std::size_t n = cone.ambient_dim();
    Vec u = zeros(n);
    for (const auto& f : cone.facets())
        u = add(u, f);
    Vec level = zeros(n);
    for (const auto& g : fd.group)
        level = add(level, glab::apply(transpose(g, n), u));
    return sliced_volume(fd.domain, level) / sliced_volume(cone, level);
}

} // namespace glab
