#pragma once

#include <map>
#include <set>
#include <string>

#include "glab/rational.hpp"

namespace glab {

/// Element of Z^r + Z/t_1 + ... + Z/t_s, torsion coordinates reduced into [0, t_i).
struct JacobianElement {
    std::vector<Integer> free;
    std::vector<Integer> torsion;
    friend bool operator==(const JacobianElement&, const JacobianElement&) = default;
};

/// Genus 0 or 1 curve. Each named point P carries j(P) = [P - O] for a fixed base point O,
/// so an integral divisor D is linearly equivalent to deg(D) O + sum n_P j(P).
class CurveModel {
public:
    CurveModel(int genus, std::size_t free_rank, std::vector<Integer> torsion_orders,
               std::vector<std::pair<std::string, JacobianElement>> points)
        : genus_(genus), free_rank_(free_rank), orders_(std::move(torsion_orders)) {
        if (genus != 0 && genus != 1)
            throw Error("unsupported_genus", "only genus 0 and 1 curves are modelled");
        if (genus == 0 && (free_rank != 0 || !orders_.empty()))
            throw Error("invalid_curve", "a genus 0 curve has trivial jacobian");
        for (const auto& t : orders_)
            if (t < 2)
                throw Error("invalid_curve", "torsion orders must be at least 2");
        for (auto& [name, e] : points) {
            if (e.free.empty() && e.torsion.empty()) {
                e.free.assign(free_rank_, 0);
                e.torsion.assign(orders_.size(), 0);
            }
            if (e.free.size() != free_rank_ || e.torsion.size() != orders_.size())
                throw Error("invalid_curve", "point " + name + " has a jacobian element of the wrong shape");
            if (!index_.emplace(name, points_.size()).second)
                throw Error("invalid_curve", "duplicate point " + name);
            points_.emplace_back(name, normalize(e));
        }
    }

    int genus() const { return genus_; }
    std::size_t free_rank() const { return free_rank_; }
    const std::vector<Integer>& torsion_orders() const { return orders_; }
    const std::vector<std::pair<std::string, JacobianElement>>& points() const { return points_; }

    const JacobianElement& point(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end())
            throw Error("unknown_point", "curve has no point named " + name);
        return points_[it->second].second;
    }

    JacobianElement identity() const {
        return {std::vector<Integer>(free_rank_, 0), std::vector<Integer>(orders_.size(), 0)};
    }

    JacobianElement normalize(JacobianElement e) const {
        for (std::size_t i = 0; i < orders_.size(); ++i)
            e.torsion[i] = ((e.torsion[i] % orders_[i]) + orders_[i]) % orders_[i];
        return e;
    }

    JacobianElement add(const JacobianElement& a, const JacobianElement& b) const {
        JacobianElement c = a;
        for (std::size_t i = 0; i < c.free.size(); ++i)
            c.free[i] += b.free[i];
        for (std::size_t i = 0; i < c.torsion.size(); ++i)
            c.torsion[i] += b.torsion[i];
        return normalize(c);
    }

    JacobianElement times(const Integer& k, const JacobianElement& a) const {
        JacobianElement c = a;
        for (auto& x : c.free)
            x *= k;
        for (auto& x : c.torsion)
            x *= k;
        return normalize(c);
    }

    /// Order of an element; 0 for elements of infinite order.
    Integer order(const JacobianElement& e) const {
        for (const auto& x : e.free)
            if (x != 0)
                return 0;
        Integer o = 1;
        for (std::size_t i = 0; i < orders_.size(); ++i)
            o = lcm(o, orders_[i] / gcd(e.torsion[i], orders_[i]));
        return o;
    }

private:
    int genus_;
    std::size_t free_rank_;
    std::vector<Integer> orders_;
    std::vector<std::pair<std::string, JacobianElement>> points_;
    std::map<std::string, std::size_t> index_;
};

/// Finite formal sum of named points with rational multiplicities.
struct CurveDivisor {
    std::map<std::string, Rational> mult;

    CurveDivisor floored() const {
        CurveDivisor d;
        for (const auto& [p, a] : mult)
            d.mult[p] = Rational(floor(a));
        return d;
    }
};

inline Rational degree(const CurveDivisor& d) {
    Rational s = 0;
    for (const auto& [p, a] : d.mult)
        s += a;
    return s;
}

inline CurveDivisor operator+(const CurveDivisor& a, const CurveDivisor& b) {
    CurveDivisor c = a;
    for (const auto& [p, x] : b.mult)
        c.mult[p] += x;
    return c;
}

inline CurveDivisor operator*(const Rational& k, const CurveDivisor& a) {
    CurveDivisor c;
    for (const auto& [p, x] : a.mult)
        c.mult[p] = k * x;
    return c;
}

inline CurveDivisor operator-(const CurveDivisor& a) { return Rational(-1) * a; }

/// sum n_P j(P) for an integral divisor.
inline JacobianElement jacobian_class(const CurveModel& c, const CurveDivisor& d) {
    JacobianElement e = c.identity();
    for (const auto& [p, a] : d.mult) {
        if (!is_integer(a))
            throw Error("not_integral", "jacobian class needs integral multiplicities");
        e = c.add(e, c.times(numerator(a), c.point(p)));
    }
    return e;
}

inline Integer riemann_roch_h0(const CurveModel& c, const CurveDivisor& d) {
    const CurveDivisor f = d.floored();
    const Integer deg = numerator(degree(f));
    if (c.genus() == 0)
        return deg >= 0 ? deg + 1 : Integer(0);
    if (deg >= 1)
        return deg;
    if (deg == 0)
        return jacobian_class(c, f) == c.identity() ? Integer(1) : Integer(0);
    return 0;
}

struct FgVerdict {
    bool finitely_generated = true;
    std::string witness;
};

/// Closed-form finite generation of R(C; D, A) = sum over (i, j) in N^2 of H^0(iD + jA), for
/// integral D, A. The support is the part of the quadrant of nonnegative degree, except that a
/// degree-0 ray only carries sections at multiples of the order of its class. The ring fails to
/// be finitely generated exactly when such a ray bounds a two-dimensional support and its class
/// has infinite order: the support is then a cone with one open boundary ray.
inline FgVerdict pair_verdict(const CurveModel& c, const CurveDivisor& d, const CurveDivisor& a) {
    const Integer d1 = numerator(degree(d.floored())), d2 = numerator(degree(a.floored()));
    FgVerdict v;
    if (c.genus() == 0) {
        v.witness = "trivial jacobian: every degree-0 class is trivial";
        return v;
    }
    if (d1 <= 0 && d2 <= 0) {
        v.witness = d1 == 0 && d2 == 0 ? "all degrees zero: monoid algebra of a subgroup of Z^2"
                                       : "no bidegree of positive degree";
        return v;
    }
    if (d1 > 0 && d2 > 0) {
        v.witness = "every nonzero bidegree has positive degree";
        return v;
    }
    // exactly one degree-0 ray (p, q) bounds the support
    Integer rp, rq;
    if (d2 <= 0) { // d1 > 0: ray along i d1 + j d2 = 0, i.e. direction (-d2, d1)
        const Integer h = gcd(-d2, d1);
        rp = -d2 / h;
        rq = d1 / h;
    } else { // d2 > 0 >= d1: direction (d2, -d1)
        const Integer h = gcd(d2, -d1);
        rp = d2 / h;
        rq = -d1 / h;
    }
    const JacobianElement cls =
        c.add(c.times(rp, jacobian_class(c, d.floored())), c.times(rq, jacobian_class(c, a.floored())));
    const Integer ord = c.order(cls);
    const std::string ray = "(" + rp.str() + "," + rq.str() + ")";
    if (ord == 0) {
        v.finitely_generated = false;
        v.witness = "degree-0 boundary ray " + ray + " carries a class of infinite order";
    } else {
        v.witness = "degree-0 boundary ray " + ray + " carries a class of order " + ord.str() +
                    "; generators on it at multiples of " + ord.str();
    }
    return v;
}

struct BigradedSupport {
    long box = 0;
    std::set<std::pair<long, long>> pairs;
    bool finitely_generated = true;
    std::string witness;
    bool consistent = true; // enumeration agrees with the closed-form support
};

inline BigradedSupport bigraded_support(const CurveModel& c, const CurveDivisor& d, const CurveDivisor& a, long n) {
    if (n < 1)
        throw Error("invalid_box", "box bound must be at least 1");
    BigradedSupport s;
    s.box = n;
    const CurveDivisor fd = d.floored(), fa = a.floored();
    const Integer d1 = numerator(degree(fd)), d2 = numerator(degree(fa));
    for (long i = 0; i <= n; ++i)
        for (long j = 0; j <= n; ++j) {
            const CurveDivisor x = Rational(i) * fd + Rational(j) * fa;
            const bool has = riemann_roch_h0(c, x) > 0;
            if (has)
                s.pairs.emplace(i, j);
            // closed form: positive degree, or degree 0 with trivial class
            const Integer deg = i * d1 + j * d2;
            bool predicted = deg > 0;
            if (deg == 0)
                predicted = c.genus() == 0 || jacobian_class(c, x) == c.identity();
            if (predicted != has)
                s.consistent = false;
        }
    const auto v = pair_verdict(c, d, a);
    s.finitely_generated = v.finitely_generated;
    s.witness = v.witness;
    return s;
}

/// h^0(Y, M^k) for Y = P(O(D) + O(A)), M = O_Y(1): the sum over i + j = k of h^0(iD + jA).
inline std::vector<Integer> ruled_surface_slice_dims(const CurveModel& c, const CurveDivisor& d, const CurveDivisor& a,
                                                     long k_max) {
    std::vector<Integer> out;
    for (long k = 0; k <= k_max; ++k) {
        Integer s = 0;
        for (long i = 0; i <= k; ++i)
            s += riemann_roch_h0(c, Rational(i) * d.floored() + Rational(k - i) * a.floored());
        out.push_back(s);
    }
    return out;
}

struct TwistedRing {
    bool finitely_generated = true;
    std::string witness;
    std::vector<Integer> dims;
};

/// Section ring of O_Y(1) + p^*G: in degree k it is the sum over i + j = k of
/// H^0(i(D + G) + j(A + G)), the pair ring of (D + G, A + G) with its grading collapsed.
inline TwistedRing twisted_slice_ring_fg(const CurveModel& c, const CurveDivisor& d, const CurveDivisor& a,
                                         const CurveDivisor& g, long k_max) {
    if (degree(g) != 0)
        throw Error("nonzero_degree_twist", "twist must have degree 0");
    const CurveDivisor dg = d.floored() + g.floored(), ag = a.floored() + g.floored();
    const auto v = pair_verdict(c, dg, ag);
    return {v.finitely_generated, v.witness, ruled_surface_slice_dims(c, dg, ag, k_max)};
}

/// Numerical class e * xi + p^*B on Y = P(O(D) + O(A)), xi = c_1(O_Y(1)), e in {0, 1}.
struct RuledClass {
    int fiber_degree = 1;
    CurveDivisor base;
};

struct GenVerdict {
    bool gen = true;
    std::string explanation;
};

/// Whether every divisor numerically equivalent to the class has a finitely generated ring.
/// Numerically equivalent divisors differ by p^*G with deg G = 0, and G ranges over the whole
/// degree-0 jacobian, so a twist of infinite order exists iff the free rank is positive.
inline GenVerdict is_gen_numeric_class(const CurveModel& c, const CurveDivisor& d, const CurveDivisor& a,
                                       const RuledClass& cls) {
    if (cls.fiber_degree != 0 && cls.fiber_degree != 1)
        throw Error("unsupported_class_shape", "fiber degree must be 0 or 1");
    const Integer b = numerator(degree(cls.base.floored()));
    if (cls.fiber_degree == 0)
        return {true, "pullback of a curve class: every twist has the section ring of a divisor on the curve"};
    const Integer d1 = numerator(degree(d.floored())) + b, d2 = numerator(degree(a.floored())) + b;
    if (d1 <= 0 && d2 <= 0)
        throw Error("unsupported_class_shape", "class has no bidegree of positive degree");
    if (c.genus() == 0)
        return {true, "genus 0: the jacobian is trivial, no twist changes the ring"};
    if (d1 > 0 && d2 > 0)
        return {true, "both summands have positive degree after twisting: no degree-0 boundary ray"};
    if (c.free_rank() == 0)
        return {true, "degree-0 boundary ray exists but the jacobian is finite, so every twist is torsion there"};
    return {false, "degree-0 boundary ray exists and a twist of infinite order makes its class non-torsion"};
}

} // namespace glab
