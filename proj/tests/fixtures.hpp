#pragma once

#include <random>

#include "glab/toric.hpp"

namespace fixtures {

using namespace glab;

inline Mat rows(std::initializer_list<std::initializer_list<long>> xs) {
    Mat m;
    for (auto r : xs)
        m.push_back(to_vec(r));
    return m;
}

inline Fan p2() { return {2, rows({{1, 0}, {0, 1}, {-1, -1}}), {{0, 1}, {1, 2}, {2, 0}}}; }

// rays D1..D4 = (1,0), (0,1), (-1,1), (0,-1); D2 is the (-1)-curve
inline Fan f1() { return {2, rows({{1, 0}, {0, 1}, {-1, 1}, {0, -1}}), {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}; }

inline Fan p1p1() { return {2, rows({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}), {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}; }

inline Fan f2() { return {2, rows({{1, 0}, {0, 1}, {-1, 2}, {0, -1}}), {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}; }

// P^2 blown up in two points
inline Fan dp7() {
    return {2, rows({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}}), {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}};
}

// P^2 / (Z/3): class group Z + Z/3
inline Fan p2_mod3() { return {2, rows({{-1, -1}, {2, -1}, {-1, 2}}), {{0, 1}, {1, 2}, {2, 0}}}; }

inline Fan p3() {
    return {3, rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}}), {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
}

// P^3 blown up at a torus-fixed point
inline Fan bl_p3() {
    return {3,
            rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}, {1, 1, 1}}),
            {{0, 1, 4}, {1, 2, 4}, {0, 2, 4}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
}

// Square pyramid over a square, the square split along u1u3: one side of a flop
inline Fan pyramid() {
    return {3,
            rows({{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}, {0, 0, -1}}),
            {{0, 1, 2}, {0, 2, 3}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}}};
}

inline std::vector<std::pair<std::string, Fan>> corpus() {
    return {{"P2", p2()},       {"F1", f1()}, {"P1xP1", p1p1()}, {"F2", f2()},        {"dP7", dp7()},
            {"P2/Z3", p2_mod3()}, {"P3", p3()}, {"BlP3", bl_p3()}, {"pyramid", pyramid()}};
}

inline Rational rnd(std::mt19937_64& rng, long lo, long hi) {
    return Rational(lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)));
}

inline Vec random_vec(std::mt19937_64& rng, std::size_t n, long lo, long hi) {
    Vec v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(rnd(rng, lo, hi));
    return v;
}

inline Vec random_primitive(std::mt19937_64& rng, std::size_t n, long bound) {
    for (;;) {
        Vec v = random_vec(rng, n, -bound, bound);
        if (!is_zero(v))
            return primitive(v);
    }
}

// Lattice points of {m : <m, v_rho> >= -a_rho} by scanning a box; no LP involved.
inline std::vector<Vec> brute_sections(const Fan& fan, const Vec& a, long box) {
    std::vector<Vec> out;
    const std::size_t n = fan.ambient_rank;
    Vec m(n, Rational(-box));
    for (;;) {
        bool ok = true;
        for (std::size_t r = 0; r < fan.rays.size() && ok; ++r)
            ok = dot(m, fan.rays[r]) >= -a[r];
        if (ok)
            out.push_back(m);
        std::size_t i = 0;
        while (i < n && m[i] == box)
            m[i++] = -box;
        if (i == n)
            break;
        m[i] += 1;
    }
    return out;
}

} // namespace fixtures

#include "glab/chambers.hpp"

namespace fixtures {

// Ring spanned by every torus-invariant prime divisor: its support is the effective cone.
inline glab::RingSpec full_spec(const glab::ToricModel& m) {
    glab::RingSpec s{m, {}};
    for (std::size_t r = 0; r < m.num_rays(); ++r)
        s.divisors.push_back({glab::unit(m.num_rays(), r)});
    return s;
}

inline glab::RingSpec class_spec(const glab::ToricModel& m, const glab::Mat& classes) {
    glab::RingSpec s{m, {}};
    for (const auto& c : classes)
        s.divisors.push_back({m.representative(c)});
    return s;
}

// Fan of P^2 on the F1 rays (1,0), (-1,1), (0,-1): F1 with its (-1)-curve contracted.
inline glab::Fan p2_from_f1() {
    return glab::canonical({2, rows({{1, 0}, {-1, 1}, {0, -1}}), {{0, 1}, {1, 2}, {2, 0}}});
}

} // namespace fixtures
