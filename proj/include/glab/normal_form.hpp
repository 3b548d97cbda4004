#pragma once

#include "glab/rational.hpp"

namespace glab {

using IMat = std::vector<std::vector<Integer>>;

inline IMat integer_identity(std::size_t n) {
    IMat m(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        m[i][i] = 1;
    return m;
}

inline IMat integer_multiply(const IMat& a, const IMat& b) {
    const std::size_t cols = b.empty() ? 0 : b.front().size();
    IMat r(a.size(), std::vector<Integer>(cols, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < cols; ++j)
                r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline IMat to_integer(const Mat& m) {
    IMat r;
    for (const auto& row : m) {
        std::vector<Integer> ir;
        for (const auto& x : row) {
            if (!is_integer(x))
                throw Error("not_integral", "expected an integer matrix");
            ir.push_back(numerator(x));
        }
        r.push_back(std::move(ir));
    }
    return r;
}

inline Mat to_rational(const IMat& m) {
    Mat r;
    for (const auto& row : m) {
        Vec v;
        for (const auto& x : row)
            v.emplace_back(x);
        r.push_back(std::move(v));
    }
    return r;
}

struct SmithForm {
    IMat u; // rows x rows, unimodular
    IMat s; // rows x cols, diagonal, d_1 | d_2 | ...
    IMat v; // cols x cols, unimodular
    std::vector<Integer> diagonal() const {
        std::vector<Integer> d;
        for (std::size_t i = 0; i < s.size() && i < (s.empty() ? 0 : s[0].size()); ++i)
            d.push_back(s[i][i]);
        return d;
    }
    std::size_t rank() const {
        std::size_t r = 0;
        for (const auto& d : diagonal())
            if (d != 0)
                ++r;
        return r;
    }
};

/// Smith normal form: u * m * v = s with u, v unimodular and s diagonal, nonnegative,
/// each diagonal entry dividing the next.
inline SmithForm smith_normal_form(const IMat& m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    SmithForm f{integer_identity(rows), m, integer_identity(cols)};
    auto& s = f.s;

    auto row_op = [&](std::size_t dst, std::size_t src, const Integer& q) { // row_dst -= q row_src
        for (std::size_t j = 0; j < cols; ++j)
            s[dst][j] -= q * s[src][j];
        for (std::size_t j = 0; j < rows; ++j)
            f.u[dst][j] -= q * f.u[src][j];
    };
    auto col_op = [&](std::size_t dst, std::size_t src, const Integer& q) { // col_dst -= q col_src
        for (std::size_t i = 0; i < rows; ++i)
            s[i][dst] -= q * s[i][src];
        for (std::size_t i = 0; i < cols; ++i)
            f.v[i][dst] -= q * f.v[i][src];
    };
    auto swap_rows = [&](std::size_t a, std::size_t b) {
        std::swap(s[a], s[b]);
        std::swap(f.u[a], f.u[b]);
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (auto& r : s)
            std::swap(r[a], r[b]);
        for (auto& r : f.v)
            std::swap(r[a], r[b]);
    };
    auto abs_int = [](const Integer& x) { return x < 0 ? Integer(-x) : x; };

    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        while (true) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            bool found = false;
            std::size_t pi = t, pj = t;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (s[i][j] != 0 && (!found || abs_int(s[i][j]) < abs_int(s[pi][pj]))) {
                        found = true;
                        pi = i;
                        pj = j;
                    }
            if (!found)
                return f;
            swap_rows(t, pi);
            swap_cols(t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (s[i][t] == 0)
                    continue;
                row_op(i, t, floor_div(s[i][t], s[t][t]));
                if (s[i][t] != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (s[t][j] == 0)
                    continue;
                col_op(j, t, floor_div(s[t][j], s[t][t]));
                if (s[t][j] != 0)
                    clean = false;
            }
            if (!clean)
                continue;

            // Divisibility: fold an offending row into the pivot row and retry.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (s[i][j] % s[t][t] != 0) {
                        row_op(t, i, Integer(-1));
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (s[t][t] < 0) {
            for (auto& x : s[t])
                x = -x;
            for (auto& x : f.u[t])
                x = -x;
        }
    }
    return f;
}

struct HermiteForm {
    IMat h; // row-style echelon form, positive pivots, entries above pivots reduced
    IMat w; // unimodular with w * m = h
};

/// Row Hermite normal form of an integer matrix.
inline HermiteForm hermite_normal_form(const IMat& m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    HermiteForm f{m, integer_identity(rows)};
    auto& h = f.h;
    auto combine = [&](std::size_t a, std::size_t b, const Integer& p, const Integer& q, const Integer& r,
                       const Integer& s2) { // (row_a, row_b) <- (p a + q b, r a + s b)
        for (std::size_t j = 0; j < cols; ++j) {
            Integer x = h[a][j], y = h[b][j];
            h[a][j] = p * x + q * y;
            h[b][j] = r * x + s2 * y;
        }
        for (std::size_t j = 0; j < rows; ++j) {
            Integer x = f.w[a][j], y = f.w[b][j];
            f.w[a][j] = p * x + q * y;
            f.w[b][j] = r * x + s2 * y;
        }
    };
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (h[i][c] == 0)
                continue;
            // Extended gcd step on rows r and i.
            Integer a = h[r][c], b = h[i][c];
            Integer x0 = 1, y0 = 0, x1 = 0, y1 = 1, aa = a, bb = b;
            while (bb != 0) {
                Integer q = floor_div(aa, bb);
                Integer t = aa - q * bb;
                aa = bb;
                bb = t;
                t = x0 - q * x1;
                x0 = x1;
                x1 = t;
                t = y0 - q * y1;
                y0 = y1;
                y1 = t;
            }
            // x0 a + y0 b = aa = gcd (up to sign); (-b/g, a/g) completes a unimodular 2x2.
            const Integer g = aa;
            combine(r, i, x0, y0, -b / g, a / g);
        }
        if (h[r][c] == 0)
            continue;
        if (h[r][c] < 0) {
            for (auto& x : h[r])
                x = -x;
            for (auto& x : f.w[r])
                x = -x;
        }
        for (std::size_t i = 0; i < r; ++i) {
            const Integer q = floor_div(h[i][c], h[r][c]);
            if (q == 0)
                continue;
            for (std::size_t j = 0; j < cols; ++j)
                h[i][j] -= q * h[r][j];
            for (std::size_t j = 0; j < rows; ++j)
                f.w[i][j] -= q * f.w[r][j];
        }
        ++r;
    }
    return f;
}

} // namespace glab
