#pragma once

#include <optional>
#include <utility>

#include "glab/rational.hpp"

namespace glab {

struct Echelon {
    Mat rows;                       // reduced row echelon form, zero rows removed
    std::vector<std::size_t> pivots; // pivot column of each row
};

/// Reduced row echelon form over Q.
inline Echelon rref(Mat m, std::size_t cols) {
    Echelon e;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0)
            ++p;
        if (p == m.size())
            continue;
        std::swap(m[r], m[p]);
        const Rational inv = 1 / m[r][c];
        for (auto& x : m[r])
            x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0)
                continue;
            const Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                m[i][j] -= f * m[r][j];
        }
        e.pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    e.rows = std::move(m);
    return e;
}

inline std::size_t rank(const Mat& m, std::size_t cols) { return rref(m, cols).rows.size(); }

/// Basis of {x : m x = 0}, one vector per free column, canonically determined by the row space.
inline Mat nullspace(const Mat& m, std::size_t cols) {
    const Echelon e = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    Mat basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f])
            continue;
        Vec v = zeros(cols);
        v[f] = 1;
        for (std::size_t i = 0; i < e.rows.size(); ++i)
            v[e.pivots[i]] = -e.rows[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Canonical basis of the row space: the RREF rows scaled to primitive integers.
inline Mat canonical_basis(const Mat& m, std::size_t cols) {
    Mat rows = rref(m, cols).rows;
    for (auto& r : rows)
        r = primitive(r);
    return rows;
}

/// Some solution of m x = b, or nullopt when inconsistent.
inline std::optional<Vec> solve(const Mat& m, const Vec& b, std::size_t cols) {
    Mat aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i)
        aug[i].push_back(b[i]);
    const Echelon e = rref(aug, cols + 1);
    Vec x = zeros(cols);
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        if (e.pivots[i] == cols)
            return std::nullopt;
        x[e.pivots[i]] = e.rows[i][cols];
    }
    return x;
}

inline Rational determinant(Mat m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0)
                continue;
            const Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j)
                m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

/// Inverse of a square matrix; nullopt if singular.
inline std::optional<Mat> inverse(const Mat& m) {
    const std::size_t n = m.size();
    Mat aug = m;
    for (std::size_t i = 0; i < n; ++i) {
        Vec e = unit(n, i);
        aug[i].insert(aug[i].end(), e.begin(), e.end());
    }
    const Echelon e = rref(aug, 2 * n);
    if (e.rows.size() < n || e.pivots[n - 1] != n - 1)
        return std::nullopt;
    Mat inv(n);
    for (std::size_t i = 0; i < n; ++i)
        inv[i] = Vec(e.rows[i].begin() + static_cast<std::ptrdiff_t>(n), e.rows[i].end());
    return inv;
}

/// Indices of a maximal linearly independent subset of `rows`, chosen greedily in order.
inline std::vector<std::size_t> independent_subset(const Mat& rows, std::size_t cols,
                                                   const std::vector<std::size_t>& order) {
    std::vector<std::size_t> picked;
    Mat acc;
    for (auto i : order) {
        acc.push_back(rows[i]);
        if (rank(acc, cols) == acc.size())
            picked.push_back(i);
        else
            acc.pop_back();
    }
    return picked;
}

} // namespace glab
