#pragma once

#include <functional>
#include <optional>

#include "glab/cone.hpp"

namespace glab {

/// Half-space <normal, x> >= bound.
struct Inequality {
    Vec normal;
    Rational bound;
};

/// Polyhedron {x : <a_i, x> >= b_i}. Feasibility is decided once at construction and cached
/// together with its certificate: a witness point, or a nonnegative multiplier vector y with
/// sum y_i a_i = 0 and sum y_i b_i > 0.
class Polyhedron {
  public:
    Polyhedron(std::size_t dim, std::vector<Inequality> rows);

    std::size_t dim() const { return dim_; }
    const std::vector<Inequality>& inequalities() const { return rows_; }
    bool feasible() const { return witness_.has_value(); }
    const std::optional<Vec>& witness() const { return witness_; }
    const std::optional<Vec>& infeasibility_certificate() const { return farkas_; }

    bool contains(const Vec& x) const {
        for (const auto& r : rows_)
            if (dot(r.normal, x) < r.bound)
                return false;
        return true;
    }

  private:
    std::size_t dim_;
    std::vector<Inequality> rows_;
    std::optional<Vec> witness_;
    std::optional<Vec> farkas_;
};

enum class LpStatus { optimal, unbounded, infeasible };

inline const char* to_string(LpStatus s) {
    switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::infeasible: return "infeasible";
    }
    return "?";
}

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Rational value;
    Vec point;                      // optimal basic solution
    std::vector<std::size_t> tight; // indices of inequalities tight at `point`
};

namespace detail {

/// Dense two-phase tableau simplex with Bland's rule for
///   min c.x  s.t.  A x = b, x >= 0,  with b >= 0.
/// Returns the status, and for the optimal case a basic optimal solution.
/// `farkas` receives a phase-one dual certificate when the system is infeasible.
struct StandardLp {
    Mat a;
    Vec b;
    Vec c;
};

struct StandardResult {
    LpStatus status;
    Vec x;
    Vec farkas; // y with y^T A <= 0 and y^T b > 0 (in the original row signs)
};

inline void pivot(Mat& t, std::size_t row, std::size_t col) {
    const Rational inv = 1 / t[row][col];
    for (auto& x : t[row])
        x *= inv;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i == row || t[i][col] == 0)
            continue;
        const Rational f = t[i][col];
        for (std::size_t j = 0; j < t[i].size(); ++j)
            if (t[row][j] != 0)
                t[i][j] -= f * t[row][j];
    }
}

/// Runs simplex iterations on tableau `t` whose last row is the reduced-cost row and last
/// column the right-hand side. Only columns with `allowed[j]` may enter. Returns false if
/// unbounded.
inline bool iterate(Mat& t, std::vector<std::size_t>& basis, const std::vector<bool>& allowed) {
    const std::size_t rows = t.size() - 1;
    const std::size_t rhs = t[0].size() - 1;
    while (true) {
        std::size_t enter = rhs;
        for (std::size_t j = 0; j < rhs; ++j)
            if (allowed[j] && t[rows][j] < 0) {
                enter = j;
                break;
            }
        if (enter == rhs)
            return true;
        std::size_t leave = rows;
        Rational best;
        for (std::size_t i = 0; i < rows; ++i) {
            if (t[i][enter] <= 0)
                continue;
            const Rational ratio = t[i][rhs] / t[i][enter];
            if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == rows)
            return false;
        pivot(t, leave, enter);
        basis[leave] = enter;
    }
}

inline StandardResult solve_standard(const StandardLp& lp) {
    const std::size_t m = lp.a.size();
    const std::size_t n = lp.c.size();
    // Columns: n structural, m artificial, rhs.
    Mat t(m + 1, zeros(n + m + 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            t[i][j] = lp.a[i][j];
        t[i][n + i] = 1;
        t[i][n + m] = lp.b[i];
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= n + m; ++j)
            if (j < n || j == n + m)
                t[m][j] -= t[i][j];
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i)
        basis[i] = n + i;

    std::vector<bool> allowed(n + m, true);
    iterate(t, basis, allowed);

    StandardResult res{LpStatus::infeasible, {}, {}};
    if (t[m][n + m] < 0) {
        // Phase-one duals: the reduced cost of artificial i is 1 - y_i.
        res.farkas = zeros(m);
        for (std::size_t i = 0; i < m; ++i)
            res.farkas[i] = 1 - t[m][n + i];
        return res;
    }

    // Drive artificials out of the basis; rows that cannot pivot are redundant.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n)
            continue;
        for (std::size_t j = 0; j < n; ++j)
            if (t[i][j] != 0) {
                pivot(t, i, j);
                basis[i] = j;
                break;
            }
    }
    for (std::size_t j = n; j < n + m; ++j)
        allowed[j] = false;

    // Phase two cost row.
    t[m] = zeros(n + m + 1);
    for (std::size_t j = 0; j < n; ++j)
        t[m][j] = lp.c[j];
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n || t[m][basis[i]] == 0)
            continue;
        const Rational f = t[m][basis[i]];
        for (std::size_t j = 0; j <= n + m; ++j)
            t[m][j] -= f * t[i][j];
    }
    if (!iterate(t, basis, allowed)) {
        res.status = LpStatus::unbounded;
        return res;
    }
    res.status = LpStatus::optimal;
    res.x = zeros(n);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n)
            res.x[basis[i]] = t[i][n + m];
    return res;
}

} // namespace detail

/// Exact LP: minimize <objective, x> over a polyhedron in inequality form.
///
/// Free variables are split into positive and negative parts and slack variables are
/// added, then the standard-form problem is solved by the two-phase simplex method.
inline LpResult lp_minimize(const Vec& objective, std::size_t dim, const std::vector<Inequality>& rows,
                            Vec* farkas = nullptr) {
    if (objective.size() != dim)
        throw Error("dimension_mismatch", "objective length differs from the region dimension");
    const std::size_t m = rows.size();
    detail::StandardLp lp;
    lp.c = zeros(2 * dim + m);
    for (std::size_t j = 0; j < dim; ++j) {
        lp.c[j] = objective[j];
        lp.c[dim + j] = -objective[j];
    }
    std::vector<int> sign(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].normal.size() != dim)
            throw Error("dimension_mismatch", "inequality length differs from the region dimension");
        Vec row = zeros(2 * dim + m);
        for (std::size_t j = 0; j < dim; ++j) {
            row[j] = rows[i].normal[j];
            row[dim + j] = -rows[i].normal[j];
        }
        row[2 * dim + i] = -1;
        Rational rhs = rows[i].bound;
        if (rhs < 0) {
            row = neg(row);
            rhs = -rhs;
            sign[i] = -1;
        }
        lp.a.push_back(std::move(row));
        lp.b.push_back(rhs);
    }
    const auto sr = detail::solve_standard(lp);
    LpResult res;
    res.status = sr.status;
    if (sr.status == LpStatus::infeasible) {
        if (farkas) {
            // y (row signs restored) satisfies y^T[A,-A,-I] <= 0 and y^T b > 0, hence
            // y >= 0, y^T A = 0 and y^T bound > 0.
            *farkas = sr.farkas;
            for (std::size_t i = 0; i < m; ++i)
                (*farkas)[i] *= sign[i];
        }
        return res;
    }
    if (sr.status == LpStatus::unbounded)
        return res;
    res.point = zeros(dim);
    for (std::size_t j = 0; j < dim; ++j)
        res.point[j] = sr.x[j] - sr.x[dim + j];
    res.value = dot(objective, res.point);
    for (std::size_t i = 0; i < m; ++i)
        if (dot(rows[i].normal, res.point) == rows[i].bound)
            res.tight.push_back(i);
    return res;
}

inline LpResult lp_minimize(const Vec& objective, const Polyhedron& region) {
    return lp_minimize(objective, region.dim(), region.inequalities());
}

inline Polyhedron::Polyhedron(std::size_t dim, std::vector<Inequality> rows) : dim_(dim), rows_(std::move(rows)) {
    Vec farkas;
    const auto r = lp_minimize(zeros(dim_), dim_, rows_, &farkas);
    if (r.status == LpStatus::infeasible)
        farkas_ = std::move(farkas);
    else
        witness_ = r.point;
}

/// Vertices of a polyhedron, each with the indices of the inequalities tight there.
struct Vertex {
    Vec point;
    std::vector<std::size_t> tight;
};

struct VertexData {
    std::vector<Vertex> vertices;
    Mat recession_rays;
    Mat lineality;
};

/// Vertex enumeration by double description of the homogenised cone
/// {(x, t) : <a_i, x> - b_i t >= 0, t >= 0}.
inline VertexData vertices(std::size_t dim, const std::vector<Inequality>& rows) {
    Mat h;
    for (const auto& r : rows) {
        Vec v = r.normal;
        v.push_back(-r.bound);
        h.push_back(std::move(v));
    }
    h.push_back(unit(dim + 1, dim));
    const Cone c = Cone::from_inequalities(dim + 1, h);
    VertexData out;
    for (const auto& l : c.lineality()) {
        Vec v(l.begin(), l.end() - 1);
        out.lineality.push_back(v);
    }
    for (const auto& r : c.rays()) {
        const Rational t = r.back();
        Vec x(r.begin(), r.end() - 1);
        if (t == 0) {
            out.recession_rays.push_back(x);
            continue;
        }
        x = scale(1 / t, x);
        Vertex v{x, {}};
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (dot(rows[i].normal, x) == rows[i].bound)
                v.tight.push_back(i);
        out.vertices.push_back(std::move(v));
    }
    std::sort(out.vertices.begin(), out.vertices.end(),
              [](const Vertex& a, const Vertex& b) { return canonical_less(a.point, b.point); });
    return out;
}

/// All integer points of a bounded polyhedron in lexicographic order.
/// Boundedness is checked by minimising and maximising every coordinate.
inline std::vector<Vec> lattice_points(const Polyhedron& p) {
    if (!p.feasible())
        return {};
    const std::size_t n = p.dim();
    std::vector<Integer> lo(n), hi(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto mn = lp_minimize(unit(n, j), p);
        const auto mx = lp_minimize(neg(unit(n, j)), p);
        if (mn.status != LpStatus::optimal || mx.status != LpStatus::optimal)
            throw Error("unbounded_region", "lattice_points needs a bounded polyhedron");
        lo[j] = ceil(mn.value);
        hi[j] = floor(-mx.value);
        if (lo[j] > hi[j])
            return {};
    }
    std::vector<Vec> out;
    Vec x = zeros(n);
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
        if (j == n) {
            if (p.contains(x))
                out.push_back(x);
            return;
        }
        for (Integer v = lo[j]; v <= hi[j]; ++v) {
            x[j] = Rational(v);
            rec(j + 1);
        }
    };
    rec(0);
    return out;
}

} // namespace glab
