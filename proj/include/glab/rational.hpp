#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace glab {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Dense vector of exact rationals. Integer vectors are stored with unit denominators.
using Vec = std::vector<Rational>;
/// Row-major dense matrix: a list of rows.
using Mat = std::vector<Vec>;

/// Base class for every error the library raises; `kind()` is a stable machine-readable tag.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        q -= 1;
    return q;
}

inline Integer floor(const Rational& q) { return floor_div(numerator(q), denominator(q)); }
inline Integer ceil(const Rational& q) { return -floor_div(-numerator(q), denominator(q)); }

inline Integer gcd(Integer a, Integer b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Integer t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0)
        return 0;
    Integer l = a / gcd(a, b) * b;
    return l < 0 ? Integer(-l) : l;
}

inline Vec zeros(std::size_t n) { return Vec(n, Rational(0)); }

inline Vec unit(std::size_t n, std::size_t i) {
    Vec v = zeros(n);
    v[i] = 1;
    return v;
}

inline Mat identity(std::size_t n) {
    Mat m(n, zeros(n));
    for (std::size_t i = 0; i < n; ++i)
        m[i][i] = 1;
    return m;
}

inline Rational dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw Error("dimension_mismatch", "dot product of vectors with different lengths");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0)
            s += a[i] * b[i];
    return s;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] += b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= b[i];
    return r;
}

inline Vec scale(const Rational& s, const Vec& a) {
    Vec r = a;
    for (auto& x : r)
        x *= s;
    return r;
}

inline Vec neg(const Vec& a) { return scale(Rational(-1), a); }

inline bool is_zero(const Vec& a) {
    return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x == 0; });
}

/// Matrix-vector product m * v.
inline Vec apply(const Mat& m, const Vec& v) {
    Vec r;
    r.reserve(m.size());
    for (const auto& row : m)
        r.push_back(dot(row, v));
    return r;
}

inline Mat transpose(const Mat& m, std::size_t cols) {
    Mat t(cols, zeros(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            t[j][i] = m[i][j];
    return t;
}

inline Mat transpose(const Mat& m) { return transpose(m, m.empty() ? 0 : m.front().size()); }

inline Mat multiply(const Mat& a, const Mat& b) {
    const std::size_t cols = b.empty() ? 0 : b.front().size();
    Mat r(a.size(), zeros(cols));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (a[i][k] == 0)
                continue;
            for (std::size_t j = 0; j < cols; ++j)
                r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

/// Scales a nonzero vector to the unique primitive integer vector on the same ray.
inline Vec primitive(const Vec& v) {
    Integer l = 1;
    for (const auto& x : v)
        l = lcm(l, denominator(x));
    Integer g = 0;
    for (const auto& x : v)
        g = gcd(g, numerator(x) * (l / denominator(x)));
    if (g == 0)
        return v;
    Vec r;
    r.reserve(v.size());
    for (const auto& x : v)
        r.emplace_back(Rational(numerator(x) * (l / denominator(x)) / g));
    return r;
}

/// Primitive integer vector on the same line, sign fixed so the first nonzero entry is positive.
inline Vec primitive_line(const Vec& v) {
    Vec r = primitive(v);
    for (const auto& x : r) {
        if (x == 0)
            continue;
        if (x < 0)
            r = neg(r);
        break;
    }
    return r;
}

/// Canonical ordering: lexicographically decreasing, so (1,0) precedes (0,1).
inline bool canonical_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

inline void canonical_sort(Mat& rows) {
    std::sort(rows.begin(), rows.end(), canonical_less);
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1)
        os << '/' << denominator(q);
    return os.str();
}

inline std::string to_string(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ",";
        s += to_string(v[i]);
    }
    return s + ")";
}

/// Parses "p", "-p" or "p/q". Throws `Error("parse")` on malformed text or a zero denominator.
inline Rational parse_rational(const std::string& text) {
    auto is_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i >= s.size())
            return false;
        return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    auto strip_plus = [](std::string s) { return (!s.empty() && s[0] == '+') ? s.substr(1) : s; };
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_int(text))
            throw Error("parse", "not a rational number: '" + text + "'");
        return Rational(Integer(strip_plus(text)));
    }
    const std::string p = text.substr(0, slash), q = text.substr(slash + 1);
    if (!is_int(p) || !is_int(q))
        throw Error("parse", "not a rational number: '" + text + "'");
    Integer den(strip_plus(q));
    if (den == 0)
        throw Error("parse", "zero denominator in '" + text + "'");
    return Rational(Integer(strip_plus(p)), den);
}

inline Vec to_vec(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

} // namespace glab
