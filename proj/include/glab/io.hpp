#pragma once

#include <optional>

#include <json.hpp>

#include "glab/conedomain.hpp"
#include "glab/curves.hpp"
#include "glab/mmp.hpp"

namespace glab::io {

using Json = nlohmann::json;

/// Structural problems with an input document, each prefixed by a JSON-pointer path.
class SchemaError : public Error {
  public:
    explicit SchemaError(std::vector<std::string> violations)
        : Error("schema", join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v)
            s += (s.empty() ? "" : "; ") + x;
        return s;
    }
    std::vector<std::string> violations_;
};

/// Collects violations while walking a document; `finish` throws them all at once.
class Reader {
  public:
    void fail(const std::string& path, const std::string& msg) { violations_.push_back((path.empty() ? "/" : path) + ": " + msg); }
    bool ok() const { return violations_.empty(); }
    void finish() const {
        if (!violations_.empty())
            throw SchemaError(violations_);
    }

    const Json* field(const Json& obj, const std::string& path, const std::string& key, bool required = true) {
        if (!obj.is_object()) {
            fail(path, "expected an object");
            return nullptr;
        }
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required)
                fail(path + "/" + key, "missing required field");
            return nullptr;
        }
        return &*it;
    }

    std::optional<Rational> number(const Json& j, const std::string& path) {
        if (j.is_number_integer())
            return Rational(j.get<long long>());
        if (j.is_string()) {
            try {
                return parse_rational(j.get<std::string>());
            } catch (const Error& e) {
                fail(path, e.what());
                return std::nullopt;
            }
        }
        fail(path, "expected an integer or a \"p/q\" string");
        return std::nullopt;
    }

    std::optional<long> integer(const Json& j, const std::string& path) {
        const auto q = number(j, path);
        if (!q)
            return std::nullopt;
        if (!is_integer(*q) || abs(numerator(*q)) > Integer(1L << 40)) {
            fail(path, "expected a small integer");
            return std::nullopt;
        }
        return numerator(*q).convert_to<long>();
    }

    std::optional<std::size_t> index(const Json& j, const std::string& path) {
        const auto i = integer(j, path);
        if (i && *i < 0) {
            fail(path, "expected a nonnegative integer");
            return std::nullopt;
        }
        return i ? std::optional<std::size_t>(static_cast<std::size_t>(*i)) : std::nullopt;
    }

    std::optional<std::string> string(const Json& j, const std::string& path) {
        if (!j.is_string()) {
            fail(path, "expected a string");
            return std::nullopt;
        }
        return j.get<std::string>();
    }

    std::optional<Vec> vec(const Json& j, const std::string& path, std::optional<std::size_t> len = {}) {
        if (!j.is_array()) {
            fail(path, "expected an array of numbers");
            return std::nullopt;
        }
        if (len && j.size() != *len) {
            fail(path, "expected " + std::to_string(*len) + " entries, found " + std::to_string(j.size()));
            return std::nullopt;
        }
        Vec v;
        bool good = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto x = number(j[i], path + "/" + std::to_string(i));
            good = good && x.has_value();
            v.push_back(x.value_or(Rational(0)));
        }
        return good ? std::optional<Vec>(v) : std::nullopt;
    }

    std::optional<Mat> mat(const Json& j, const std::string& path, std::optional<std::size_t> cols = {}) {
        if (!j.is_array()) {
            fail(path, "expected an array of rows");
            return std::nullopt;
        }
        Mat m;
        bool good = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto r = vec(j[i], path + "/" + std::to_string(i), cols);
            good = good && r.has_value();
            if (r)
                m.push_back(*r);
        }
        return good ? std::optional<Mat>(m) : std::nullopt;
    }

  private:
    std::vector<std::string> violations_;
};

// ---- emission ----

inline Json to_json(const Rational& q) { return to_string(q); }

inline Json to_json(const Vec& v) {
    Json j = Json::array();
    for (const auto& x : v)
        j.push_back(to_string(x));
    return j;
}

inline Json to_json(const Mat& m) {
    Json j = Json::array();
    for (const auto& r : m)
        j.push_back(to_json(r));
    return j;
}

inline Json to_json(const std::vector<Integer>& v) {
    Json j = Json::array();
    for (const auto& x : v)
        j.push_back(x.str());
    return j;
}

inline Json to_json(const Cone& c) {
    return {{"ambient_dim", c.ambient_dim()}, {"rays", to_json(c.rays())},         {"lineality", to_json(c.lineality())},
            {"facets", to_json(c.facets())},  {"equations", to_json(c.equations())}, {"dim", c.dim()}};
}

inline Json to_json(const Fan& f) {
    Json cones = Json::array();
    for (const auto& c : f.max_cones)
        cones.push_back(c);
    return {{"kind", "fan"}, {"ambient_rank", f.ambient_rank}, {"rays", to_json(f.rays)}, {"max_cones", cones}};
}

inline Json to_json(const CurveDivisor& d) {
    Json j = Json::object();
    for (const auto& [p, m] : d.mult)
        if (m != 0)
            j[p] = to_string(m);
    return j;
}

// ---- parsing ----

/// Cone from {"ambient_dim", "rays", "lineality"} or {"ambient_dim", "facets", "equations"}.
/// When both representations are present they must describe the same cone.
struct ConeShape {
    std::size_t dim = 0;
    std::optional<Mat> rays, lineality, facets, equations;
};

inline std::optional<ConeShape> read_cone(Reader& r, const Json& j, const std::string& path) {
    ConeShape s;
    const Json* d = r.field(j, path, "ambient_dim");
    if (!d)
        return std::nullopt;
    const auto dim = r.index(*d, path + "/ambient_dim");
    if (!dim)
        return std::nullopt;
    s.dim = *dim;
    auto opt_mat = [&](const char* key) -> std::optional<Mat> {
        const Json* x = r.field(j, path, key, false);
        if (!x)
            return Mat{};
        return r.mat(*x, path + "/" + key, s.dim);
    };
    const bool has_v = j.contains("rays"), has_h = j.contains("facets");
    if (!has_v && !has_h) {
        r.fail(path, "a cone needs \"rays\" or \"facets\"");
        return std::nullopt;
    }
    if (has_v) {
        s.rays = opt_mat("rays");
        s.lineality = opt_mat("lineality");
    }
    if (has_h) {
        s.facets = opt_mat("facets");
        s.equations = opt_mat("equations");
    }
    return s;
}

inline Cone build_cone(const ConeShape& s) {
    if (s.rays) {
        Cone c = Cone::from_generators(s.dim, *s.rays, s.lineality.value_or(Mat{}));
        if (s.facets && c != Cone::from_inequalities(s.dim, *s.facets, s.equations.value_or(Mat{})))
            throw Error("inconsistent_cone", "generators and inequalities describe different cones");
        return c;
    }
    return Cone::from_inequalities(s.dim, *s.facets, s.equations.value_or(Mat{}));
}

inline void expect_kind(Reader& r, const Json& j, const std::string& path, const std::string& kind) {
    const Json* k = r.field(j, path, "kind", false);
    if (!k)
        return;
    const auto s = r.string(*k, path + "/kind");
    if (s && *s != kind)
        r.fail(path + "/kind", "expected \"" + kind + "\", found \"" + *s + "\"");
}

inline std::optional<Fan> read_fan(Reader& r, const Json& j, const std::string& path) {
    expect_kind(r, j, path, "fan");
    const Json* n = r.field(j, path, "ambient_rank");
    const Json* rays = r.field(j, path, "rays");
    const Json* cones = r.field(j, path, "max_cones");
    if (!n || !rays || !cones)
        return std::nullopt;
    const auto rank = r.index(*n, path + "/ambient_rank");
    if (!rank)
        return std::nullopt;
    Fan f{*rank, {}, {}};
    const auto m = r.mat(*rays, path + "/rays", *rank);
    if (m)
        f.rays = *m;
    if (!cones->is_array()) {
        r.fail(path + "/max_cones", "expected an array of index lists");
        return std::nullopt;
    }
    for (std::size_t i = 0; i < cones->size(); ++i) {
        const auto& c = (*cones)[i];
        const std::string p = path + "/max_cones/" + std::to_string(i);
        if (!c.is_array()) {
            r.fail(p, "expected an array of ray indices");
            continue;
        }
        Indices idx;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const auto x = r.index(c[k], p + "/" + std::to_string(k));
            if (x && m && *x >= m->size())
                r.fail(p + "/" + std::to_string(k), "ray index out of range");
            if (x)
                idx.push_back(*x);
        }
        f.max_cones.push_back(idx);
    }
    if (!m)
        return std::nullopt;
    return f;
}

/// ring_spec document: a fan, divisor coefficient vectors, and an optional walk target.
struct RingSpecDoc {
    RingSpec spec;
    std::optional<Vec> target;          // class
    std::optional<Vec> target_divisor;  // coefficient vector
};

inline RingSpecDoc parse_ring_spec(const Json& j) {
    Reader r;
    expect_kind(r, j, "", "ring_spec");
    std::optional<Fan> fan;
    if (const Json* f = r.field(j, "", "fan"))
        fan = read_fan(r, *f, "/fan");
    std::optional<Mat> divs;
    if (const Json* d = r.field(j, "", "divisors"))
        divs = r.mat(*d, "/divisors", fan ? std::optional<std::size_t>(fan->rays.size()) : std::nullopt);
    if (divs && divs->empty())
        r.fail("/divisors", "at least one divisor is required");
    std::optional<Vec> target, target_div;
    if (const Json* t = r.field(j, "", "target", false))
        target = r.vec(*t, "/target");
    if (const Json* t = r.field(j, "", "target_divisor", false))
        target_div = r.vec(*t, "/target_divisor", fan ? std::optional<std::size_t>(fan->rays.size()) : std::nullopt);
    r.finish();

    RingSpecDoc doc{{build_model(*fan), {}}, target, target_div};
    for (const auto& d : *divs)
        doc.spec.divisors.push_back({d});
    if (doc.target && doc.target->size() != doc.spec.model.class_rank)
        throw Error("dimension_mismatch", "target class has the wrong length");
    if (doc.target_divisor) {
        const Vec cls = doc.spec.model.class_of(*doc.target_divisor);
        if (doc.target && *doc.target != cls)
            throw Error("class_mismatch", "target_divisor does not have the target class");
        doc.target = cls;
    }
    return doc;
}

inline Json to_json(const RingSpecDoc& d) {
    Json divs = Json::array();
    for (const auto& x : d.spec.divisors)
        divs.push_back(to_json(x.coeffs));
    Json j{{"kind", "ring_spec"}, {"fan", to_json(d.spec.model.fan)}, {"divisors", divs}};
    if (d.target)
        j["target"] = to_json(*d.target);
    if (d.target_divisor)
        j["target_divisor"] = to_json(*d.target_divisor);
    return j;
}

/// curve_model document: the curve, the pair (D, A), optional degree-0 twists and a class.
struct CurveDoc {
    CurveModel curve;
    CurveDivisor d, a;
    std::vector<CurveDivisor> twists;
    std::optional<RuledClass> cls;
};

inline std::optional<CurveDivisor> read_curve_divisor(Reader& r, const Json& j, const std::string& path) {
    if (!j.is_object()) {
        r.fail(path, "expected an object mapping point names to multiplicities");
        return std::nullopt;
    }
    CurveDivisor d;
    bool good = true;
    for (const auto& [name, m] : j.items()) {
        const auto x = r.number(m, path + "/" + name);
        good = good && x.has_value();
        if (x)
            d.mult[name] += *x;
    }
    return good ? std::optional<CurveDivisor>(d) : std::nullopt;
}

inline CurveDoc parse_curve_model(const Json& j) {
    Reader r;
    expect_kind(r, j, "", "curve_model");
    std::optional<long> genus;
    std::optional<std::size_t> free_rank = 0;
    std::vector<Integer> orders;
    std::vector<std::pair<std::string, JacobianElement>> points;
    if (const Json* g = r.field(j, "", "genus"))
        genus = r.integer(*g, "/genus");
    if (const Json* f = r.field(j, "", "free_rank", false))
        free_rank = r.index(*f, "/free_rank");
    if (const Json* t = r.field(j, "", "torsion_orders", false))
        if (auto v = r.vec(*t, "/torsion_orders"))
            for (std::size_t i = 0; i < v->size(); ++i) {
                if (!is_integer((*v)[i]))
                    r.fail("/torsion_orders/" + std::to_string(i), "expected an integer");
                orders.push_back(numerator((*v)[i]));
            }
    if (const Json* ps = r.field(j, "", "points")) {
        if (!ps->is_array())
            r.fail("/points", "expected an array of points");
        else
            for (std::size_t i = 0; i < ps->size(); ++i) {
                const std::string p = "/points/" + std::to_string(i);
                const Json& pt = (*ps)[i];
                const Json* n = r.field(pt, p, "name");
                if (!n)
                    continue;
                const auto name = r.string(*n, p + "/name");
                JacobianElement e;
                for (const char* key : {"free", "torsion"})
                    if (const Json* x = r.field(pt, p, key, false))
                        if (auto v = r.vec(*x, p + "/" + key))
                            for (const auto& q : *v) {
                                if (!is_integer(q))
                                    r.fail(p + "/" + key, "expected integers");
                                (std::string(key) == "free" ? e.free : e.torsion).push_back(numerator(q));
                            }
                if (name)
                    points.emplace_back(*name, e);
            }
    }
    std::optional<CurveDivisor> d, a;
    if (const Json* x = r.field(j, "", "D"))
        d = read_curve_divisor(r, *x, "/D");
    if (const Json* x = r.field(j, "", "A"))
        a = read_curve_divisor(r, *x, "/A");
    std::vector<CurveDivisor> twists;
    if (const Json* t = r.field(j, "", "twists", false)) {
        if (!t->is_array())
            r.fail("/twists", "expected an array of divisors");
        else
            for (std::size_t i = 0; i < t->size(); ++i)
                if (auto g = read_curve_divisor(r, (*t)[i], "/twists/" + std::to_string(i)))
                    twists.push_back(*g);
    }
    std::optional<RuledClass> cls;
    if (const Json* c = r.field(j, "", "class", false)) {
        const Json* e = r.field(*c, "/class", "fiber_degree");
        const Json* b = r.field(*c, "/class", "base");
        std::optional<long> ev;
        std::optional<CurveDivisor> bv;
        if (e)
            ev = r.integer(*e, "/class/fiber_degree");
        if (b)
            bv = read_curve_divisor(r, *b, "/class/base");
        if (ev && bv)
            cls = RuledClass{static_cast<int>(*ev), *bv};
    }
    r.finish();

    CurveDoc doc{CurveModel(static_cast<int>(*genus), *free_rank, orders, points), *d, *a, twists, cls};
    auto check = [&](const CurveDivisor& x) {
        for (const auto& [p, m] : x.mult)
            doc.curve.point(p);
    };
    check(doc.d);
    check(doc.a);
    for (const auto& g : doc.twists)
        check(g);
    if (doc.cls)
        check(doc.cls->base);
    return doc;
}

inline Json to_json(const CurveDoc& d) {
    Json pts = Json::array();
    for (const auto& [name, e] : d.curve.points())
        pts.push_back({{"name", name}, {"free", to_json(e.free)}, {"torsion", to_json(e.torsion)}});
    Json j{{"kind", "curve_model"},
           {"genus", d.curve.genus()},
           {"free_rank", d.curve.free_rank()},
           {"torsion_orders", to_json(d.curve.torsion_orders())},
           {"points", pts},
           {"D", to_json(d.d)},
           {"A", to_json(d.a)}};
    if (!d.twists.empty()) {
        Json t = Json::array();
        for (const auto& g : d.twists)
            t.push_back(to_json(g));
        j["twists"] = t;
    }
    if (d.cls)
        j["class"] = {{"fiber_degree", d.cls->fiber_degree}, {"base", to_json(d.cls->base)}};
    return j;
}

/// group_action document: a cone, generators acting on its lattice, an optional basepoint.
struct GroupDoc {
    Cone cone;
    LatticeGroupAction action;
    std::vector<Mat> group; // enumerated, identity first
    std::optional<Vec> basepoint;
};

inline GroupDoc parse_group_action(const Json& j) {
    Reader r;
    expect_kind(r, j, "", "group_action");
    std::optional<std::size_t> rank;
    if (const Json* x = r.field(j, "", "rank"))
        rank = r.index(*x, "/rank");
    std::optional<ConeShape> shape;
    if (const Json* c = r.field(j, "", "cone"))
        shape = read_cone(r, *c, "/cone");
    if (shape && rank && shape->dim != *rank)
        r.fail("/cone/ambient_dim", "differs from rank");
    std::vector<Mat> gens;
    if (const Json* g = r.field(j, "", "generators")) {
        if (!g->is_array())
            r.fail("/generators", "expected an array of matrices");
        else
            for (std::size_t i = 0; i < g->size(); ++i)
                if (auto m = r.mat((*g)[i], "/generators/" + std::to_string(i), rank)) {
                    if (rank && m->size() != *rank)
                        r.fail("/generators/" + std::to_string(i), "expected a square matrix of size rank");
                    gens.push_back(*m);
                }
    }
    std::optional<Vec> bp;
    if (const Json* b = r.field(j, "", "basepoint", false))
        bp = r.vec(*b, "/basepoint", rank);
    r.finish();

    GroupDoc doc{build_cone(*shape), {*rank, gens}, {}, bp};
    doc.group = enumerate_group(doc.action, doc.cone);
    return doc;
}

inline Json to_json(const GroupDoc& d) {
    Json gens = Json::array();
    for (const auto& g : d.action.generators)
        gens.push_back(to_json(g));
    Json j{{"kind", "group_action"}, {"rank", d.action.rank}, {"cone", to_json(d.cone)}, {"generators", gens}};
    if (d.basepoint)
        j["basepoint"] = to_json(*d.basepoint);
    return j;
}

inline Cone parse_cone(const Json& j) {
    Reader r;
    const auto s = read_cone(r, j, "");
    r.finish();
    return build_cone(*s);
}

inline Fan parse_fan(const Json& j) {
    Reader r;
    const auto f = read_fan(r, j, "");
    r.finish();
    return *f;
}

} // namespace glab::io
