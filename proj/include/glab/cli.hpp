#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "glab/io.hpp"

namespace glab::cli {

using io::Json;

inline constexpr const char* tool_name = "glab";
inline constexpr const char* tool_version = "1.0.0";

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"support", "chambers", "mmp", "curve-ring", "gen-check",
                                            "fundamental-domain", "visible-boundary", "h0"};
    return c;
}

struct JobSpec {
    std::string command;
    std::string input;  // path, or "-" for stdin
    std::string output; // path, or "-" for stdout
    std::optional<std::uint64_t> seed;
    std::optional<long> box;
    std::optional<long> kmax;
    std::optional<std::size_t> samples;
};

enum ExitCode : int { ok = 0, schema_error = 2, semantic_error = 3, computation_error = 4 };

struct JobResult {
    Json report;
    int exit_code = ok;
};

namespace detail {

struct Params {
    std::uint64_t seed = 0;
    long box = 20;
    long kmax = 6;
    std::size_t samples = 1000;
};

/// Failure with an exit code already decided.
struct Failure {
    int code;
    std::string kind;
    std::string message;
    std::vector<std::string> violations;
};

inline Json cone_list(const std::vector<Cone>& cs) {
    Json j = Json::array();
    for (const auto& c : cs)
        j.push_back(io::to_json(c));
    return j;
}

inline Json fan_entry(const Fan& f) { return {{"fan", io::to_json(f)}, {"model_id", model_id(f)}}; }

inline Json run_support(const io::RingSpecDoc& doc) {
    const auto s = support_cone(doc.spec);
    return {{"class_cone", io::to_json(s.cone)},
            {"divisor_cone", io::to_json(s.divisor_cone)},
            {"image", io::to_json(s.image)},
            {"contains_big", s.contains_big},
            {"contains_ample", s.contains_ample},
            {"class_rank", doc.spec.model.class_rank},
            {"torsion", io::to_json(doc.spec.model.torsion)},
            {"degree_map", io::to_json(doc.spec.model.degree_map)}};
}

inline Json run_chambers(const io::RingSpecDoc& doc) {
    const auto cx = chamber_decomposition(doc.spec);
    Json chs = Json::array();
    for (std::size_t i = 0; i < cx.chambers.size(); ++i) {
        const auto& c = cx.chambers[i];
        Json e{{"index", i}, {"cone", io::to_json(c.cone)}, {"interior", io::to_json(c.interior)},
               {"linear_forms", io::to_json(c.linear_forms)}, {"has_model", c.has_model}};
        if (c.has_model) {
            e["model_fan"] = io::to_json(c.model_fan);
            e["model_id"] = c.model_id;
        }
        chs.push_back(e);
    }
    Json walls = Json::array();
    for (const auto& w : cx.walls)
        walls.push_back({{"cone", io::to_json(w.cone)}, {"a", w.a}, {"b", w.b}, {"normal", io::to_json(w.normal)}});
    return {{"support", io::to_json(cx.support.cone)},
            {"degree_map", io::to_json(doc.spec.model.degree_map)},
            {"chambers", chs},
            {"walls", walls},
            {"nef_slice", io::to_json(nef_slice(doc.spec))},
            {"movable_slice", io::to_json(movable_slice(cx))}};
}

inline Json run_mmp(const io::RingSpecDoc& doc, const Params& p) {
    const auto cx = chamber_decomposition(doc.spec);
    const auto tr = run_walk(doc.spec, cx, *doc.target);
    Json models = Json::array();
    for (const auto& f : tr.models)
        models.push_back(fan_entry(f));
    Json crossings = Json::array();
    for (const auto& c : tr.crossings)
        crossings.push_back(
            {{"wall", io::to_json(c.wall)}, {"from", c.from}, {"to", c.to}, {"kind", to_string(c.kind)}});
    Json res{{"target", io::to_json(tr.target)},
             {"ample", io::to_json(tr.ample)},
             {"start", fan_entry(tr.start_fan)},
             {"visited", tr.visited},
             {"models", models},
             {"crossings", crossings},
             {"status", to_string(tr.status)},
             {"final", fan_entry(tr.final_fan)},
             {"fiber_dim", tr.fiber_dim},
             {"picard_ranks", picard_rank_ledger(tr)},
             {"chamber_count", cx.chambers.size()}};
    if (tr.status == WalkStatus::minimal_model) {
        const Vec coeffs = doc.target_divisor ? *doc.target_divisor : doc.spec.model.representative(*doc.target);
        bool integral = true;
        for (const auto& x : coeffs)
            integral = integral && is_integer(x);
        if (integral) {
            const auto sc = section_preservation_check(doc.spec, tr, {coeffs}, p.kmax);
            Json disc = Json::array();
            for (const auto& r : sc.discrepancies)
                disc.push_back(to_string(r));
            res["section_check"] = {{"divisor", io::to_json(coeffs)}, {"k_max", p.kmax},
                                    {"holds", sc.holds},          {"start_dims", sc.start_dims},
                                    {"final_dims", sc.final_dims}, {"discrepancies", disc}};
        }
    }
    return res;
}

inline Json run_h0(const io::RingSpecDoc& doc, const Params& p) {
    const auto& m = doc.spec.model;
    Json out = Json::array();
    for (const auto& d : doc.spec.divisors) {
        std::vector<std::size_t> dims;
        for (long k = 0; k <= p.kmax; ++k)
            dims.push_back(h0(m, {scale(Rational(k), d.coeffs)}));
        const auto poly = section_polytope(m, round_down(d));
        Json ineqs = Json::array();
        for (const auto& q : poly.inequalities())
            ineqs.push_back({{"normal", io::to_json(q.normal)}, {"bound", to_string(q.bound)}});
        Mat verts;
        if (poly.feasible())
            for (const auto& v : vertices(m.rank(), poly.inequalities()).vertices)
                verts.push_back(v.point);
        out.push_back({{"coeffs", io::to_json(d.coeffs)},
                       {"class", io::to_json(m.class_of(d.coeffs))},
                       {"dims", dims},
                       {"polytope", ineqs},
                       {"vertices", io::to_json(verts)},
                       {"lattice_points", io::to_json(lattice_points(poly))}});
    }
    return {{"k_max", p.kmax}, {"divisors", out}};
}

inline Json run_curve_ring(const io::CurveDoc& doc, const Params& p) {
    const auto s = bigraded_support(doc.curve, doc.d, doc.a, p.box);
    Json pairs = Json::array();
    for (const auto& [i, j] : s.pairs)
        pairs.push_back({i, j});
    std::vector<std::string> dims;
    for (const auto& x : ruled_surface_slice_dims(doc.curve, doc.d, doc.a, p.kmax))
        dims.push_back(x.str());
    return {{"box", s.box},
            {"degrees", {to_string(degree(doc.d)), to_string(degree(doc.a))}},
            {"support_pairs", pairs},
            {"finitely_generated", s.finitely_generated},
            {"witness", s.witness},
            {"closed_form_consistent", s.consistent},
            {"slice_dims", dims}};
}

inline Json run_gen_check(const io::CurveDoc& doc, const Params& p) {
    Json tw = Json::array();
    for (const auto& g : doc.twists) {
        const auto t = twisted_slice_ring_fg(doc.curve, doc.d, doc.a, g, p.kmax);
        std::vector<std::string> dims;
        for (const auto& x : t.dims)
            dims.push_back(x.str());
        tw.push_back({{"twist", io::to_json(g)},
                      {"finitely_generated", t.finitely_generated},
                      {"witness", t.witness},
                      {"dims", dims}});
    }
    Json res{{"twists", tw}};
    if (doc.cls) {
        const auto v = is_gen_numeric_class(doc.curve, doc.d, doc.a, *doc.cls);
        res["class"] = {{"fiber_degree", doc.cls->fiber_degree}, {"base", io::to_json(doc.cls->base)}};
        res["gen"] = v.gen;
        res["explanation"] = v.explanation;
    }
    return res;
}

inline Json run_fundamental_domain(const io::GroupDoc& doc, const Params& p) {
    const Vec x0 = doc.basepoint ? *doc.basepoint : find_basepoint(doc.cone, doc.group);
    const auto fd = fundamental_domain(doc.cone, doc.group, x0);
    const auto rep = verify_tiling(fd, doc.cone, p.samples, p.seed);
    Json group = Json::array();
    for (const auto& g : fd.group)
        group.push_back(io::to_json(g));
    Json tiling{{"samples", rep.samples},
                {"covered", rep.covered},
                {"on_boundary", rep.on_boundary},
                {"multiply_hit", rep.multiply_hit},
                {"cover_failures", io::to_json(rep.cover_failures)},
                {"disjoint_checked", rep.disjoint_checked},
                {"disjoint_certified", rep.disjoint_certified},
                {"overlap_witnesses", io::to_json(rep.overlap_witnesses)},
                {"ok", rep.ok()}};
    Json res{{"group_order", fd.group_order()},
             {"group", group},
             {"basepoint", io::to_json(fd.x0)},
             {"gram", io::to_json(fd.gram)},
             {"domain", io::to_json(fd.domain)},
             {"tiling", tiling}};
    if (doc.cone.is_full_dimensional() && doc.cone.is_pointed())
        res["volume_fraction"] = to_string(volume_fraction(fd, doc.cone));
    return res;
}

/// visible-boundary payload: {"cone": cone, "kappas": [vector, ...]}.
struct VisibleDoc {
    Cone cone;
    Mat kappas;
};

inline VisibleDoc parse_visible(const Json& j) {
    io::Reader r;
    std::optional<io::ConeShape> shape;
    if (const Json* c = r.field(j, "", "cone"))
        shape = io::read_cone(r, *c, "/cone");
    std::optional<Mat> ks;
    if (const Json* k = r.field(j, "", "kappas"))
        ks = r.mat(*k, "/kappas", shape ? std::optional<std::size_t>(shape->dim) : std::nullopt);
    r.finish();
    return {io::build_cone(*shape), *ks};
}

inline Json run_visible(const VisibleDoc& doc) {
    Json qs = Json::array();
    for (const auto& k : doc.kappas) {
        Json fs = Json::array();
        for (const auto& f : visible_boundary(doc.cone, k)) {
            Vec bary = zeros(doc.cone.ambient_dim());
            for (const auto& r : f.face.rays())
                bary = add(bary, r);
            bary = scale(Rational(1) / Rational(static_cast<long>(std::max<std::size_t>(1, f.face.rays().size()))), bary);
            fs.push_back({{"normal", io::to_json(f.normal)}, {"face", io::to_json(f.face)}, {"barycenter", io::to_json(bary)}});
        }
        qs.push_back({{"kappa", io::to_json(k)}, {"visible_facets", fs}});
    }
    return {{"cone", io::to_json(doc.cone)}, {"queries", qs}};
}

inline std::string expected_kind(const std::string& command) {
    if (command == "curve-ring" || command == "gen-check")
        return "curve_model";
    if (command == "fundamental-domain")
        return "group_action";
    if (command == "visible-boundary")
        return "job";
    return "ring_spec";
}

inline Json error_object(const Failure& f) {
    Json e{{"kind", f.kind}, {"message", f.message}, {"exit_code", f.code}};
    if (!f.violations.empty())
        e["violations"] = f.violations;
    return e;
}

} // namespace detail

/// Runs a job on an already loaded document. The document is either of the command's kind, or
/// a "job" wrapper {"kind": "job", "command", "seed", "box", "kmax", "samples", "input"} whose
/// fields are overridden by any parameter set in `job`.
inline JobResult run_document(const JobSpec& job, const Json& input) {
    Json report{{"tool", tool_name}, {"version", tool_version}, {"command", job.command}};
    report["input_digest"] = hex_digest(input.dump());
    detail::Params p;
    auto finish = [&](const detail::Failure& f) {
        report["seed"] = p.seed;
        report["error"] = detail::error_object(f);
        return JobResult{report, f.code};
    };

    if (std::find(commands().begin(), commands().end(), job.command) == commands().end())
        return finish({schema_error, "usage", "unknown command '" + job.command + "'", {}});
    if (!input.is_object())
        return finish({schema_error, "schema", "document must be an object", {"/: expected an object"}});

    // unwrap a job document
    Json payload = input;
    {
        io::Reader r;
        const Json* k = r.field(input, "", "kind");
        const auto kind = k ? r.string(*k, "/kind") : std::nullopt;
        if (kind && *kind == "job") {
            if (const Json* c = r.field(input, "", "command", false)) {
                const auto cmd = r.string(*c, "/command");
                if (cmd && *cmd != job.command)
                    r.fail("/command", "document is for '" + *cmd + "', invoked as '" + job.command + "'");
            }
            if (const Json* x = r.field(input, "", "seed", false))
                if (auto v = r.index(*x, "/seed"))
                    p.seed = *v;
            if (const Json* x = r.field(input, "", "box", false))
                if (auto v = r.integer(*x, "/box"))
                    p.box = *v;
            if (const Json* x = r.field(input, "", "kmax", false))
                if (auto v = r.integer(*x, "/kmax"))
                    p.kmax = *v;
            if (const Json* x = r.field(input, "", "samples", false))
                if (auto v = r.index(*x, "/samples"))
                    p.samples = *v;
            if (detail::expected_kind(job.command) != "job") {
                if (const Json* in = r.field(input, "", "input"))
                    payload = *in;
            }
        } else if (kind && *kind != detail::expected_kind(job.command)) {
            r.fail("/kind", "command '" + job.command + "' expects kind \"" + detail::expected_kind(job.command) +
                                "\", found \"" + *kind + "\"");
        }
        if (!r.ok()) {
            try {
                r.finish();
            } catch (const io::SchemaError& e) {
                return finish({schema_error, "schema", e.what(), e.violations()});
            }
        }
    }
    if (job.seed)
        p.seed = *job.seed;
    if (job.box)
        p.box = *job.box;
    if (job.kmax)
        p.kmax = *job.kmax;
    if (job.samples)
        p.samples = *job.samples;
    if (p.kmax < 0)
        return finish({schema_error, "usage", "kmax must be nonnegative", {}});
    report["seed"] = p.seed;
    report["parameters"] = {{"box", p.box}, {"kmax", p.kmax}, {"samples", p.samples}};

    // parse and validate: schema problems exit 2, semantic ones exit 3
    std::function<Json()> compute;
    try {
        const std::string& c = job.command;
        if (c == "support" || c == "chambers" || c == "mmp" || c == "h0") {
            auto doc = std::make_shared<io::RingSpecDoc>(io::parse_ring_spec(payload));
            if (c == "mmp" && !doc->target)
                throw io::SchemaError({"/target: missing required field for mmp"});
            if (c == "support")
                compute = [doc] { return detail::run_support(*doc); };
            else if (c == "chambers")
                compute = [doc] { return detail::run_chambers(*doc); };
            else if (c == "mmp")
                compute = [doc, p] { return detail::run_mmp(*doc, p); };
            else
                compute = [doc, p] { return detail::run_h0(*doc, p); };
        } else if (c == "curve-ring" || c == "gen-check") {
            auto doc = std::make_shared<io::CurveDoc>(io::parse_curve_model(payload));
            if (c == "gen-check" && !doc->cls && doc->twists.empty())
                throw io::SchemaError({"/class: gen-check needs a class or twists"});
            if (c == "curve-ring")
                compute = [doc, p] { return detail::run_curve_ring(*doc, p); };
            else
                compute = [doc, p] { return detail::run_gen_check(*doc, p); };
        } else if (c == "fundamental-domain") {
            auto doc = std::make_shared<io::GroupDoc>(io::parse_group_action(payload));
            compute = [doc, p] { return detail::run_fundamental_domain(*doc, p); };
        } else {
            auto doc = std::make_shared<detail::VisibleDoc>(detail::parse_visible(payload));
            compute = [doc] { return detail::run_visible(*doc); };
        }
    } catch (const io::SchemaError& e) {
        return finish({schema_error, "schema", e.what(), e.violations()});
    } catch (const Error& e) {
        return finish({semantic_error, e.kind(), e.what(), {}});
    }

    try {
        report["results"] = compute();
    } catch (const Error& e) {
        return finish({computation_error, e.kind(), e.what(), {}});
    } catch (const std::exception& e) {
        return finish({computation_error, "internal", e.what(), {}});
    }
    return {report, ok};
}

inline std::string render(const Json& report) { return report.dump(2) + "\n"; }

/// Reads the input, runs the job and writes the report. Returns the exit code.
inline JobResult run_job(const JobSpec& job) {
    Json input;
    try {
        std::stringstream buf;
        if (job.input == "-") {
            buf << std::cin.rdbuf();
        } else {
            std::ifstream in(job.input);
            if (!in)
                throw Error("io", "cannot read " + job.input);
            buf << in.rdbuf();
        }
        input = Json::parse(buf.str());
    } catch (const std::exception& e) {
        Json report{{"tool", tool_name}, {"version", tool_version}, {"command", job.command}};
        report["error"] = detail::error_object({schema_error, "parse", e.what(), {}});
        return {report, schema_error};
    }
    return run_document(job, input);
}

/// One-line human-readable summary of a report.
inline std::string summary(const Json& report) {
    const std::string cmd = report.value("command", "");
    if (report.contains("error")) {
        const auto& e = report["error"];
        return cmd + ": error " + e.value("kind", "") + ": " + e.value("message", "");
    }
    const auto& r = report["results"];
    std::ostringstream os;
    os << cmd << ": ";
    if (cmd == "support")
        os << "support of dimension " << r["class_cone"]["dim"].get<std::size_t>() << " with "
           << r["class_cone"]["rays"].size() << " rays" << (r["contains_big"].get<bool>() ? ", contains big classes" : "");
    else if (cmd == "chambers")
        os << r["chambers"].size() << " chambers, " << r["walls"].size() << " walls";
    else if (cmd == "mmp")
        os << r["crossings"].size() << " crossings, status " << r["status"].get<std::string>() << ", final model "
           << r["final"]["model_id"].get<std::string>();
    else if (cmd == "h0")
        os << r["divisors"].size() << " divisors up to k = " << r["k_max"].get<long>();
    else if (cmd == "curve-ring")
        os << r["support_pairs"].size() << " support pairs in box " << r["box"].get<long>() << ", "
           << (r["finitely_generated"].get<bool>() ? "finitely generated" : "not finitely generated");
    else if (cmd == "gen-check")
        os << (r.contains("gen") ? (r["gen"].get<bool>() ? "gen" : "not gen") : "no class") << ", "
           << r["twists"].size() << " twists";
    else if (cmd == "fundamental-domain")
        os << "group order " << r["group_order"].get<std::size_t>() << ", domain with "
           << r["domain"]["facets"].size() << " facets, tiling " << (r["tiling"]["ok"].get<bool>() ? "verified" : "FAILED");
    else if (cmd == "visible-boundary")
        os << r["queries"].size() << " queries";
    return os.str();
}

} // namespace glab::cli
