#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "toric_holim/colocal.hpp"

namespace toric::io {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { fail(ErrorCode::ParseError, what); }

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline Int to_int(const json& j, const std::string& what) {
    if (!j.is_number_integer()) parse_fail(what + " must be an integer");
    return j.get<Int>();
}

inline std::vector<Int> to_ints(const json& j, const std::string& what) {
    if (!j.is_array()) parse_fail(what + " must be an array of integers");
    std::vector<Int> v;
    for (const auto& x : j) v.push_back(to_int(x, what));
    return v;
}

inline std::size_t to_index(const json& j, const std::string& what) {
    Int v = to_int(j, what);
    if (v < 0) parse_fail(what + " must be nonnegative");
    return std::size_t(v);
}

inline Cone to_cone(const json& j) {
    if (!j.is_array()) parse_fail("cone must be an array of ray indices");
    Cone c;
    for (const auto& x : j) c.push_back(to_index(x, "ray index"));
    std::sort(c.begin(), c.end());
    return c;
}

template <class F>
F to_coeff(const json& j) {
    if (j.is_number_integer()) return F(j.get<Int>());
    if (j.is_string()) {
        try {
            return ScalarTraits<F>::parse(j.get<std::string>());
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            parse_fail("bad coefficient '" + j.get<std::string>() + "'");
        }
    }
    parse_fail("coefficient must be an integer or a \"p/q\" string");
}

template <class F>
MonomialMatrix<F> to_matrix(const json& entries, std::size_t rows, std::size_t cols, std::size_t rank) {
    if (!entries.is_array()) parse_fail("entries must be an array");
    MonomialMatrix<F> mm{rows, cols, {}};
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() < 3 || e.size() > 4) parse_fail("entry must be [row, col, coeff, shift]");
        MonomialEntry<F> me{to_index(e[0], "row"), to_index(e[1], "col"), to_coeff<F>(e[2]), {}};
        if (e.size() == 4) {
            me.shift = to_ints(e[3], "shift");
            if (me.shift.size() != rank) fail(ErrorCode::RankMismatch, "entry shift has the wrong length");
        }
        if (!is_zero(me.coeff)) mm.entries.push_back(std::move(me));
    }
    mm.check("matrix");
    return mm;
}

inline Region to_region(const json& j) {
    if (!j.is_array()) parse_fail("region must be an array of constraints");
    std::vector<Constraint> cs;
    for (const auto& c : j) {
        if (!c.is_array() || c.size() != 3 || !c[1].is_string())
            parse_fail("constraint must be [ray, \"ge\"|\"eq\", bound]");
        const auto rel = c[1].get<std::string>();
        if (rel != "ge" && rel != "eq") parse_fail("relation must be \"ge\" or \"eq\"");
        cs.push_back({to_index(c[0], "ray"), rel == "ge" ? Relation::Ge : Relation::Eq, to_int(c[2], "bound")});
    }
    return Region(std::move(cs));
}

} // namespace detail

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, path + ": " + e.what());
    }
}

/// { "rank": n, "rays": [[...]], "max_cones": [[...]] }
inline Fan parse_fan(const json& j) {
    FanSpec spec;
    spec.rank = detail::to_index(detail::field(j, "rank"), "rank");
    const auto& rays = detail::field(j, "rays");
    if (!rays.is_array()) detail::parse_fail("rays must be an array");
    for (const auto& r : rays) spec.rays.push_back(detail::to_ints(r, "ray"));
    const auto& cones = detail::field(j, "max_cones");
    if (!cones.is_array()) detail::parse_fail("max_cones must be an array");
    for (const auto& c : cones) spec.max_cones.push_back(detail::to_cone(c));
    return validate_fan(spec);
}

/// Presheaf on `fan`. Either a shorthand
///   { "line_bundle": [k...] } or { "free": { "cone": [...], "degree": l } }
/// or the explicit form
///   { "cones": [ { "cone": [...], "summands": [ { "degree": l, "regions": [[[ray, "ge", c], ...], ...] } ],
///                  "differential": [ { "degree": l, "entries": [[row, col, coeff, shift], ...] } ] } ],
///     "structure": [ { "from": [...], "to": [...], "degree": l, "entries": [...] } ] }
/// Cones left out are zero.
template <class F = Rational>
MonomialPresheaf<F> parse_presheaf(const json& j, const Fan& fan) {
    using namespace detail;
    if (!j.is_object()) parse_fail("presheaf must be an object");
    if (j.contains("line_bundle")) return line_bundle<F>(fan, to_ints(j.at("line_bundle"), "twist vector"));
    if (j.contains("free")) {
        const auto& f = j.at("free");
        int l = int(to_int(field(f, "degree"), "degree"));
        return free_presheaf(fan, to_cone(field(f, "cone")), sphere_pattern<F>(l));
    }
    MonomialPresheaf<F> p(fan);
    auto index = [&](const json& c) {
        auto i = fan.index_of(to_cone(c));
        if (!i) fail(ErrorCode::NotFace, "cone " + c.dump() + " is not in the fan");
        return *i;
    };
    const auto& cones = field(j, "cones");
    if (!cones.is_array()) parse_fail("cones must be an array");
    for (const auto& c : cones) {
        auto i = index(field(c, "cone"));
        auto& v = p.values[i];
        for (const auto& s : field(c, "summands")) {
            int l = int(to_int(field(s, "degree"), "degree"));
            auto& rs = v.summands[l];
            for (const auto& r : field(s, "regions")) rs.push_back(to_region(r));
        }
        if (c.contains("differential"))
            for (const auto& d : c.at("differential")) {
                int l = int(to_int(field(d, "degree"), "degree"));
                v.differential[l] = to_matrix<F>(field(d, "entries"), v.at(l - 1).size(), v.at(l).size(), fan.rank());
            }
    }
    if (j.contains("structure"))
        for (const auto& s : j.at("structure")) {
            auto a = index(field(s, "from")), b = index(field(s, "to"));
            int l = int(to_int(field(s, "degree"), "degree"));
            p.structure[{a, b}][l] =
                to_matrix<F>(field(s, "entries"), p.values[b].at(l).size(), p.values[a].at(l).size(), fan.rank());
        }
    p.check();
    return p;
}

/// { "source": presheaf, "target": presheaf,
///   "components": [ { "cone": [...], "degree": l, "entries": [...] } ] }
/// or { "inclusion": { "source": ..., "target": ... } } for summand-wise identity entries.
template <class F = Rational>
PresheafMap<F> parse_map(const json& j, const Fan& fan) {
    using namespace detail;
    if (j.is_object() && j.contains("inclusion")) {
        const auto& inc = j.at("inclusion");
        return monomial_inclusion(parse_presheaf<F>(field(inc, "source"), fan), parse_presheaf<F>(field(inc, "target"), fan));
    }
    if (j.is_object() && j.contains("identity")) return identity_map(parse_presheaf<F>(j.at("identity"), fan));
    PresheafMap<F> f(parse_presheaf<F>(field(j, "source"), fan), parse_presheaf<F>(field(j, "target"), fan));
    if (j.contains("components"))
        for (const auto& c : j.at("components")) {
            auto i = fan.index_of(to_cone(field(c, "cone")));
            if (!i) fail(ErrorCode::NotFace, "cone is not in the fan");
            int l = int(to_int(field(c, "degree"), "degree"));
            f.components[*i][l] = to_matrix<F>(field(c, "entries"), f.target.values[*i].at(l).size(),
                                               f.source.values[*i].at(l).size(), fan.rank());
        }
    f.check();
    return f;
}

// ----------------------------------------------------------------- output

inline json cones_json(const std::vector<Cone>& cs) {
    json a = json::array();
    for (const auto& c : cs) a.push_back(c);
    return a;
}

inline json fan_json(const Fan& fan) {
    json rays = json::array();
    for (std::size_t r = 0; r < fan.num_rays(); ++r) rays.push_back(fan.ray(r));
    return json{{"rank", fan.rank()},
                {"rays", rays},
                {"cones", cones_json(fan.cones())},
                {"max_cones", cones_json(fan.maximal_cones())},
                {"regular", is_regular(fan)},
                {"complete", is_regular(fan) && is_complete(fan)}};
}

inline json vectors_json(const std::set<TwistVector>& vs) {
    json a = json::array();
    for (const auto& v : vs) a.push_back(v);
    return a;
}

inline json window_json(const Window& w) {
    if (w.kind == Window::Kind::Box) return json{{"kind", "box"}, {"lo", w.lo}, {"hi", w.hi}};
    return json{{"kind", "auto"}, {"bound", w.bound}};
}

inline json mode_json(const CheckMode& m) {
    if (m.kind == CheckMode::Kind::Chambers) return json{{"kind", "chambers"}};
    return window_json(m.window);
}

inline json dims_json(const std::map<int, std::size_t>& d) {
    json a = json::array();
    for (auto [deg, dim] : d) a.push_back(json{{"degree", deg}, {"dim", dim}});
    return a;
}

inline json entries_json(const std::vector<TableEntry>& es) {
    json a = json::array();
    for (const auto& e : es) a.push_back(json{{"m", e.m}, {"degree", e.degree}, {"dim", e.dim}});
    return a;
}

/// Totals in homological degrees of the holim and, with H^k = h_{-k}, in
/// cohomological degrees.
inline json table_json(const GradedCohomologyTable& t) {
    json coh = json::array();
    auto totals = t.totals();
    for (auto it = totals.rbegin(); it != totals.rend(); ++it) coh.push_back(json{{"k", -it->first}, {"dim", it->second}});
    return json{{"window", window_json(t.window)},
                {"complete", t.complete},
                {"entries", entries_json(t.entries)},
                {"totals", dims_json(totals)},
                {"cohomology", coh}};
}

inline std::string table_tsv(const GradedCohomologyTable& t, std::size_t rank) {
    std::ostringstream os;
    for (std::size_t i = 0; i < rank; ++i) os << "m" << (i + 1) << '\t';
    os << "degree\tdim\n";
    for (const auto& e : t.entries) {
        for (auto x : e.m) os << x << '\t';
        os << e.degree << '\t' << e.dim << '\n';
    }
    return os.str();
}

inline json sheaf_json(const SheafVerdict& v, const Fan& fan) {
    json rels = json::array();
    for (const auto& r : v.relations)
        rels.push_back(json{{"from", fan.cones()[r.from]},
                            {"to", fan.cones()[r.to]},
                            {"pass", r.pass},
                            {"defect", dims_json(r.defect)},
                            {"witness", r.witness ? json(*r.witness) : json(nullptr)}});
    return json{{"mode", v.mode == CheckMode::Kind::Chambers ? "chambers" : "window"}, {"pass", v.pass()}, {"relations", rels}};
}

inline json colocal_json(const ColocalReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(json{{"k", c.k}, {"acyclic", c.acyclic}, {"defects", entries_json(c.defects)}});
    return json{{"r_sigma", vectors_json(r.r_sigma.vectors)}, {"checks", checks}, {"window", mode_json(r.mode)}, {"pass", r.pass()}};
}

} // namespace toric::io
