#pragma once

// JSON encodings. Every document carries "schema": "f2ext/1" and a "type".
// Bit vectors are strings of '0'/'1' with coordinate 0 first; rationals are
// exact "num/den" strings, with a *_float twin for convenience only.

#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "f2ext/error.hpp"
#include "f2ext/f2core.hpp"
#include "f2ext/hashfam.hpp"
#include "f2ext/impossibility.hpp"
#include "f2ext/polymap.hpp"
#include "f2ext/rational.hpp"
#include "f2ext/reduction.hpp"
#include "f2ext/search.hpp"
#include "f2ext/sources.hpp"

namespace f2ext::io {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "f2ext/1";

inline json document(const char* type) {
    json j;
    j["schema"] = schema_version;
    j["type"] = type;
    return j;
}

inline void expect_type(const json& j, const char* type) {
    if (!j.is_object() || j.value("schema", "") != schema_version)
        throw parse_error(std::string("expected a ") + schema_version + " document");
    if (j.value("type", "") != type) throw parse_error(std::string("expected a document of type ") + type);
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw parse_error(std::string("missing field: ") + key);
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw parse_error(std::string("malformed field: ") + key);
    }
}

inline std::string hex(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::uint64_t parse_hex(const std::string& s) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used, 16);
        if (used != s.size()) throw parse_error("malformed hex: " + s);
        return v;
    } catch (const std::logic_error&) {
        throw parse_error("malformed hex: " + s);
    }
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string bits(std::size_t n, std::uint64_t w) { return F2Vector(n, w).to_string(); }

inline std::uint64_t parse_bits(const std::string& s, std::size_t n) {
    try {
        const F2Vector v = F2Vector::parse(s);
        if (v.size() != n) throw parse_error("bit string has the wrong width: " + s);
        return v.word();
    } catch (const dimension_error&) {
        throw parse_error("malformed bit string: " + s);
    }
}

inline void put_rational(json& j, const std::string& key, const Rational& r) {
    j[key] = to_string(r);
    j[key + "_float"] = to_double(r);
}

inline Rational get_rational(const json& j, const char* key) { return parse_rational(field<std::string>(j, key)); }

// ---- polynomials ----

inline json poly_terms(const MultilinearPoly& p) {
    json terms = json::array();
    for (auto mono : p.monomials()) terms.push_back(monomial_vars(mono));
    return terms;
}

inline MultilinearPoly poly_from_terms(const json& terms, std::size_t m) {
    if (!terms.is_array()) throw parse_error("polynomial must be a list of monomials");
    std::vector<Monomial> monos;
    for (const auto& t : terms) {
        if (!t.is_array()) throw parse_error("monomial must be a list of variable indices");
        Monomial mono = 0;
        for (const auto& v : t) {
            if (!v.is_number_unsigned() || v.get<std::size_t>() >= m) throw parse_error("variable index out of range");
            mono |= Monomial{1} << v.get<std::size_t>();
        }
        monos.push_back(mono);
    }
    return MultilinearPoly(m, std::move(monos));
}

inline json to_json(const PolyMap& p) {
    json j = document("polymap");
    j["m"] = p.num_vars();
    json outs = json::array();
    for (const auto& q : p.outputs()) outs.push_back(poly_terms(q));
    j["outputs"] = std::move(outs);
    return j;
}

inline PolyMap polymap_from_json(const json& j) {
    expect_type(j, "polymap");
    const auto m = field<std::size_t>(j, "m");
    if (m > max_width) throw parse_error("m exceeds 64");
    const json& outs = j.at("outputs");
    if (!outs.is_array()) throw parse_error("outputs must be a list");
    std::vector<MultilinearPoly> ps;
    for (const auto& o : outs) ps.push_back(poly_from_terms(o, m));
    return PolyMap(m, std::move(ps));
}

inline std::string digest(const PolyMap& p) { return hex(fnv1a(to_json(p).dump())); }

// ---- distributions ----

inline json to_json(const DiscreteDistribution& d) {
    json j = document("distribution");
    j["n"] = d.n();
    j["den"] = d.denominator().str();
    if (auto ml = d.m_log()) j["m_log"] = *ml;
    json counts = json::object();
    for (const auto& [z, c] : d.counts()) {
        if (c <= std::numeric_limits<std::uint64_t>::max()) counts[bits(d.n(), z)] = c.convert_to<std::uint64_t>();
        else counts[bits(d.n(), z)] = c.str();
    }
    j["counts"] = std::move(counts);
    return j;
}

inline DiscreteDistribution distribution_from_json(const json& j) {
    expect_type(j, "distribution");
    const auto n = field<std::size_t>(j, "n");
    BigInt den;
    if (j.contains("den")) {
        try {
            den = BigInt(field<std::string>(j, "den"));
        } catch (const std::runtime_error&) {
            throw parse_error("malformed den");
        }
    } else {
        den = pow2(field<std::size_t>(j, "m_log"));
    }
    DiscreteDistribution::Counts counts;
    const json& cs = j.at("counts");
    if (!cs.is_object()) throw parse_error("counts must be an object");
    for (const auto& [key, val] : cs.items()) {
        BigInt c;
        try {
            c = val.is_string() ? BigInt(val.get<std::string>()) : BigInt(val.get<std::uint64_t>());
        } catch (const std::exception&) {
            throw parse_error("malformed count for " + key);
        }
        counts[parse_bits(key, n)] += c;
    }
    try {
        return DiscreteDistribution(n, den, std::move(counts));
    } catch (const precondition_error& e) {
        throw parse_error(e.what());
    }
}

// ---- sources ----

inline json to_json(const NOBFSource& x) {
    json j = document("nobf");
    j["n"] = x.n;
    j["k"] = x.k;
    j["good_positions"] = x.good_positions;
    json bad = json::array();
    for (const auto& p : x.bad_polys) bad.push_back(poly_terms(p));
    j["bad_polys"] = std::move(bad);
    j["degree"] = x.degree();
    j["map"] = to_json(x.to_polymap());
    return j;
}

inline NOBFSource nobf_from_json(const json& j) {
    expect_type(j, "nobf");
    const auto n = field<std::size_t>(j, "n");
    const auto good = field<std::vector<std::size_t>>(j, "good_positions");
    std::vector<MultilinearPoly> bad;
    for (const auto& t : j.at("bad_polys")) bad.push_back(poly_from_terms(t, good.size()));
    return NOBFSource(n, good, std::move(bad));
}

// ---- family members ----

inline json to_json(const FamilyMember& f) {
    json j = document("family_member");
    j["n_in"] = f.family.n_in;
    j["r_out"] = f.family.r_out;
    j["t"] = f.family.t;
    j["w"] = f.family.w;
    j["seed"] = hex(f.seed);
    return j;
}

inline FamilyMember member_from_json(const json& j) {
    expect_type(j, "family_member");
    const HashFamily fam(field<std::size_t>(j, "n_in"), field<std::size_t>(j, "r_out"), field<std::size_t>(j, "t"));
    if (j.contains("w") && field<std::size_t>(j, "w") != fam.w) throw parse_error("w disagrees with max(n_in, r_out)");
    return FamilyMember(fam, parse_hex(field<std::string>(j, "seed")));
}

// ---- search ----

inline json to_json(const SearchParams& p) {
    json j = document("search_params");
    j["d"] = p.d;
    j["ell"] = p.ell;
    j["n0"] = p.n0;
    j["k0"] = to_string(p.k0);
    j["r"] = p.r;
    j["eps"] = to_string(p.eps);
    j["t"] = p.t;
    return j;
}

inline SearchParams params_from_json(const json& j) {
    expect_type(j, "search_params");
    SearchParams p;
    p.d = field<std::size_t>(j, "d");
    p.ell = field<std::size_t>(j, "ell");
    p.n0 = field<std::size_t>(j, "n0");
    p.k0 = get_rational(j, "k0");
    p.r = field<std::size_t>(j, "r");
    p.eps = get_rational(j, "eps");
    p.t = field<std::size_t>(j, "t");
    return p;
}

inline json to_json(const SearchReport& r) {
    json j = document("search_report");
    j["status"] = to_string(r.status);
    j["params"] = to_json(r.params);
    j["params_hash"] = hex(r.params.hash());
    j["examined_seeds"] = r.examined_seeds;
    j["found"] = r.found ? json(hex(*r.found)) : json(nullptr);
    if (r.found) j["member"] = to_json(FamilyMember(r.params.family(), *r.found));
    put_rational(j, "worst_error", r.worst_error);
    j["worst_source"] = r.worst_source ? to_json(*r.worst_source) : json(nullptr);
    j["eligible_source_count"] = r.eligible_source_count;
    j["distinct_distributions"] = r.distinct_distributions;
    j["best_seed"] = r.best_seed ? json(hex(*r.best_seed)) : json(nullptr);
    j["next_seed"] = r.next_seed ? json(hex(*r.next_seed)) : json(nullptr);
    j["recommended_t"] = r.recommended_t;
    return j;
}

inline std::optional<std::uint64_t> opt_hex(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return parse_hex(field<std::string>(j, key));
}

inline SearchReport report_from_json(const json& j) {
    expect_type(j, "search_report");
    SearchReport r;
    r.params = params_from_json(j.at("params"));
    const auto st = field<std::string>(j, "status");
    if (st == "found") r.status = SearchStatus::found;
    else if (st == "fail") r.status = SearchStatus::fail;
    else if (st == "budget_exhausted") r.status = SearchStatus::budget_exhausted;
    else throw parse_error("unknown search status: " + st);
    r.examined_seeds = field<std::uint64_t>(j, "examined_seeds");
    r.found = opt_hex(j, "found");
    r.worst_error = get_rational(j, "worst_error");
    if (j.contains("worst_source") && !j.at("worst_source").is_null())
        r.worst_source = polymap_from_json(j.at("worst_source"));
    r.eligible_source_count = field<std::uint64_t>(j, "eligible_source_count");
    r.distinct_distributions = field<std::uint64_t>(j, "distinct_distributions");
    r.best_seed = opt_hex(j, "best_seed");
    r.next_seed = opt_hex(j, "next_seed");
    r.recommended_t = field<std::size_t>(j, "recommended_t");
    return r;
}

inline json to_json(const Checkpoint& c, const SearchParams& p) {
    json j = document("checkpoint");
    j["params"] = to_json(p);
    j["params_hash"] = hex(c.params_hash);
    j["next_seed"] = hex(c.next_seed);
    j["best_seed"] = c.best_seed ? json(hex(*c.best_seed)) : json(nullptr);
    j["best_error_num"] = hex(c.best_error_num);
    j["best_source_index"] = hex(c.best_source_index);
    return j;
}

inline std::pair<Checkpoint, SearchParams> checkpoint_from_json(const json& j) {
    expect_type(j, "checkpoint");
    Checkpoint c;
    c.params_hash = parse_hex(field<std::string>(j, "params_hash"));
    c.next_seed = parse_hex(field<std::string>(j, "next_seed"));
    c.best_seed = opt_hex(j, "best_seed");
    c.best_error_num = parse_hex(field<std::string>(j, "best_error_num"));
    c.best_source_index = parse_hex(field<std::string>(j, "best_source_index"));
    return {c, params_from_json(j.at("params"))};
}

// ---- reduction ----

inline json to_json(const ReductionResult& r) {
    json j = document("reduction");
    j["L"] = r.l.to_strings();
    j["L_cols"] = r.l.cols();
    auto parts = [](const std::vector<ReductionPart>& ps) {
        json a = json::array();
        for (const auto& p : ps) {
            json e;
            e["b"] = p.b.to_string();
            put_rational(e, "weight", p.weight);
            e["q_digest"] = digest(p.q);
            e["q"] = to_json(p.q);
            a.push_back(std::move(e));
        }
        return a;
    };
    j["parts"] = parts(r.parts);
    j["residual"] = parts(r.residual);
    put_rational(j, "residual_weight", r.residual_weight);
    put_rational(j, "good_fraction", r.good_fraction);
    j["attempts_used"] = r.attempts_used;
    return j;
}

inline ReductionResult reduction_from_json(const json& j) {
    expect_type(j, "reduction");
    ReductionResult r;
    const auto rows = field<std::vector<std::string>>(j, "L");
    r.l = F2Matrix::parse(field<std::size_t>(j, "L_cols"), rows);
    auto parts = [](const json& a) {
        std::vector<ReductionPart> ps;
        for (const auto& e : a) {
            PolyMap q = polymap_from_json(e.at("q"));
            if (digest(q) != field<std::string>(e, "q_digest")) throw parse_error("reduction part digest mismatch");
            const auto b = field<std::string>(e, "b");
            ps.push_back({get_rational(e, "weight"), std::move(q), b.empty() ? F2Vector(0) : F2Vector::parse(b)});
        }
        return ps;
    };
    r.parts = parts(j.at("parts"));
    r.residual = parts(j.at("residual"));
    r.residual_weight = get_rational(j, "residual_weight");
    r.good_fraction = get_rational(j, "good_fraction");
    r.attempts_used = field<std::size_t>(j, "attempts_used");
    return r;
}

// ---- witnesses ----

inline json set_json(std::size_t n, const std::vector<std::uint64_t>& elems) {
    std::vector<std::uint64_t> s = elems;
    std::sort(s.begin(), s.end());
    json a = json::array();
    for (auto w : s) a.push_back(bits(n, w));
    return a;
}

inline json to_json(const SupportSet& s) {
    json j = document("support_set");
    j["n"] = s.n();
    j["elems"] = set_json(s.n(), s.elems());
    return j;
}

inline SupportSet support_from_json(const json& j) {
    expect_type(j, "support_set");
    const auto n = field<std::size_t>(j, "n");
    std::vector<std::uint64_t> w;
    for (const auto& e : field<std::vector<std::string>>(j, "elems")) w.push_back(parse_bits(e, n));
    try {
        return SupportSet(n, std::move(w));
    } catch (const precondition_error& e) {
        throw parse_error(e.what());
    }
}

inline json subspace_json(const AffineSubspace& u) {
    json j;
    j["offset"] = u.offset().to_string();
    json b = json::array();
    for (const auto& v : u.basis()) b.push_back(v.to_string());
    j["basis"] = std::move(b);
    j["dim"] = u.dim();
    return j;
}

inline AffineSubspace subspace_from_json(const json& j, std::size_t n) {
    const F2Vector off(n, parse_bits(field<std::string>(j, "offset"), n));
    std::vector<F2Vector> basis;
    for (const auto& s : field<std::vector<std::string>>(j, "basis")) basis.emplace_back(n, parse_bits(s, n));
    try {
        return AffineSubspace(n, off, std::move(basis));
    } catch (const precondition_error& e) {
        throw parse_error(e.what());
    }
}

inline json to_json(const BipartiteGraph& g) {
    json j = document("bipartite_graph");
    j["left"] = g.left();
    j["right"] = g.right();
    json e = json::array();
    for (auto [a, b] : g.edges()) e.push_back({a, b});
    j["edges"] = std::move(e);
    return j;
}

inline BipartiteGraph graph_from_json(const json& j) {
    expect_type(j, "bipartite_graph");
    BipartiteGraph g(field<std::size_t>(j, "left"), field<std::size_t>(j, "right"));
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw parse_error("edge must be a pair");
        try {
            g.add_edge(e[0].get<std::size_t>(), e[1].get<std::size_t>());
        } catch (const nlohmann::json::exception&) {
            throw parse_error("malformed edge");
        } catch (const dimension_error& err) {
            throw parse_error(err.what());
        }
    }
    return g;
}

/// Serializes with two-space indentation and a trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
}

} // namespace f2ext::io
