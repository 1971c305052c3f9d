#pragma once

// Extractor search over a t-wise independent family against every degree-d
// polynomial source with ell inputs and n0 outputs.
//
// The error of f on a source depends only on the source's output histogram,
// so the sources are first collapsed into a catalog of distinct eligible
// histograms, each tagged with the first (canonical) source index producing
// it. Seeds are then scored against the catalog with integer arithmetic:
// the distance of f(P(U_ell)) to U_r equals err / 2^(ell + r + 1) with
// err = sum_y |count_y * 2^r - 2^ell|.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "f2ext/error.hpp"
#include "f2ext/hashfam.hpp"
#include "f2ext/parallel.hpp"
#include "f2ext/polymap.hpp"
#include "f2ext/rational.hpp"
#include "f2ext/sources.hpp"

namespace f2ext {

inline constexpr std::size_t max_monomials_per_output = 20;
inline constexpr std::size_t default_max_source_bits = 28;

struct SearchParams {
    std::size_t d = 1;
    std::size_t ell = 1;
    std::size_t n0 = 1;
    Rational k0 = 0;
    std::size_t r = 1;
    Rational eps = 0;
    std::size_t t = 2;
    std::size_t max_source_bits = default_max_source_bits;

    HashFamily family() const { return HashFamily(n0, r, t); }

    void validate() const {
        if (ell > max_enum_vars) throw size_error("search: ell exceeds the enumeration cap");
        if (r > n0) throw precondition_error("search: r must not exceed n0");
        if (r < 1 || n0 < 1) throw precondition_error("search: r and n0 must be positive");
        if (k0 < 0 || eps < 0) throw precondition_error("search: k0 and eps must be non-negative");
        const std::size_t per = monomials_up_to(ell, d).size();
        if (per > max_monomials_per_output) throw size_error("search: more than 20 monomials per output");
        if (per * n0 > max_source_bits) throw size_error("search: source enumeration exceeds the configured budget");
        (void)family();
    }

    /// Stable identity for checkpoints.
    std::string canonical() const {
        return "d=" + std::to_string(d) + ";ell=" + std::to_string(ell) + ";n0=" + std::to_string(n0) +
               ";k0=" + to_string(k0) + ";r=" + std::to_string(r) + ";eps=" + to_string(eps) +
               ";t=" + std::to_string(t);
    }
    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

/// Every degree-d map from ell bits to n0 bits, in canonical order: index bit
/// j*M + i selects monomial i (increasing mask order) in output j.
class SourceEnumerator {
public:
    SourceEnumerator(std::size_t d, std::size_t ell, std::size_t n0, std::size_t max_bits = default_max_source_bits)
        : d_(d), ell_(ell), n0_(n0), monos_(monomials_up_to(ell, d)) {
        if (ell > max_enum_vars) throw size_error("enumerate_sources: ell exceeds the enumeration cap");
        if (monos_.size() > max_monomials_per_output) throw size_error("enumerate_sources: more than 20 monomials per output");
        if (index_bits() > max_bits) throw size_error("enumerate_sources: too many sources to enumerate");
    }

    std::size_t degree() const { return d_; }
    std::size_t ell() const { return ell_; }
    std::size_t n0() const { return n0_; }
    const std::vector<Monomial>& monomials() const { return monos_; }
    std::size_t index_bits() const { return monos_.size() * n0_; }
    std::uint64_t count() const { return std::uint64_t{1} << index_bits(); }

    PolyMap at(std::uint64_t index) const {
        std::vector<MultilinearPoly> outs;
        const std::size_t per = monos_.size();
        for (std::size_t j = 0; j < n0_; ++j) {
            std::vector<Monomial> chosen;
            for (std::size_t i = 0; i < per; ++i)
                if (index >> (j * per + i) & 1U) chosen.push_back(monos_[i]);
            outs.emplace_back(ell_, std::move(chosen));
        }
        return PolyMap(ell_, std::move(outs));
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::uint64_t i = 0; i < count(); ++i) fn(i, at(i));
    }

private:
    std::size_t d_, ell_, n0_;
    std::vector<Monomial> monos_;
};

inline std::vector<PolyMap> enumerate_sources(std::size_t d, std::size_t ell, std::size_t n0) {
    SourceEnumerator e(d, ell, n0);
    std::vector<PolyMap> out;
    out.reserve(e.count());
    e.for_each([&](std::uint64_t, PolyMap p) { out.push_back(std::move(p)); });
    return out;
}

struct SourceClass {
    std::vector<std::uint32_t> counts; // histogram over the 2^n0 outcomes
    std::uint64_t first_index = 0;     // smallest source index with this histogram
};

/// Distinct output histograms of the eligible sources (H_inf >= k0).
struct SourceCatalog {
    std::uint64_t source_count = 0;
    std::uint64_t eligible_count = 0;
    std::vector<SourceClass> classes; // sorted by first_index
};

inline SourceCatalog build_catalog(const SearchParams& params, unsigned workers = 1) {
    params.validate();
    const SourceEnumerator en(params.d, params.ell, params.n0, params.max_source_bits);
    const std::size_t points = std::size_t{1} << params.ell;
    const std::size_t outcomes = std::size_t{1} << params.n0;
    const std::size_t per = en.monomials().size();

    // eligible[c]: a source whose largest count is c has H_inf >= k0.
    std::vector<std::uint8_t> eligible(points + 1, 0);
    for (std::size_t c = 1; c <= points; ++c) eligible[c] = count_meets_entropy(BigInt(c), pow2(params.ell), params.k0) ? 1 : 0;
    // Monomial value at every point: mono_at[i][x].
    std::vector<std::vector<std::uint8_t>> mono_at(per, std::vector<std::uint8_t>(points));
    for (std::size_t i = 0; i < per; ++i)
        for (std::size_t x = 0; x < points; ++x) mono_at[i][x] = (x & en.monomials()[i]) == en.monomials()[i];

    const unsigned w = std::max(1U, workers);
    struct Partial {
        std::map<std::vector<std::uint32_t>, std::uint64_t> seen;
        std::uint64_t eligible = 0;
    };
    std::vector<Partial> partial(w);
    detail::run_workers(w, [&](unsigned id) {
        auto& out = partial[id];
        std::vector<std::uint64_t> z(points);
        std::vector<std::uint32_t> hist(outcomes);
        for (std::uint64_t idx = id; idx < en.count(); idx += w) {
            std::fill(z.begin(), z.end(), 0);
            for (std::size_t j = 0; j < params.n0; ++j) {
                const std::uint64_t sel = idx >> (j * per);
                for (std::size_t i = 0; i < per; ++i) {
                    if (!(sel >> i & 1U)) continue;
                    for (std::size_t x = 0; x < points; ++x) z[x] ^= static_cast<std::uint64_t>(mono_at[i][x]) << j;
                }
            }
            std::fill(hist.begin(), hist.end(), 0);
            std::uint32_t mx = 0;
            for (auto v : z) mx = std::max(mx, ++hist[v]);
            if (!eligible[mx]) continue;
            ++out.eligible;
            auto [it, inserted] = out.seen.emplace(hist, idx);
            if (!inserted) it->second = std::min(it->second, idx);
        }
    });

    std::map<std::vector<std::uint32_t>, std::uint64_t> merged;
    SourceCatalog cat;
    cat.source_count = en.count();
    for (auto& p : partial) {
        cat.eligible_count += p.eligible;
        for (auto& [h, idx] : p.seen) {
            auto [it, inserted] = merged.emplace(h, idx);
            if (!inserted) it->second = std::min(it->second, idx);
        }
    }
    for (auto& [h, idx] : merged) cat.classes.push_back({h, idx});
    std::sort(cat.classes.begin(), cat.classes.end(),
              [](const SourceClass& a, const SourceClass& b) { return a.first_index < b.first_index; });
    return cat;
}

namespace detail {

struct Score {
    std::uint64_t worst = 0;       // error numerator over 2^(ell + r + 1)
    std::uint64_t worst_index = 0; // first source attaining it
    bool complete = true;          // false when the scan was cut short
};

/// Scores f against every class. Stops early once the running maximum
/// exceeds `cutoff` (a pure speedup; callers only use incomplete scores as
/// "worse than cutoff").
inline Score score(const SearchParams& p, const SourceCatalog& cat, const TruthTable& f,
                   std::uint64_t cutoff = std::numeric_limits<std::uint64_t>::max()) {
    const std::size_t outs = std::size_t{1} << p.r;
    const std::uint64_t cell = std::uint64_t{1} << p.ell;
    std::vector<std::uint64_t> acc(outs);
    Score s;
    bool any = false;
    for (const auto& cls : cat.classes) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t z = 0; z < cls.counts.size(); ++z) acc[f.values[z]] += cls.counts[z];
        std::uint64_t err = 0;
        for (auto c : acc) {
            const std::uint64_t scaled = c << p.r;
            err += scaled > cell ? scaled - cell : cell - scaled;
        }
        if (!any || err > s.worst) {
            s.worst = err;
            s.worst_index = cls.first_index;
            any = true;
        }
        if (s.worst > cutoff) {
            s.complete = false;
            return s;
        }
    }
    return s;
}

/// floor(eps * 2^(ell + r + 1)), saturated.
inline std::uint64_t eps_threshold(const SearchParams& p) {
    const BigInt scaled = boost::multiprecision::numerator(p.eps) * pow2(p.ell + p.r + 1) /
                          boost::multiprecision::denominator(p.eps);
    if (scaled >= BigInt(std::numeric_limits<std::uint64_t>::max())) return std::numeric_limits<std::uint64_t>::max();
    return scaled.convert_to<std::uint64_t>();
}

inline Rational error_value(const SearchParams& p, std::uint64_t num) { return Rational(BigInt(num), pow2(p.ell + p.r + 1)); }

} // namespace detail

enum class SearchStatus { found, fail, budget_exhausted };

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::fail: return "fail";
        case SearchStatus::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

struct SearchReport {
    SearchParams params;
    SearchStatus status = SearchStatus::fail;
    std::uint64_t examined_seeds = 0;
    std::optional<std::uint64_t> found;
    std::optional<PolyMap> worst_source;
    Rational worst_error = 0;
    std::uint64_t eligible_source_count = 0;
    std::uint64_t distinct_distributions = 0;
    std::optional<std::uint64_t> best_seed; // lowest-error seed when nothing passed
    std::optional<std::uint64_t> next_seed; // resume token
    std::size_t recommended_t = 0;

    friend bool operator==(const SearchReport&, const SearchReport&) = default;
};

inline bool operator==(const SearchParams& a, const SearchParams& b) { return a.canonical() == b.canonical(); }

inline std::size_t recommended_t_for(const SearchParams& p) {
    const double class_log2 = static_cast<double>(monomials_up_to(p.ell, p.d).size() * p.n0);
    return recommended_t(to_double(p.k0), class_log2);
}

/// Exact worst-case error of f over every eligible source.
inline SearchReport verify_extractor(const TruthTable& f, const SearchParams& params, const SourceCatalog& cat) {
    if (f.m != params.n0 || f.n != params.r) throw dimension_error("verify_extractor: f must map n0 bits to r bits");
    SearchReport rep;
    rep.params = params;
    rep.eligible_source_count = cat.eligible_count;
    rep.distinct_distributions = cat.classes.size();
    rep.recommended_t = recommended_t_for(params);
    if (!cat.classes.empty()) {
        const auto s = detail::score(params, cat, f);
        rep.worst_error = detail::error_value(params, s.worst);
        rep.worst_source = SourceEnumerator(params.d, params.ell, params.n0, params.max_source_bits).at(s.worst_index);
    }
    rep.status = rep.worst_error <= params.eps ? SearchStatus::found : SearchStatus::fail;
    return rep;
}

inline SearchReport verify_extractor(const TruthTable& f, const SearchParams& params) {
    return verify_extractor(f, params, build_catalog(params));
}

inline SearchReport verify_extractor(const FamilyMember& f, const SearchParams& params) {
    if (!(f.family == params.family())) throw precondition_error("verify_extractor: member is not from the params' family");
    auto rep = verify_extractor(f.table(), params);
    rep.examined_seeds = 1;
    if (rep.status == SearchStatus::found) rep.found = f.seed;
    return rep;
}

struct Checkpoint {
    std::uint64_t params_hash = 0;
    std::uint64_t next_seed = 0;
    std::optional<std::uint64_t> best_seed;
    std::uint64_t best_error_num = 0;
    std::uint64_t best_source_index = 0;

    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct SearchOptions {
    unsigned workers = 1;
    std::optional<double> budget_seconds;
    std::optional<Checkpoint> resume;
    std::uint64_t chunk = 64; // seeds per block; independent of the worker count
    /// Called from the coordinating thread after every block and on exit.
    std::function<void(const Checkpoint&)> on_checkpoint;
};

/// Iterates seeds in increasing order and returns the first member whose worst
/// error over eligible sources is <= eps.
inline SearchReport algorithm1_search(const SearchParams& params, const SearchOptions& opt = {}) {
    params.validate();
    const auto start = std::chrono::steady_clock::now();
    const HashFamily fam = params.family();
    if (fam.seed_bits() >= 63) throw size_error("search: family too large to enumerate");
    const std::uint64_t members = fam.member_count();
    const unsigned workers = std::max(1U, opt.workers);
    const SourceCatalog cat = build_catalog(params, workers);
    const std::uint64_t threshold = detail::eps_threshold(params);
    const SourceEnumerator en(params.d, params.ell, params.n0, params.max_source_bits);

    SearchReport rep;
    rep.params = params;
    rep.eligible_source_count = cat.eligible_count;
    rep.distinct_distributions = cat.classes.size();
    rep.recommended_t = recommended_t_for(params);

    Checkpoint ck;
    ck.params_hash = params.hash();
    if (opt.resume) {
        if (opt.resume->params_hash != ck.params_hash) throw precondition_error("checkpoint belongs to different parameters");
        ck = *opt.resume;
    }

    struct Outcome {
        std::uint64_t seed = 0;
        detail::Score score;
        bool passed = false;
    };
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opt.chunk);
    while (ck.next_seed < members) {
        const std::uint64_t lo = ck.next_seed;
        const std::uint64_t hi = std::min(members, lo + chunk);
        std::vector<Outcome> out(hi - lo);
        const std::uint64_t best_known = ck.best_seed ? ck.best_error_num : std::numeric_limits<std::uint64_t>::max();
        detail::run_workers(workers, [&](unsigned id) {
            std::uint64_t local_best = best_known;
            for (std::uint64_t s = lo + id; s < hi; s += workers) {
                const FamilyMember f(fam, s);
                const auto sc = detail::score(params, cat, f.table(), std::max(threshold, local_best));
                auto& o = out[s - lo];
                o.seed = s;
                o.score = sc;
                o.passed = sc.complete && sc.worst <= threshold;
                if (sc.complete) local_best = std::min(local_best, sc.worst);
            }
        });
        for (const auto& o : out) {
            if (o.passed) {
                rep.status = SearchStatus::found;
                rep.found = o.seed;
                rep.examined_seeds = o.seed + 1;
                rep.worst_error = detail::error_value(params, o.score.worst);
                if (!cat.classes.empty()) rep.worst_source = en.at(o.score.worst_index);
                ck.next_seed = o.seed + 1;
                if (opt.on_checkpoint) opt.on_checkpoint(ck);
                return rep;
            }
        }
        for (const auto& o : out) {
            if (!o.score.complete) continue;
            if (!ck.best_seed || o.score.worst < ck.best_error_num) {
                ck.best_seed = o.seed;
                ck.best_error_num = o.score.worst;
                ck.best_source_index = o.score.worst_index;
            }
        }
        ck.next_seed = hi;
        if (opt.on_checkpoint) opt.on_checkpoint(ck);
        if (opt.budget_seconds && ck.next_seed < members) {
            const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
            if (el.count() > *opt.budget_seconds) {
                rep.status = SearchStatus::budget_exhausted;
                rep.next_seed = ck.next_seed;
                rep.examined_seeds = ck.next_seed;
                break;
            }
        }
    }
    if (rep.status != SearchStatus::budget_exhausted) {
        rep.status = SearchStatus::fail;
        rep.examined_seeds = members;
    }
    if (ck.best_seed) {
        rep.best_seed = ck.best_seed;
        rep.worst_error = detail::error_value(params, ck.best_error_num);
        if (!cat.classes.empty()) rep.worst_source = en.at(ck.best_source_index);
    }
    return rep;
}

/// Ext(x) = f(first n0 bits of x).
struct PrefixExtractor {
    FamilyMember f;
    std::size_t n = 0;
    std::size_t n0 = 0;

    std::uint64_t eval_word(std::uint64_t x) const { return f.eval_word(x & low_mask(n0)); }
    F2Vector operator()(const F2Vector& x) const {
        if (x.size() != n) throw dimension_error("extractor input width mismatch");
        return F2Vector(f.family.r_out, eval_word(x.word()));
    }
};

inline PrefixExtractor compose_final_extractor(const FamilyMember& f, std::size_t n, std::size_t n0) {
    if (n0 > n) throw precondition_error("compose_final_extractor: n0 must not exceed n");
    if (f.family.n_in != n0) throw dimension_error("compose_final_extractor: f must be defined on n0 bits");
    return {f, n, n0};
}

} // namespace f2ext
