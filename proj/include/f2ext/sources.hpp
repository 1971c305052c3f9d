#pragma once

// Exact distributions over F_2^n. Probabilities are counts over a common
// integer denominator; polynomial sources give 2^m, mixtures may give any.
// Every decision (entropy thresholds, distances) uses integer arithmetic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "f2ext/error.hpp"
#include "f2ext/f2core.hpp"
#include "f2ext/polymap.hpp"
#include "f2ext/rational.hpp"

namespace f2ext {

class DiscreteDistribution {
public:
    using Counts = std::map<std::uint64_t, BigInt>;

    DiscreteDistribution() = default;

    /// Takes counts over outcome words of width n; zero counts are dropped.
    /// The counts must sum to the denominator.
    DiscreteDistribution(std::size_t n, BigInt denominator, Counts counts)
        : n_(n), den_(std::move(denominator)), counts_(std::move(counts)) {
        if (n_ > max_width) throw size_error("distribution outcome width exceeds 64");
        if (den_ <= 0) throw precondition_error("distribution denominator must be positive");
        BigInt total = 0;
        for (auto it = counts_.begin(); it != counts_.end();) {
            if (it->second < 0) throw precondition_error("negative count");
            if (n_ < 64 && (it->first >> n_) != 0) throw dimension_error("outcome wider than the distribution");
            if (it->second == 0) it = counts_.erase(it);
            else total += (it++)->second;
        }
        if (total != den_) throw precondition_error("counts must sum to the denominator");
    }

    static DiscreteDistribution point_mass(const F2Vector& z) { return {z.size(), 1, {{z.word(), 1}}}; }
    static DiscreteDistribution uniform(std::size_t n) {
        detail::check_enum_cap(n);
        Counts c;
        for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) c.emplace(z, 1);
        return {n, pow2(n), std::move(c)};
    }
    /// Flat distribution on a set of distinct outcomes.
    static DiscreteDistribution flat(std::size_t n, std::span<const std::uint64_t> support) {
        Counts c;
        for (auto z : support) c[z] += 1;
        return {n, BigInt(support.size()), std::move(c)};
    }

    std::size_t n() const { return n_; }
    const BigInt& denominator() const { return den_; }
    const Counts& counts() const { return counts_; }
    std::size_t support_size() const { return counts_.size(); }

    /// log2 of the denominator when it is a power of two.
    std::optional<std::size_t> m_log() const {
        const auto lsb = boost::multiprecision::lsb(den_);
        if (den_ == pow2(lsb)) return static_cast<std::size_t>(lsb);
        return std::nullopt;
    }

    BigInt count(std::uint64_t z) const {
        auto it = counts_.find(z);
        return it == counts_.end() ? BigInt(0) : it->second;
    }
    Rational probability(std::uint64_t z) const { return Rational(count(z), den_); }

    BigInt max_count() const {
        BigInt m = 0;
        for (const auto& [z, c] : counts_) m = std::max(m, c);
        return m;
    }

    /// Equal as probability distributions, whatever the denominators.
    friend bool operator==(const DiscreteDistribution& a, const DiscreteDistribution& b) {
        if (a.n_ != b.n_ || a.counts_.size() != b.counts_.size()) return false;
        for (auto ia = a.counts_.begin(), ib = b.counts_.begin(); ia != a.counts_.end(); ++ia, ++ib)
            if (ia->first != ib->first || ia->second * b.den_ != ib->second * a.den_) return false;
        return true;
    }

private:
    std::size_t n_ = 0;
    BigInt den_ = 1;
    Counts counts_;
};

/// Distribution of P(U_m).
inline DiscreteDistribution distribution_of(const PolyMap& p) {
    const TruthTable tt = truth_table(p);
    std::vector<std::uint64_t> v = tt.values;
    std::sort(v.begin(), v.end());
    DiscreteDistribution::Counts c;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        c.emplace_hint(c.end(), v[i], BigInt(j - i));
        i = j;
    }
    return {p.num_outputs(), pow2(p.num_vars()), std::move(c)};
}

namespace detail {
inline double log2_big(const BigInt& x) {
    const auto top = static_cast<long>(boost::multiprecision::msb(x));
    const long shift = std::max<long>(0, top - 52);
    return static_cast<double>(shift) + std::log2(static_cast<double>(BigInt(x >> shift)));
}
} // namespace detail

/// Floating-point value for reporting only; decisions use the comparator.
inline double min_entropy(const DiscreteDistribution& d) {
    return detail::log2_big(d.denominator()) - detail::log2_big(d.max_count());
}

/// max_count / den <= 2^-k for rational k = p/q, decided as max^q * 2^p <= den^q.
inline bool count_meets_entropy(const BigInt& max_count, const BigInt& den, const Rational& k) {
    const BigInt p = boost::multiprecision::numerator(k);
    const BigInt q = boost::multiprecision::denominator(k);
    if (p <= 0) return true;
    const auto qe = q.convert_to<unsigned>();
    const auto pe = p.convert_to<std::size_t>();
    return boost::multiprecision::pow(max_count, qe) * pow2(pe) <= boost::multiprecision::pow(den, qe);
}

inline bool has_min_entropy_at_least(const DiscreteDistribution& d, const Rational& k) {
    return count_meets_entropy(d.max_count(), d.denominator(), k);
}

/// Exact min-entropy as a rational when the max probability is a power of two.
inline std::optional<Rational> exact_min_entropy(const DiscreteDistribution& d) {
    const BigInt mx = d.max_count();
    const auto lm = boost::multiprecision::lsb(mx);
    const auto ld = boost::multiprecision::lsb(d.denominator());
    if (mx != pow2(lm) || d.denominator() != pow2(ld)) return std::nullopt;
    return Rational(static_cast<long long>(ld) - static_cast<long long>(lm));
}

inline Rational statistical_distance(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    if (a.n() != b.n()) throw dimension_error("statistical_distance: outcome widths differ");
    BigInt sum = 0;
    auto ia = a.counts().begin();
    auto ib = b.counts().begin();
    const auto& da = a.denominator();
    const auto& db = b.denominator();
    while (ia != a.counts().end() || ib != b.counts().end()) {
        if (ib == b.counts().end() || (ia != a.counts().end() && ia->first < ib->first)) {
            sum += ia->second * db;
            ++ia;
        } else if (ia == a.counts().end() || ib->first < ia->first) {
            sum += ib->second * da;
            ++ib;
        } else {
            sum += boost::multiprecision::abs(ia->second * db - ib->second * da);
            ++ia;
            ++ib;
        }
    }
    return Rational(sum, 2 * da * db);
}

/// Distance to the uniform distribution on r bits (r must equal D's width).
inline Rational distance_to_uniform(const DiscreteDistribution& d, std::size_t r) {
    if (d.n() != r) throw dimension_error("distance_to_uniform: width mismatch");
    const BigInt cells = pow2(r);
    BigInt sum = 0;
    for (const auto& [z, c] : d.counts()) sum += boost::multiprecision::abs(c * cells - d.denominator());
    sum += (cells - BigInt(d.support_size())) * d.denominator();
    return Rational(sum, 2 * d.denominator() * cells);
}

/// Pushforward through an arbitrary word function.
template <class Fn>
DiscreteDistribution apply_function(const DiscreteDistribution& d, Fn&& f, std::size_t out_width) {
    DiscreteDistribution::Counts out;
    for (const auto& [z, c] : d.counts()) out[static_cast<std::uint64_t>(f(z)) & low_mask(out_width)] += c;
    return {out_width, d.denominator(), std::move(out)};
}

inline DiscreteDistribution apply_function(const DiscreteDistribution& d, const TruthTable& f) {
    if (f.m != d.n()) throw dimension_error("apply_function: table input width must equal the outcome width");
    return apply_function(d, [&](std::uint64_t z) { return f.values[z]; }, f.n);
}

/// Marginal on coords; output bit j is input bit coords[j].
inline DiscreteDistribution project(const DiscreteDistribution& d, std::span<const std::size_t> coords) {
    for (auto c : coords)
        if (c >= d.n()) throw dimension_error("project: coordinate out of range");
    return apply_function(
        d,
        [&](std::uint64_t z) {
            std::uint64_t out = 0;
            for (std::size_t j = 0; j < coords.size(); ++j) out |= (z >> coords[j] & 1U) << j;
            return out;
        },
        coords.size());
}

/// Conditional distribution of the `keep` coordinates given that the `given`
/// coordinates equal `value`; nullopt when that event has probability zero.
inline std::optional<DiscreteDistribution> condition_on(const DiscreteDistribution& d,
                                                        std::span<const std::size_t> keep,
                                                        std::span<const std::size_t> given, std::uint64_t value) {
    auto extract = [](std::uint64_t z, std::span<const std::size_t> cs) {
        std::uint64_t out = 0;
        for (std::size_t j = 0; j < cs.size(); ++j) out |= (z >> cs[j] & 1U) << j;
        return out;
    };
    DiscreteDistribution::Counts out;
    BigInt total = 0;
    for (const auto& [z, c] : d.counts()) {
        if (extract(z, given) != value) continue;
        out[extract(z, keep)] += c;
        total += c;
    }
    if (total == 0) return std::nullopt;
    return DiscreteDistribution(keep.size(), total, std::move(out));
}

struct SmoothingMap {
    std::size_t n = 0;
    std::size_t k = 0;
    std::map<std::uint64_t, std::uint64_t> table; // outcome -> label in {0,1}^{k+1}

    std::uint64_t operator()(std::uint64_t z) const {
        auto it = table.find(z);
        if (it == table.end()) throw precondition_error("smoothing map is undefined outside its support");
        return it->second;
    }
};

/// Builds S : {0,1}^n -> {0,1}^{k+1} with H_inf(S(D)) >= k. The two least
/// probable classes are merged while their combined mass is at most 2^-k
/// (ties: smaller canonical label first, a class's label being its smallest
/// outcome); the surviving classes, at most 2^{k+1} of them, get injective
/// labels in canonical order.
inline std::pair<SmoothingMap, DiscreteDistribution> entropy_smooth(const DiscreteDistribution& d, std::size_t k) {
    if (k < 1) throw precondition_error("entropy_smooth: k must be at least 1");
    if (k + 1 > max_width) throw size_error("entropy_smooth: output width exceeds 64");
    if (!has_min_entropy_at_least(d, Rational(static_cast<long long>(k))))
        throw precondition_error("entropy_smooth: distribution has min-entropy below k");

    struct Class {
        BigInt mass;
        std::uint64_t label;
        std::vector<std::uint64_t> members;
    };
    std::map<std::uint64_t, Class> classes; // by canonical label
    std::set<std::pair<BigInt, std::uint64_t>> order;
    for (const auto& [z, c] : d.counts()) {
        classes.emplace(z, Class{c, z, {z}});
        order.emplace(c, z);
    }
    const BigInt budget = d.denominator(); // mass * 2^k <= den  <=>  prob <= 2^-k
    while (order.size() >= 2) {
        auto first = order.begin();
        auto second = std::next(first);
        const BigInt merged = first->first + second->first;
        if (merged * pow2(k) > budget) break;
        Class a = std::move(classes.at(first->second));
        Class b = std::move(classes.at(second->second));
        classes.erase(a.label);
        classes.erase(b.label);
        order.erase(second);
        order.erase(order.begin());
        Class c{merged, std::min(a.label, b.label), std::move(a.members)};
        c.members.insert(c.members.end(), b.members.begin(), b.members.end());
        order.emplace(c.mass, c.label);
        classes.emplace(c.label, std::move(c));
    }
    if (classes.size() > (std::size_t{1} << (k + 1)))
        throw std::logic_error("entropy_smooth: more than 2^{k+1} classes survived merging");

    SmoothingMap s{d.n(), k, {}};
    std::uint64_t next = 0;
    for (const auto& [label, cls] : classes) {
        for (auto z : cls.members) s.table.emplace(z, next);
        ++next;
    }
    auto pushed = apply_function(d, [&](std::uint64_t z) { return s(z); }, k + 1);
    return {std::move(s), std::move(pushed)};
}

struct PolynomialSource {
    PolyMap map;
    int degree_bound = 0;

    PolynomialSource() = default;
    PolynomialSource(PolyMap p, int d) : map(std::move(p)), degree_bound(d) {
        if (map.degree() > degree_bound) throw precondition_error("polynomial source exceeds its declared degree");
    }
    explicit PolynomialSource(PolyMap p) : map(std::move(p)), degree_bound(map.degree()) {}

    DiscreteDistribution distribution() const { return distribution_of(map); }
};

/// k uniform good coordinates; every other coordinate is a polynomial of the
/// good ones.
struct NOBFSource {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::size_t> good_positions; // sorted
    std::vector<MultilinearPoly> bad_polys;   // over k variables, one per bad position in increasing order

    NOBFSource() = default;
    NOBFSource(std::size_t n_, std::vector<std::size_t> good, std::vector<MultilinearPoly> bad)
        : n(n_), k(good.size()), good_positions(std::move(good)), bad_polys(std::move(bad)) {
        std::sort(good_positions.begin(), good_positions.end());
        if (std::adjacent_find(good_positions.begin(), good_positions.end()) != good_positions.end())
            throw precondition_error("duplicate good position");
        if (!good_positions.empty() && good_positions.back() >= n)
            throw dimension_error("good position out of range");
        if (bad_polys.size() != n - k) throw dimension_error("need one bad polynomial per bad position");
        for (const auto& p : bad_polys)
            if (p.num_vars() != k) throw dimension_error("bad polynomials must be over the k good variables");
    }

    /// Good coordinates first, then the bad ones.
    static NOBFSource with_default_layout(std::size_t k, std::vector<MultilinearPoly> bad) {
        std::vector<std::size_t> good(k);
        for (std::size_t i = 0; i < k; ++i) good[i] = i;
        const std::size_t n = k + bad.size();
        return NOBFSource(n, std::move(good), std::move(bad));
    }

    std::vector<std::size_t> bad_positions() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0, g = 0; i < n; ++i) {
            if (g < good_positions.size() && good_positions[g] == i) ++g;
            else out.push_back(i);
        }
        return out;
    }

    int degree() const {
        int d = 1;
        for (const auto& p : bad_polys) d = std::max(d, p.degree());
        return d;
    }

    PolyMap to_polymap() const {
        std::vector<MultilinearPoly> outs(n, MultilinearPoly(k));
        for (std::size_t j = 0; j < k; ++j) outs[good_positions[j]] = MultilinearPoly::variable(k, j);
        const auto bad = bad_positions();
        for (std::size_t i = 0; i < bad.size(); ++i) outs[bad[i]] = bad_polys[i];
        return PolyMap(k, std::move(outs));
    }

    /// Polynomials x_bad - p_i(x_good) over F_2^n; their common zeros are
    /// exactly the support.
    PolyMap variety_witness() const {
        const auto bad = bad_positions();
        std::vector<MultilinearPoly> outs;
        for (std::size_t i = 0; i < bad.size(); ++i) {
            std::vector<Monomial> monos{Monomial{1} << bad[i]};
            for (auto mono : bad_polys[i].monomials()) {
                Monomial lifted = 0;
                for (auto v : monomial_vars(mono)) lifted |= Monomial{1} << good_positions[v];
                monos.push_back(lifted);
            }
            outs.emplace_back(n, std::move(monos));
        }
        return PolyMap(n, std::move(outs));
    }

    /// Support as sorted outcome words.
    std::vector<std::uint64_t> support() const {
        const TruthTable tt = truth_table(to_polymap());
        std::vector<std::uint64_t> s = tt.values;
        std::sort(s.begin(), s.end());
        return s;
    }
};

inline std::pair<PolynomialSource, PolyMap> nobf_source(const NOBFSource& x) {
    return {PolynomialSource(x.to_polymap()), x.variety_witness()};
}

inline std::pair<PolynomialSource, PolyMap> nobf_source(std::size_t n, std::vector<std::size_t> good_positions,
                                                        std::vector<MultilinearPoly> bad_polys) {
    return nobf_source(NOBFSource(n, std::move(good_positions), std::move(bad_polys)));
}

/// Exact mixture sum_i w_i D_i over the least common denominator.
inline DiscreteDistribution convex_mix(std::span<const std::pair<Rational, DiscreteDistribution>> parts) {
    if (parts.empty()) throw precondition_error("convex_mix: no parts");
    const std::size_t n = parts.front().second.n();
    Rational total = 0;
    std::map<std::uint64_t, Rational> prob;
    for (const auto& [w, dist] : parts) {
        if (w < 0) throw precondition_error("convex_mix: negative weight");
        if (dist.n() != n) throw dimension_error("convex_mix: widths differ");
        total += w;
        if (w == 0) continue;
        for (const auto& [z, c] : dist.counts()) prob[z] += w * Rational(c, dist.denominator());
    }
    if (total != 1) throw precondition_error("convex_mix: weights must sum to 1");
    BigInt den = 1;
    for (const auto& [z, p] : prob) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(p));
    DiscreteDistribution::Counts counts;
    for (const auto& [z, p] : prob) {
        const Rational scaled = p * den;
        counts.emplace(z, boost::multiprecision::numerator(scaled));
    }
    return {n, den, std::move(counts)};
}

inline DiscreteDistribution convex_mix(std::initializer_list<std::pair<Rational, DiscreteDistribution>> parts) {
    std::vector<std::pair<Rational, DiscreteDistribution>> v(parts);
    return convex_mix(std::span<const std::pair<Rational, DiscreteDistribution>>(v));
}

} // namespace f2ext
