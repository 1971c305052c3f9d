#pragma once

// Input reduction: fix a full-rank linear image L(x) = b and write P(U_m) as
// the uniform mixture over b of the restrictions Q_b, each a polynomial map
// on ell_target inputs of no larger degree.

#include <cstdint>
#include <optional>
#include <vector>

#include "f2ext/error.hpp"
#include "f2ext/f2core.hpp"
#include "f2ext/parallel.hpp"
#include "f2ext/polymap.hpp"
#include "f2ext/rational.hpp"
#include "f2ext/sources.hpp"

namespace f2ext {

inline constexpr std::size_t max_reduction_vars = 24;

/// k + 4 + 3 * eps_log; the default eps = 2^-2k gives 7k + 4.
inline std::size_t reduction_target_length(std::size_t k, std::optional<std::size_t> eps_log = std::nullopt) {
    if (k < 1) throw precondition_error("reduction_target_length: k must be at least 1");
    return k + 4 + 3 * eps_log.value_or(2 * k);
}

/// The looser bound quoted for the reduced input length.
inline std::size_t reduction_stated_bound(std::size_t k) { return 11 * k; }

struct ReductionPart {
    Rational weight;
    PolyMap q;
    F2Vector b;

    friend bool operator==(const ReductionPart&, const ReductionPart&) = default;
};

struct ReductionResult {
    F2Matrix l;
    std::vector<ReductionPart> parts;    // good fixings only
    std::vector<ReductionPart> residual; // the remaining fixings
    Rational residual_weight = 0;
    Rational good_fraction = 0;
    std::size_t attempts_used = 0;

    /// sum_b weight_b * dist(Q_b) over every fixing; equals dist(P).
    DiscreteDistribution mixture() const {
        std::vector<std::pair<Rational, DiscreteDistribution>> all;
        for (const auto* group : {&parts, &residual})
            for (const auto& p : *group) all.emplace_back(p.weight, distribution_of(p.q));
        return convex_mix(all);
    }
};

/// Raised when no sampled L reaches the good fraction; carries the best one.
struct reduction_failure : search_failure {
    F2Matrix best_l;
    Rational best_good_fraction;
    reduction_failure(F2Matrix l, Rational g)
        : search_failure("reduce_source: no restriction reached good fraction 1 - 2^-k (best " + to_string(g) + ")"),
          best_l(std::move(l)), best_good_fraction(std::move(g)) {}
};

namespace detail {

inline ReductionResult decompose(const PolyMap& p, const F2Matrix& l, std::size_t k, unsigned workers) {
    const std::size_t rows = l.rows();
    const std::uint64_t fixings = std::uint64_t{1} << rows;
    const Rational threshold(static_cast<long long>(k) - 1);
    std::vector<std::optional<PolyMap>> qs(fixings);
    std::vector<std::uint8_t> good(fixings, 0);
    const unsigned w = std::max(1U, workers);
    run_workers(w, [&](unsigned id) {
        for (std::uint64_t b = id; b < fixings; b += w) {
            qs[b] = restrict_affine(p, l, F2Vector(rows, b));
            if (!qs[b]) throw std::logic_error("full-rank restriction produced an empty fixing");
            good[b] = has_min_entropy_at_least(distribution_of(*qs[b]), threshold) ? 1 : 0;
        }
    });
    ReductionResult res;
    res.l = l;
    const Rational weight(BigInt(1), pow2(rows));
    std::uint64_t good_count = 0;
    for (std::uint64_t b = 0; b < fixings; ++b) {
        ReductionPart part{weight, std::move(*qs[b]), F2Vector(rows, b)};
        if (good[b]) {
            ++good_count;
            res.parts.push_back(std::move(part));
        } else {
            res.residual_weight += weight;
            res.residual.push_back(std::move(part));
        }
    }
    res.good_fraction = Rational(BigInt(good_count), pow2(rows));
    return res;
}

} // namespace detail

/// Samples L until at least a 1 - 2^-k fraction of the fixings Q_b keep
/// min-entropy k - 1. Throws reduction_failure after `attempts` tries.
template <class Rng>
ReductionResult reduce_source(const PolyMap& p, std::size_t k, std::size_t ell_target, Rng& rng, int attempts = 64,
                              unsigned workers = 1) {
    const std::size_t m = p.num_vars();
    if (m > max_reduction_vars) throw size_error("reduce_source: m exceeds 24");
    if (k < 1) throw precondition_error("reduce_source: k must be at least 1");
    if (!has_min_entropy_at_least(distribution_of(p), Rational(static_cast<long long>(k))))
        throw precondition_error("reduce_source: source has min-entropy below k");
    if (m <= ell_target) {
        ReductionResult res;
        res.l = F2Matrix(0, m);
        res.parts.push_back({Rational(1), p, F2Vector(0)});
        res.good_fraction = 1;
        return res;
    }
    const Rational need = 1 - Rational(BigInt(1), pow2(k));
    std::optional<ReductionResult> best;
    for (int a = 1; a <= attempts; ++a) {
        F2Matrix l = sample_full_rank(m - ell_target, m, rng);
        ReductionResult r = detail::decompose(p, l, k, workers);
        r.attempts_used = static_cast<std::size_t>(a);
        if (r.good_fraction >= need) return r;
        if (!best || r.good_fraction > best->good_fraction) best = std::move(r);
    }
    throw reduction_failure(best ? best->l : F2Matrix(m - ell_target, m), best ? best->good_fraction : Rational(0));
}

namespace detail {

/// counts[z * 2^rows + b] = #{x : f(x) = z, Lx = b}.
inline std::vector<std::uint64_t> joint_counts(const PolyMap& f, const F2Matrix& l) {
    const std::size_t m = f.num_vars();
    if (m > max_reduction_vars) throw size_error("white-box check: m exceeds 24");
    if (l.cols() != m) throw dimension_error("white-box check: cols(L) must equal m");
    if (f.num_outputs() + l.rows() > 30) throw size_error("white-box check: joint outcome space too large");
    const TruthTable tt = truth_table(f);
    std::vector<std::uint64_t> counts(std::size_t{1} << (f.num_outputs() + l.rows()), 0);
    for (std::uint64_t x = 0; x < tt.values.size(); ++x) ++counts[(tt.values[x] << l.rows()) | l.apply_word(x)];
    return counts;
}

} // namespace detail

/// Exact distance between (f(U), L(U)) and (f(U), U') with U' independent
/// and uniform on rows(L) bits.
inline Rational verify_prg(const PolyMap& f, const F2Matrix& l) {
    const auto counts = detail::joint_counts(f, l);
    const std::size_t rows = l.rows();
    const std::uint64_t cells = std::uint64_t{1} << rows;
    BigInt sum = 0;
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << f.num_outputs()); ++z) {
        std::uint64_t cz = 0;
        for (std::uint64_t b = 0; b < cells; ++b) cz += counts[z * cells + b];
        for (std::uint64_t b = 0; b < cells; ++b) {
            const std::uint64_t scaled = counts[z * cells + b] << rows;
            sum += scaled > cz ? scaled - cz : cz - scaled;
        }
    }
    return Rational(sum, pow2(f.num_vars() + rows + 1));
}

/// Pr over b ~ L(U) that H_inf(f(U) | L(U) = b) >= k - 1.
inline Rational verify_peg(const PolyMap& f, const F2Matrix& l, const Rational& k) {
    const auto counts = detail::joint_counts(f, l);
    const std::size_t rows = l.rows();
    const std::uint64_t cells = std::uint64_t{1} << rows;
    const std::uint64_t outs = std::uint64_t{1} << f.num_outputs();
    BigInt hit = 0;
    for (std::uint64_t b = 0; b < cells; ++b) {
        DiscreteDistribution::Counts c;
        std::uint64_t total = 0;
        for (std::uint64_t z = 0; z < outs; ++z) {
            if (const auto n = counts[z * cells + b]) {
                c.emplace(z, BigInt(n));
                total += n;
            }
        }
        if (total == 0) continue;
        if (has_min_entropy_at_least(DiscreteDistribution(f.num_outputs(), BigInt(total), std::move(c)), k - 1))
            hit += total;
    }
    return Rational(hit, pow2(f.num_vars()));
}

} // namespace f2ext
