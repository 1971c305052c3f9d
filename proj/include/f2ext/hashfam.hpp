#pragma once

// t-wise independent functions {0,1}^n_in -> {0,1}^r_out: a degree-(t-1)
// polynomial over GF(2^w), w = max(n_in, r_out), evaluated at the zero-padded
// input and truncated to the low r_out bits. Coefficient a_i occupies seed
// bits [i*w, (i+1)*w).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "f2ext/error.hpp"
#include "f2ext/f2core.hpp"
#include "f2ext/field.hpp"
#include "f2ext/sources.hpp"

namespace f2ext {

struct HashFamily {
    std::size_t n_in = 0;
    std::size_t r_out = 0;
    std::size_t t = 1;
    std::size_t w = 1;

    HashFamily() = default;
    HashFamily(std::size_t n_in_, std::size_t r_out_, std::size_t t_)
        : n_in(n_in_), r_out(r_out_), t(t_), w(std::max<std::size_t>({n_in_, r_out_, 1})) {
        if (t < 1) throw precondition_error("t-wise family needs t >= 1");
        if (w > max_field_degree) throw size_error("family field width exceeds 32");
        if (t * w > 64) throw size_error("family seed exceeds 64 bits");
    }

    std::size_t seed_bits() const { return t * w; }
    /// Number of members; 2^64 is reported as 0 (never enumerable anyway).
    std::uint64_t member_count() const { return seed_bits() >= 64 ? 0 : std::uint64_t{1} << seed_bits(); }

    friend bool operator==(const HashFamily&, const HashFamily&) = default;
};

struct FamilyMember {
    HashFamily family;
    std::uint64_t seed = 0;

    FamilyMember() = default;
    FamilyMember(HashFamily f, std::uint64_t s) : family(f), seed(s) {
        if (f.seed_bits() < 64 && (s >> f.seed_bits()) != 0) throw precondition_error("seed out of range");
    }

    std::uint64_t coefficient(std::size_t i) const { return (seed >> (i * family.w)) & low_mask(family.w); }

    std::uint64_t eval_word(std::uint64_t x) const {
        const std::uint64_t mod = irreducible_poly(static_cast<unsigned>(family.w));
        std::uint64_t acc = 0;
        for (std::size_t i = family.t; i-- > 0;) acc = field_mul_raw(acc, x, mod) ^ coefficient(i);
        return acc & low_mask(family.r_out);
    }

    /// The member's truth table on all 2^n_in inputs.
    TruthTable table() const {
        detail::check_enum_cap(family.n_in);
        const std::uint64_t mod = irreducible_poly(static_cast<unsigned>(family.w));
        std::vector<std::uint64_t> coeff(family.t);
        for (std::size_t i = 0; i < family.t; ++i) coeff[i] = coefficient(i);
        std::vector<std::uint64_t> v(std::size_t{1} << family.n_in);
        for (std::uint64_t x = 0; x < v.size(); ++x) {
            std::uint64_t acc = 0;
            for (std::size_t i = family.t; i-- > 0;) acc = field_mul_raw(acc, x, mod) ^ coeff[i];
            v[x] = acc & low_mask(family.r_out);
        }
        return TruthTable(family.n_in, family.r_out, std::move(v));
    }

    friend bool operator==(const FamilyMember&, const FamilyMember&) = default;
};

inline F2Vector family_eval(const FamilyMember& f, const F2Vector& x) {
    if (x.size() != f.family.n_in) throw dimension_error("family_eval: |x| must equal n_in");
    return F2Vector(f.family.r_out, f.eval_word(x.word()));
}

inline DiscreteDistribution apply_function(const DiscreteDistribution& d, const FamilyMember& f) {
    if (f.family.n_in != d.n()) throw dimension_error("apply_function: member input width must equal the outcome width");
    return apply_function(d, [&](std::uint64_t z) { return f.eval_word(z); }, f.family.r_out);
}

/// Over all seeds, is the joint output on `points` exactly uniform?
inline bool verify_t_wise(const HashFamily& fam, std::span<const F2Vector> points) {
    if (points.size() > fam.t) throw precondition_error("verify_t_wise: more points than t");
    if (fam.seed_bits() > 24) throw size_error("verify_t_wise: family too large to enumerate");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != fam.n_in) throw dimension_error("verify_t_wise: point width mismatch");
        for (std::size_t j = 0; j < i; ++j)
            if (points[i] == points[j]) throw precondition_error("verify_t_wise: points must be distinct");
    }
    const std::size_t tuple_bits = points.size() * fam.r_out;
    if (tuple_bits > fam.seed_bits()) return false;
    std::map<std::uint64_t, std::uint64_t> hist;
    for (std::uint64_t s = 0; s < fam.member_count(); ++s) {
        const FamilyMember f(fam, s);
        std::uint64_t tuple = 0;
        for (std::size_t i = 0; i < points.size(); ++i) tuple |= f.eval_word(points[i].word()) << (i * fam.r_out);
        ++hist[tuple];
    }
    const std::uint64_t cells = std::uint64_t{1} << tuple_bits;
    if (hist.size() != cells) return false;
    const std::uint64_t expect = fam.member_count() / cells;
    return std::all_of(hist.begin(), hist.end(), [&](const auto& kv) { return kv.second == expect; });
}

inline F2Vector linear_seeded_extract(const F2Vector& x, const F2Matrix& l) { return l.apply(x); }

/// Do all m x n matrices form a 2-universal family? Exhaustive, m, n <= 4.
inline bool verify_universality(std::size_t m, std::size_t n) {
    if (m > 4 || n > 4 || m == 0 || n == 0) throw precondition_error("verify_universality: 1 <= m, n <= 4");
    const std::uint64_t mats = std::uint64_t{1} << (m * n);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        for (std::uint64_t y = x + 1; y < (std::uint64_t{1} << n); ++y) {
            std::uint64_t collisions = 0;
            for (std::uint64_t code = 0; code < mats; ++code) {
                F2Matrix l(m, n);
                for (std::size_t i = 0; i < m; ++i) l.row(i) = F2Vector(n, code >> (i * n));
                if (l.apply_word(x) == l.apply_word(y)) ++collisions;
            }
            // Pr[Lx = Ly] <= 2^-m  <=>  collisions * 2^m <= mats.
            if ((collisions << m) > mats) return false;
        }
    }
    return true;
}

/// The independence parameter ceil(2 log2(k + class_size)) for a class of
/// 2^class_size_log2 sources.
inline std::size_t recommended_t(double k, double class_size_log2) {
    // log2(k + 2^L) = L + log2(1 + k 2^-L)
    const double l = class_size_log2 + std::log2(1.0 + k * std::exp2(-class_size_log2));
    return static_cast<std::size_t>(std::ceil(2.0 * l - 1e-12));
}

} // namespace f2ext
