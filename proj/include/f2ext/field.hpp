#pragma once

// GF(2^t) for 1 <= t <= 32. Elements are coefficient words (bit i is the
// coefficient of z^i); the vector representation phi is the identity on this
// layout, so phi(x + y) = phi(x) + phi(y) holds by construction.

#include <array>
#include <bit>
#include <cstdint>
#include <mutex>

#include "f2ext/error.hpp"
#include "f2ext/polymap.hpp"

namespace f2ext {

inline constexpr unsigned max_field_degree = 32;

namespace detail {

inline std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    for (; b; b &= b - 1) r ^= a << std::countr_zero(b);
    return r;
}

inline int poly_degree(std::uint64_t p) { return 63 - std::countl_zero(p); }

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
    const int dm = poly_degree(m);
    for (int d = poly_degree(a); a && d >= dm; d = poly_degree(a)) a ^= m << (d - dm);
    return a;
}

inline bool is_irreducible(std::uint64_t p) {
    const int deg = poly_degree(p);
    if (deg <= 1) return deg == 1;
    // Trial division by every polynomial of degree 1..deg/2.
    for (std::uint64_t q = 2; poly_degree(q) <= deg / 2; ++q)
        if (poly_mod(p, q) == 0) return false;
    return true;
}

} // namespace detail

/// Lexicographically smallest monic irreducible polynomial of degree t, as a
/// coefficient word including the z^t bit. t = 1 gives z.
inline std::uint64_t irreducible_poly(unsigned t) {
    if (t < 1 || t > max_field_degree) throw precondition_error("irreducible_poly: t must be in [1, 32]");
    static std::array<std::uint64_t, max_field_degree + 1> cache{};
    static std::array<std::once_flag, max_field_degree + 1> once;
    std::call_once(once[t], [t] {
        const std::uint64_t top = std::uint64_t{1} << t;
        for (std::uint64_t low = 0; low < top; ++low) {
            if (detail::is_irreducible(top | low)) {
                cache[t] = top | low;
                return;
            }
        }
    });
    return cache[t];
}

struct FieldElem {
    unsigned t = 1;
    std::uint64_t rep = 0;

    FieldElem() = default;
    FieldElem(unsigned t_, std::uint64_t rep_) : t(t_), rep(rep_) {
        if (t < 1 || t > max_field_degree) throw precondition_error("field degree must be in [1, 32]");
        if (rep >> t) throw precondition_error("field element has bits at or above the degree");
    }

    static FieldElem zero(unsigned t) { return {t, 0}; }
    static FieldElem one(unsigned t) { return {t, 1}; }

    F2Vector phi() const { return F2Vector(t, rep); }
    static FieldElem from_phi(const F2Vector& v) { return {static_cast<unsigned>(v.size()), v.word()}; }

    friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

inline FieldElem field_add(const FieldElem& a, const FieldElem& b) {
    if (a.t != b.t) throw dimension_error("field degree mismatch");
    return {a.t, a.rep ^ b.rep};
}

inline FieldElem field_mul(const FieldElem& a, const FieldElem& b) {
    if (a.t != b.t) throw dimension_error("field degree mismatch");
    return {a.t, detail::poly_mod(detail::clmul(a.rep, b.rep), irreducible_poly(a.t))};
}

inline FieldElem field_pow(FieldElem a, std::uint64_t e) {
    FieldElem r = FieldElem::one(a.t);
    for (; e; e >>= 1) {
        if (e & 1U) r = field_mul(r, a);
        a = field_mul(a, a);
    }
    return r;
}

/// Raw-word multiply in GF(2^t) with a precomputed modulus, for hot loops.
inline std::uint64_t field_mul_raw(std::uint64_t a, std::uint64_t b, std::uint64_t modulus) {
    return detail::poly_mod(detail::clmul(a, b), modulus);
}

/// The multilinear map q on F_2^t with phi(x^e) = q(phi(x)), obtained by
/// evaluating x^e on the whole field and interpolating each output bit.
inline PolyMap monomial_map_to_multilinear(std::uint64_t e, unsigned t) {
    if (t < 1 || t > 16) throw precondition_error("monomial_map_to_multilinear: t must be in [1, 16]");
    if (e < 1) throw precondition_error("monomial_map_to_multilinear: exponent must be positive");
    std::vector<std::uint64_t> v(std::size_t{1} << t);
    for (std::uint64_t x = 0; x < v.size(); ++x) v[x] = field_pow(FieldElem(t, x), e).rep;
    PolyMap q = interpolate(TruthTable(t, t, std::move(v)));
    if (q.degree() > std::popcount(e)) throw std::logic_error("monomial map degree exceeds the exponent weight");
    return q;
}

} // namespace f2ext
