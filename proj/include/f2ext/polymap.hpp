#pragma once

// Multilinear polynomials and polynomial maps over F_2.
//
// A monomial is a bitmask of its variables (0 is the constant 1). Polynomials
// keep a sorted, duplicate-free monomial list, so equality is structural.
// Truth tables and interpolation share one subset-sum XOR transform: over
// F_2 the zeta and Moebius transforms coincide.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "f2ext/error.hpp"
#include "f2ext/f2core.hpp"

namespace f2ext {

inline constexpr std::size_t max_enum_vars = 26;

using Monomial = std::uint64_t;

inline std::vector<std::size_t> monomial_vars(Monomial mono) {
    std::vector<std::size_t> v;
    for (; mono; mono &= mono - 1) v.push_back(static_cast<std::size_t>(std::countr_zero(mono)));
    return v;
}

class MultilinearPoly {
public:
    MultilinearPoly() = default;
    explicit MultilinearPoly(std::size_t m) : m_(m) { check_m(); }
    MultilinearPoly(std::size_t m, std::vector<Monomial> monos) : m_(m) {
        check_m();
        // Duplicates cancel in pairs.
        std::sort(monos.begin(), monos.end());
        for (std::size_t i = 0; i < monos.size();) {
            std::size_t j = i;
            while (j < monos.size() && monos[j] == monos[i]) ++j;
            if ((j - i) % 2 == 1) {
                if (m_ < 64 && (monos[i] >> m_) != 0) throw dimension_error("monomial uses a variable index >= m");
                monos_.push_back(monos[i]);
            }
            i = j;
        }
    }

    static MultilinearPoly constant(std::size_t m, bool one) {
        return one ? MultilinearPoly(m, {0}) : MultilinearPoly(m);
    }
    static MultilinearPoly variable(std::size_t m, std::size_t i) {
        return MultilinearPoly(m, {Monomial{1} << i});
    }

    std::size_t num_vars() const { return m_; }
    const std::vector<Monomial>& monomials() const { return monos_; }
    bool is_zero() const { return monos_.empty(); }

    /// Zero polynomial has degree 0.
    int degree() const {
        int d = 0;
        for (auto mono : monos_) d = std::max(d, std::popcount(mono));
        return d;
    }

    bool eval_word(std::uint64_t x) const {
        bool r = false;
        for (auto mono : monos_) r ^= (x & mono) == mono;
        return r;
    }
    bool eval(const F2Vector& x) const {
        if (x.size() != m_) throw dimension_error("eval: |x| must equal m");
        return eval_word(x.word());
    }

    MultilinearPoly& operator+=(const MultilinearPoly& o) {
        if (o.m_ != m_) throw dimension_error("polynomial variable counts differ");
        std::vector<Monomial> out;
        std::set_symmetric_difference(monos_.begin(), monos_.end(), o.monos_.begin(), o.monos_.end(),
                                      std::back_inserter(out));
        monos_ = std::move(out);
        return *this;
    }
    friend MultilinearPoly operator+(MultilinearPoly a, const MultilinearPoly& b) { return a += b; }

    friend bool operator==(const MultilinearPoly&, const MultilinearPoly&) = default;

private:
    void check_m() const {
        if (m_ > max_width) throw size_error("polynomials support at most 64 variables");
    }

    std::size_t m_ = 0;
    std::vector<Monomial> monos_;
};

inline bool eval(const MultilinearPoly& p, const F2Vector& x) { return p.eval(x); }

class PolyMap {
public:
    PolyMap() = default;
    PolyMap(std::size_t m, std::vector<MultilinearPoly> outputs) : m_(m), outputs_(std::move(outputs)) {
        if (outputs_.size() > max_width) throw size_error("polynomial maps support at most 64 outputs");
        for (const auto& p : outputs_)
            if (p.num_vars() != m_) throw dimension_error("all outputs of a PolyMap must share m");
    }

    static PolyMap identity(std::size_t m) {
        std::vector<MultilinearPoly> out;
        for (std::size_t i = 0; i < m; ++i) out.push_back(MultilinearPoly::variable(m, i));
        return PolyMap(m, std::move(out));
    }

    std::size_t num_vars() const { return m_; }
    std::size_t num_outputs() const { return outputs_.size(); }
    const std::vector<MultilinearPoly>& outputs() const { return outputs_; }
    const MultilinearPoly& output(std::size_t i) const { return outputs_[i]; }

    int degree() const {
        int d = 0;
        for (const auto& p : outputs_) d = std::max(d, p.degree());
        return d;
    }
    std::size_t monomial_count() const {
        std::size_t c = 0;
        for (const auto& p : outputs_) c += p.monomials().size();
        return c;
    }

    std::uint64_t eval_word(std::uint64_t x) const {
        std::uint64_t out = 0;
        for (std::size_t j = 0; j < outputs_.size(); ++j)
            out |= static_cast<std::uint64_t>(outputs_[j].eval_word(x)) << j;
        return out;
    }

    /// Adds the constant vector c to the outputs.
    PolyMap shifted(const F2Vector& c) const {
        if (c.size() != outputs_.size()) throw dimension_error("shift width must equal the output count");
        PolyMap r = *this;
        for (std::size_t j = 0; j < outputs_.size(); ++j)
            if (c.get(j)) r.outputs_[j] += MultilinearPoly::constant(m_, true);
        return r;
    }

    friend bool operator==(const PolyMap&, const PolyMap&) = default;

private:
    std::size_t m_ = 0;
    std::vector<MultilinearPoly> outputs_;
};

inline F2Vector eval_map(const PolyMap& p, const F2Vector& x) {
    if (x.size() != p.num_vars()) throw dimension_error("eval_map: |x| must equal m");
    return F2Vector(p.num_outputs(), p.eval_word(x.word()));
}

struct TruthTable {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<std::uint64_t> values; // values[idx(x)] packs the n output bits

    TruthTable() = default;
    TruthTable(std::size_t m_, std::size_t n_, std::vector<std::uint64_t> v) : m(m_), n(n_), values(std::move(v)) {
        if (m > max_enum_vars) throw size_error("truth table input count exceeds the enumeration cap");
        if (n > max_width) throw size_error("truth table output width exceeds 64");
        if (values.size() != (std::size_t{1} << m)) throw dimension_error("truth table must have exactly 2^m entries");
        for (auto& w : values) w &= low_mask(n);
    }

    F2Vector at(const F2Vector& x) const { return F2Vector(n, values.at(x.word())); }
    std::uint64_t operator[](std::uint64_t x) const { return values[x]; }

    friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

namespace detail {

// a[S] <- XOR over T subset of S of a[T], applied to every bit lane at once.
inline void subset_xor_transform(std::vector<std::uint64_t>& a, std::size_t m) {
    const std::size_t size = std::size_t{1} << m;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t s = 0; s < size; ++s)
            if (s & bit) a[s] ^= a[s ^ bit];
    }
}

inline void check_enum_cap(std::size_t m) {
    if (m > max_enum_vars) throw size_error("enumeration cap exceeded: m must be at most 26");
}

} // namespace detail

/// Direct evaluation at every point; the reference path.
inline TruthTable truth_table_direct(const PolyMap& p) {
    detail::check_enum_cap(p.num_vars());
    std::vector<std::uint64_t> v(std::size_t{1} << p.num_vars());
    for (std::size_t x = 0; x < v.size(); ++x) v[x] = p.eval_word(x);
    return TruthTable(p.num_vars(), p.num_outputs(), std::move(v));
}

inline TruthTable truth_table(const PolyMap& p) {
    const std::size_t m = p.num_vars();
    detail::check_enum_cap(m);
    // Sparse maps on few variables: evaluating is cheaper than the m*2^m transform.
    if (p.monomial_count() < m) return truth_table_direct(p);
    std::vector<std::uint64_t> a(std::size_t{1} << m, 0);
    for (std::size_t j = 0; j < p.num_outputs(); ++j)
        for (auto mono : p.output(j).monomials()) a[mono] ^= std::uint64_t{1} << j;
    detail::subset_xor_transform(a, m);
    return TruthTable(m, p.num_outputs(), std::move(a));
}

inline PolyMap interpolate(const TruthTable& tt) {
    std::vector<std::uint64_t> a = tt.values;
    detail::subset_xor_transform(a, tt.m);
    std::vector<std::vector<Monomial>> monos(tt.n);
    for (std::size_t s = 0; s < a.size(); ++s)
        for (std::uint64_t w = a[s]; w; w &= w - 1) monos[static_cast<std::size_t>(std::countr_zero(w))].push_back(s);
    std::vector<MultilinearPoly> outs;
    outs.reserve(tt.n);
    for (auto& ms : monos) outs.emplace_back(tt.m, std::move(ms));
    return PolyMap(tt.m, std::move(outs));
}

/// x -> p(x) + p(x + a), computed symbolically: each monomial S contributes
/// x^(S\T) for every nonempty T within S and supp(a).
inline MultilinearPoly directional_derivative(const MultilinearPoly& p, const F2Vector& a) {
    if (a.size() != p.num_vars()) throw dimension_error("directional_derivative: |a| must equal m");
    std::vector<Monomial> out;
    for (auto mono : p.monomials()) {
        const std::uint64_t hit = mono & a.word();
        // Enumerate nonempty subsets T of hit.
        for (std::uint64_t t = hit; t; t = (t - 1) & hit) out.push_back(mono & ~t);
    }
    MultilinearPoly d(p.num_vars(), std::move(out));
    if (p.degree() >= 1 && d.degree() > p.degree() - 1)
        throw std::logic_error("directional derivative failed to drop the degree");
    return d;
}

inline PolyMap directional_derivative(const PolyMap& p, const F2Vector& a) {
    std::vector<MultilinearPoly> outs;
    for (const auto& q : p.outputs()) outs.push_back(directional_derivative(q, a));
    return PolyMap(p.num_vars(), std::move(outs));
}

/// Q(y) = P(x0 + K y) where {x : Lx = b} = x0 + span(K). nullopt when the
/// system is inconsistent.
inline std::optional<PolyMap> restrict_affine(const PolyMap& p, const F2Matrix& l, const F2Vector& b) {
    if (l.cols() != p.num_vars() && l.rows() != 0) throw dimension_error("restrict_affine: cols(L) must equal m");
    if (l.rows() == 0) return p;
    auto sol = solve_affine(l, b);
    if (!sol) return std::nullopt;
    const std::size_t ell = sol->kernel_basis.size();
    detail::check_enum_cap(ell);
    std::vector<std::uint64_t> v(std::size_t{1} << ell);
    // Gray-code walk over the coset.
    std::uint64_t x = sol->particular.word();
    v[0] = p.eval_word(x);
    for (std::size_t i = 1; i < v.size(); ++i) {
        const auto flip = static_cast<std::size_t>(std::countr_zero(i));
        x ^= sol->kernel_basis[flip].word();
        v[i ^ (i >> 1)] = p.eval_word(x);
    }
    PolyMap q = interpolate(TruthTable(ell, p.num_outputs(), std::move(v)));
    if (q.degree() > p.degree()) throw std::logic_error("restriction increased the degree");
    return q;
}

/// p restricted to U, as a polynomial in dim(U) coordinates.
inline MultilinearPoly restrict_to_subspace(const MultilinearPoly& p, const AffineSubspace& u) {
    if (u.ambient() != p.num_vars()) throw dimension_error("restrict_to_subspace: ambient must equal m");
    detail::check_enum_cap(u.dim());
    std::vector<std::uint64_t> v(u.size());
    for (std::uint64_t y = 0; y < v.size(); ++y) v[y] = p.eval_word(u.point_at(y).word());
    PolyMap q = interpolate(TruthTable(u.dim(), 1, std::move(v)));
    if (q.degree() > p.degree()) throw std::logic_error("restriction increased the degree");
    return q.output(0);
}

/// All monomials of degree <= d over m variables, in increasing mask order.
inline std::vector<Monomial> monomials_up_to(std::size_t m, std::size_t d) {
    std::vector<Monomial> out;
    auto rec = [&](auto&& self, std::size_t start, std::size_t left, Monomial acc) -> void {
        out.push_back(acc);
        if (left == 0) return;
        for (std::size_t i = start; i < m; ++i) self(self, i + 1, left - 1, acc | (Monomial{1} << i));
    };
    rec(rec, 0, std::min(d, m), 0);
    std::sort(out.begin(), out.end());
    return out;
}

/// Each monomial of degree <= d is included with probability 1/2, one raw
/// generator bit per monomial in canonical order.
template <class Rng>
MultilinearPoly random_poly(std::size_t m, std::size_t d, Rng& rng) {
    if (d > m) throw precondition_error("random_poly: d must not exceed m");
    auto all = monomials_up_to(m, d);
    std::vector<Monomial> chosen;
    std::uint64_t bits = 0;
    int left = 0;
    for (auto mono : all) {
        if (left == 0) {
            bits = static_cast<std::uint64_t>(rng());
            left = 64;
        }
        if (bits & 1U) chosen.push_back(mono);
        bits >>= 1;
        --left;
    }
    return MultilinearPoly(m, std::move(chosen));
}

template <class Rng>
PolyMap random_map(std::size_t m, std::size_t n, std::size_t d, Rng& rng) {
    std::vector<MultilinearPoly> outs;
    for (std::size_t i = 0; i < n; ++i) outs.push_back(random_poly(m, d, rng));
    return PolyMap(m, std::move(outs));
}

/// x -> P(Gx + c) for a square or rectangular matrix G with cols = number of
/// new variables, rows = m.
inline PolyMap compose_affine(const PolyMap& p, const F2Matrix& g, const F2Vector& c) {
    if (g.rows() != p.num_vars() || c.size() != p.num_vars()) throw dimension_error("compose_affine: shape mismatch");
    detail::check_enum_cap(g.cols());
    std::vector<std::uint64_t> v(std::size_t{1} << g.cols());
    for (std::uint64_t x = 0; x < v.size(); ++x) v[x] = p.eval_word(g.apply_word(x) ^ c.word());
    return interpolate(TruthTable(g.cols(), p.num_outputs(), std::move(v)));
}

} // namespace f2ext
