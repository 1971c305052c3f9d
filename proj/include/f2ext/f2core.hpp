#pragma once

// Exact linear algebra over GF(2): bit-packed vectors, matrices, affine
// subspaces in canonical form.
//
// Bit convention: bit i of an F2Vector is the coefficient of variable i, and
// the truth-table index of x is sum_i x_i * 2^i, i.e. the packed word itself.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "f2ext/error.hpp"

namespace f2ext {

inline constexpr std::size_t max_width = 64;

inline constexpr std::uint64_t low_mask(std::size_t len) {
    return len >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
}

inline int parity(std::uint64_t w) { return std::popcount(w) & 1; }

class F2Vector {
public:
    F2Vector() = default;
    explicit F2Vector(std::size_t len, std::uint64_t word = 0) : bits_(word & low_mask(len)), len_(len) {
        if (len > max_width) throw size_error("F2Vector width exceeds 64 bits");
    }

    static F2Vector zero(std::size_t len) { return F2Vector(len); }
    static F2Vector unit(std::size_t len, std::size_t i) { return F2Vector(len, std::uint64_t{1} << i); }

    /// Parses "b0b1b2..." (index 0 first).
    static F2Vector parse(std::string_view s) {
        F2Vector v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') v.bits_ |= std::uint64_t{1} << i;
            else if (s[i] != '0') throw parse_error("bit string may contain only 0 and 1: " + std::string(s));
        }
        return v;
    }

    std::size_t size() const { return len_; }
    std::uint64_t word() const { return bits_; }
    bool get(std::size_t i) const { return (bits_ >> i) & 1U; }
    void set(std::size_t i, bool v) {
        if (v) bits_ |= std::uint64_t{1} << i;
        else bits_ &= ~(std::uint64_t{1} << i);
    }
    bool is_zero() const { return bits_ == 0; }
    int weight() const { return std::popcount(bits_); }
    int dot(const F2Vector& o) const { return parity(bits_ & o.bits_); }

    F2Vector& operator^=(const F2Vector& o) {
        check_same(o);
        bits_ ^= o.bits_;
        return *this;
    }
    friend F2Vector operator^(F2Vector a, const F2Vector& b) { return a ^= b; }
    friend F2Vector operator+(F2Vector a, const F2Vector& b) { return a ^= b; }

    std::string to_string() const {
        std::string s(len_, '0');
        for (std::size_t i = 0; i < len_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    friend bool operator==(const F2Vector&, const F2Vector&) = default;
    // Ordering is by width, then by truth-table index.
    friend auto operator<=>(const F2Vector& a, const F2Vector& b) {
        if (auto c = a.len_ <=> b.len_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }

private:
    void check_same(const F2Vector& o) const {
        if (o.len_ != len_) throw dimension_error("F2Vector width mismatch");
    }

    std::uint64_t bits_ = 0;
    std::size_t len_ = 0;
};

class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, F2Vector(cols)) {}
    F2Matrix(std::size_t cols, std::vector<F2Vector> rows) : cols_(cols), rows_(std::move(rows)) {
        for (const auto& r : rows_)
            if (r.size() != cols_) throw dimension_error("F2Matrix rows must share the column count");
    }

    static F2Matrix identity(std::size_t n) {
        F2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.rows_[i].set(i, true);
        return m;
    }
    static F2Matrix parse(std::size_t cols, const std::vector<std::string>& rows) {
        std::vector<F2Vector> r;
        r.reserve(rows.size());
        for (const auto& s : rows) r.push_back(F2Vector::parse(s));
        return F2Matrix(cols, std::move(r));
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const F2Vector& row(std::size_t i) const { return rows_[i]; }
    F2Vector& row(std::size_t i) { return rows_[i]; }
    std::span<const F2Vector> row_data() const { return rows_; }
    bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
    void set(std::size_t i, std::size_t j, bool v) { rows_[i].set(j, v); }

    F2Vector apply(const F2Vector& x) const {
        if (x.size() != cols_) throw dimension_error("matrix-vector width mismatch");
        return F2Vector(rows(), apply_word(x.word()));
    }
    std::uint64_t apply_word(std::uint64_t x) const {
        std::uint64_t out = 0;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            out |= static_cast<std::uint64_t>(parity(rows_[i].word() & x)) << i;
        return out;
    }

    /// Row-stacks `other` below this matrix.
    F2Matrix stacked(const F2Matrix& other) const {
        if (other.cols_ != cols_ && other.rows() != 0 && rows() != 0)
            throw dimension_error("stacked matrices must share the column count");
        std::vector<F2Vector> r = rows_;
        r.insert(r.end(), other.rows_.begin(), other.rows_.end());
        return F2Matrix(rows() ? cols_ : other.cols_, std::move(r));
    }

    std::vector<std::string> to_strings() const {
        std::vector<std::string> out;
        out.reserve(rows_.size());
        for (const auto& r : rows_) out.push_back(r.to_string());
        return out;
    }

    friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<F2Vector> rows_;
};

namespace detail {

// In-place reduced row echelon form on packed words; pivot of a row is its
// lowest set bit. Returns pivot column per surviving row; zero rows are
// dropped. `rhs`, when given, is carried along (bit per row).
struct Echelon {
    std::vector<std::uint64_t> rows;
    std::vector<std::uint8_t> rhs;
    std::vector<int> pivots;
    bool consistent = true;
};

inline Echelon echelon(std::vector<std::uint64_t> rows, std::vector<std::uint8_t> rhs, std::size_t cols) {
    const bool with_rhs = !rhs.empty();
    if (!with_rhs) rhs.assign(rows.size(), 0);
    Echelon e;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        const std::uint64_t bit = std::uint64_t{1} << c;
        std::size_t p = r;
        while (p < rows.size() && !(rows[p] & bit)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        std::swap(rhs[p], rhs[r]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r && (rows[i] & bit)) {
                rows[i] ^= rows[r];
                rhs[i] ^= rhs[r];
            }
        }
        e.pivots.push_back(static_cast<int>(c));
        ++r;
    }
    for (std::size_t i = r; i < rows.size(); ++i)
        if (rhs[i]) e.consistent = false;
    rows.resize(r);
    rhs.resize(r);
    e.rows = std::move(rows);
    if (with_rhs) e.rhs = std::move(rhs);
    return e;
}

inline std::vector<std::uint64_t> words_of(std::span<const F2Vector> vs) {
    std::vector<std::uint64_t> w;
    w.reserve(vs.size());
    for (const auto& v : vs) w.push_back(v.word());
    return w;
}

} // namespace detail

inline std::size_t rank(const F2Matrix& m) {
    return detail::echelon(detail::words_of(m.row_data()), {}, m.cols()).pivots.size();
}

inline std::size_t rank_of(std::span<const F2Vector> vectors, std::size_t width) {
    return detail::echelon(detail::words_of(vectors), {}, width).pivots.size();
}

struct AffineSolution {
    F2Vector particular;
    std::vector<F2Vector> kernel_basis;
};

/// Solves Mx = b. Returns one solution and a basis of ker(M), or nullopt when
/// the system is inconsistent.
inline std::optional<AffineSolution> solve_affine(const F2Matrix& m, const F2Vector& b) {
    if (b.size() != m.rows()) throw dimension_error("solve_affine: |b| must equal rows(M)");
    std::vector<std::uint8_t> rhs(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rhs[i] = b.get(i);
    // Empty rhs means "no rhs" inside echelon(); a 0-row system has none anyway.
    auto e = detail::echelon(detail::words_of(m.row_data()), rhs, m.cols());
    if (!e.consistent) return std::nullopt;
    if (e.rhs.empty()) e.rhs.assign(e.rows.size(), 0);

    const std::size_t n = m.cols();
    std::uint64_t pivot_mask = 0;
    F2Vector x(n);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        pivot_mask |= std::uint64_t{1} << e.pivots[i];
        if (e.rhs[i]) x.set(static_cast<std::size_t>(e.pivots[i]), true);
    }
    AffineSolution sol{x, {}};
    for (std::size_t f = 0; f < n; ++f) {
        if (pivot_mask >> f & 1U) continue;
        F2Vector k = F2Vector::unit(n, f);
        for (std::size_t i = 0; i < e.pivots.size(); ++i)
            if (e.rows[i] >> f & 1U) k.set(static_cast<std::size_t>(e.pivots[i]), true);
        sol.kernel_basis.push_back(k);
    }
    return sol;
}

/// Random matrix of rank `rows` by rejection sampling. Deterministic given the
/// generator state. Only raw 64-bit draws are used so results are portable.
template <class Rng>
F2Matrix sample_full_rank(std::size_t rows, std::size_t cols, Rng& rng, int max_attempts = 1000) {
    if (rows > cols) throw precondition_error("sample_full_rank: rows must not exceed cols");
    if (cols > max_width) throw size_error("sample_full_rank: too many columns");
    if (rows == 0) return F2Matrix(0, cols);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        F2Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) m.row(i) = F2Vector(cols, static_cast<std::uint64_t>(rng()));
        if (rank(m) == rows) return m;
    }
    throw search_failure("sample_full_rank: attempt cap reached without a full-rank matrix");
}

/// offset + span(basis), stored in canonical form: basis in reduced echelon
/// form (pivot = lowest set bit, increasing pivots) and offset reduced so that
/// it is zero on every pivot position. Equal point sets compare equal.
class AffineSubspace {
public:
    AffineSubspace() = default;

    /// Throws when `basis` is linearly dependent.
    AffineSubspace(std::size_t ambient, F2Vector offset, std::vector<F2Vector> basis)
        : ambient_(ambient), offset_(std::move(offset)) {
        check_widths(basis);
        const std::size_t want = basis.size();
        canonicalize(std::move(basis));
        if (basis_.size() != want) throw precondition_error("AffineSubspace basis must be linearly independent");
    }

    /// Accepts any spanning set (dependent generators are dropped).
    static AffineSubspace from_generators(std::size_t ambient, F2Vector offset, std::vector<F2Vector> gens) {
        AffineSubspace u;
        u.ambient_ = ambient;
        u.offset_ = std::move(offset);
        u.check_widths(gens);
        u.canonicalize(std::move(gens));
        return u;
    }

    static AffineSubspace whole(std::size_t n) {
        std::vector<F2Vector> b;
        for (std::size_t i = 0; i < n; ++i) b.push_back(F2Vector::unit(n, i));
        return AffineSubspace(n, F2Vector(n), std::move(b));
    }
    static AffineSubspace point(const F2Vector& p) { return AffineSubspace(p.size(), p, {}); }

    /// Smallest affine subspace containing all points (nonempty input).
    static AffineSubspace hull(std::span<const F2Vector> points) {
        if (points.empty()) throw precondition_error("affine hull of an empty set");
        std::vector<F2Vector> gens;
        for (std::size_t i = 1; i < points.size(); ++i) gens.push_back(points[i] ^ points[0]);
        return from_generators(points[0].size(), points[0], std::move(gens));
    }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    std::uint64_t size() const { return std::uint64_t{1} << basis_.size(); }
    const F2Vector& offset() const { return offset_; }
    const std::vector<F2Vector>& basis() const { return basis_; }

    /// Point indexed by the coordinates y (bit i of y selects basis i).
    F2Vector point_at(std::uint64_t y) const {
        std::uint64_t w = offset_.word();
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (y >> i & 1U) w ^= basis_[i].word();
        return F2Vector(ambient_, w);
    }

    std::vector<F2Vector> points() const {
        if (dim() > 26) throw size_error("affine subspace too large to enumerate");
        std::vector<F2Vector> out;
        out.reserve(size());
        for (std::uint64_t y = 0; y < size(); ++y) out.push_back(point_at(y));
        return out;
    }

    /// Reduces w modulo span(basis); zero iff w is in the span.
    std::uint64_t reduce(std::uint64_t w) const {
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (w >> pivots_[i] & 1U) w ^= basis_[i].word();
        return w;
    }

    friend bool operator==(const AffineSubspace& a, const AffineSubspace& b) {
        return a.ambient_ == b.ambient_ && a.offset_ == b.offset_ && a.basis_ == b.basis_;
    }

private:
    void check_widths(const std::vector<F2Vector>& vs) const {
        if (ambient_ > max_width) throw size_error("ambient dimension exceeds 64");
        if (offset_.size() != ambient_) throw dimension_error("offset width must equal the ambient dimension");
        for (const auto& v : vs)
            if (v.size() != ambient_) throw dimension_error("basis vector width must equal the ambient dimension");
    }

    void canonicalize(std::vector<F2Vector> gens) {
        auto e = detail::echelon(detail::words_of(gens), {}, ambient_);
        basis_.clear();
        pivots_.clear();
        for (std::size_t i = 0; i < e.rows.size(); ++i) {
            basis_.emplace_back(ambient_, e.rows[i]);
            pivots_.push_back(e.pivots[i]);
        }
        offset_ = F2Vector(ambient_, reduce(offset_.word()));
    }

    std::size_t ambient_ = 0;
    F2Vector offset_;
    std::vector<F2Vector> basis_;
    std::vector<int> pivots_;
};

inline bool subspace_contains(const AffineSubspace& u, const F2Vector& x) {
    if (x.size() != u.ambient()) throw dimension_error("subspace_contains: width mismatch");
    return u.reduce(x.word() ^ u.offset().word()) == 0;
}

/// Intersection of two affine subspaces, or nullopt when disjoint.
inline std::optional<AffineSubspace> subspace_intersect(const AffineSubspace& u, const AffineSubspace& v) {
    if (u.ambient() != v.ambient()) throw dimension_error("subspace_intersect: ambient mismatch");
    const std::size_t n = u.ambient();
    const std::size_t du = u.dim();
    const std::size_t cols = du + v.dim();
    if (cols > max_width) throw size_error("subspace_intersect: combined dimension exceeds 64");
    // Solve sum a_i u_i + sum b_j v_j = u0 + v0; rows are ambient coordinates.
    F2Matrix m(n, cols);
    for (std::size_t c = 0; c < du; ++c)
        for (std::size_t r = 0; r < n; ++r) m.set(r, c, u.basis()[c].get(r));
    for (std::size_t c = 0; c < v.dim(); ++c)
        for (std::size_t r = 0; r < n; ++r) m.set(r, du + c, v.basis()[c].get(r));
    auto sol = solve_affine(m, u.offset() ^ v.offset());
    if (!sol) return std::nullopt;
    auto image = [&](const F2Vector& coeffs) {
        std::uint64_t w = 0;
        for (std::size_t i = 0; i < du; ++i)
            if (coeffs.get(i)) w ^= u.basis()[i].word();
        return F2Vector(n, w);
    };
    std::vector<F2Vector> dirs;
    for (const auto& k : sol->kernel_basis) dirs.push_back(image(k));
    return AffineSubspace::from_generators(n, u.offset() ^ image(sol->particular), std::move(dirs));
}

/// Calls fn(basis) for every linear subspace of F_2^n of dimension s, each
/// once, as its canonical reduced-echelon basis. Stops early when fn returns
/// true; returns whether it stopped.
template <class Fn>
bool for_each_linear_subspace(std::size_t n, std::size_t s, Fn&& fn) {
    if (s > n) return false;
    std::vector<int> piv(s);
    std::vector<F2Vector> basis(s, F2Vector(n));
    // Recursive choice of pivot columns, then of free entries.
    auto fill = [&](auto&& self, std::size_t row) -> bool {
        if (row == s) return fn(std::as_const(basis));
        std::uint64_t pivmask = 0;
        for (std::size_t i = 0; i < s; ++i) pivmask |= std::uint64_t{1} << piv[i];
        // Free positions for this row: above its pivot and not a pivot column.
        std::vector<int> free;
        for (int c = piv[row] + 1; c < static_cast<int>(n); ++c)
            if (!(pivmask >> c & 1U)) free.push_back(c);
        const std::uint64_t combos = std::uint64_t{1} << free.size();
        for (std::uint64_t f = 0; f < combos; ++f) {
            std::uint64_t w = std::uint64_t{1} << piv[row];
            for (std::size_t j = 0; j < free.size(); ++j)
                if (f >> j & 1U) w |= std::uint64_t{1} << free[j];
            basis[row] = F2Vector(n, w);
            if (self(self, row + 1)) return true;
        }
        return false;
    };
    auto choose = [&](auto&& self, std::size_t i, int start) -> bool {
        if (i == s) return fill(fill, 0);
        for (int c = start; c <= static_cast<int>(n - (s - i)); ++c) {
            piv[i] = c;
            if (self(self, i + 1, c + 1)) return true;
        }
        return false;
    };
    return choose(choose, 0, 0);
}

} // namespace f2ext
