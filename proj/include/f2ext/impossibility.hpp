#pragma once

// Lower-bound machinery for NOBF sources: Sidon supports, sumset and affine
// subspace containment searches, the bilinear structure of quadratic maps on
// sumsets, and bicliques. All searches are exact below their caps and refuse
// above them; the one estimate (sampled mixture distance) says so.

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "f2ext/error.hpp"
#include "f2ext/f2core.hpp"
#include "f2ext/field.hpp"
#include "f2ext/parallel.hpp"
#include "f2ext/polymap.hpp"
#include "f2ext/rational.hpp"
#include "f2ext/sources.hpp"

namespace f2ext {

inline constexpr std::size_t max_support_size = std::size_t{1} << 12;

/// A nonempty set of n-bit words, kept sorted.
class SupportSet {
public:
    SupportSet() = default;
    SupportSet(std::size_t n, std::vector<std::uint64_t> elems) : n_(n), elems_(std::move(elems)) {
        if (n_ > max_width) throw size_error("support width exceeds 64");
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
        if (elems_.empty()) throw precondition_error("support set must be nonempty");
        if (n_ < 64 && (elems_.back() >> n_) != 0) throw dimension_error("support element wider than n");
    }
    static SupportSet of(std::span<const F2Vector> vs) {
        if (vs.empty()) throw precondition_error("support set must be nonempty");
        std::vector<std::uint64_t> w;
        for (const auto& v : vs) {
            if (v.size() != vs.front().size()) throw dimension_error("support elements differ in width");
            w.push_back(v.word());
        }
        return SupportSet(vs.front().size(), std::move(w));
    }
    static SupportSet whole(std::size_t n) {
        detail::check_enum_cap(n);
        std::vector<std::uint64_t> w(std::size_t{1} << n);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = i;
        return SupportSet(n, std::move(w));
    }
    static SupportSet of(const AffineSubspace& u) { return of(u.points()); }

    std::size_t n() const { return n_; }
    std::size_t size() const { return elems_.size(); }
    const std::vector<std::uint64_t>& elems() const { return elems_; }
    bool contains(std::uint64_t w) const { return std::binary_search(elems_.begin(), elems_.end(), w); }

    friend bool operator==(const SupportSet&, const SupportSet&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> elems_;
};

inline SupportSet support_of(const NOBFSource& x) { return SupportSet(x.n, x.support()); }

namespace detail {

/// O(1) membership through a bitmap when 2^n is small, else binary search.
class Membership {
public:
    explicit Membership(const SupportSet& s) : set_(&s) {
        if (s.n() <= 24) {
            bits_.assign(std::size_t{1} << s.n(), 0);
            for (auto w : s.elems()) bits_[w] = 1;
        }
    }
    bool operator()(std::uint64_t w) const {
        if (!bits_.empty()) return (set_->n() >= 64 || (w >> set_->n()) == 0) && bits_[w];
        return set_->contains(w);
    }

private:
    const SupportSet* set_;
    std::vector<std::uint8_t> bits_;
};

inline void check_support_cap(const SupportSet& s, const char* what) {
    if (s.size() > max_support_size) throw size_error(std::string(what) + ": set larger than 2^12");
}

} // namespace detail

/// y -> (y, y^3) over GF(2^t), good coordinates first.
inline NOBFSource sidon_source(std::size_t t) {
    if (t < 1 || t > 12) throw precondition_error("sidon_source: t must be in [1, 12]");
    PolyMap q = monomial_map_to_multilinear(3, static_cast<unsigned>(t));
    return NOBFSource::with_default_layout(t, q.outputs());
}

/// A quadruple with a + b = c + d over two different unordered pairs.
inline std::optional<std::array<std::uint64_t, 4>> sidon_violation(const SupportSet& s) {
    detail::check_support_cap(s, "is_sidon");
    const auto& e = s.elems();
    std::vector<std::uint64_t> sums;
    sums.reserve(e.size() * (e.size() - 1) / 2);
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) sums.push_back(e[i] ^ e[j]);
    std::sort(sums.begin(), sums.end());
    const auto dup = std::adjacent_find(sums.begin(), sums.end());
    if (dup == sums.end()) return std::nullopt;
    // Two distinct pairs share this sum; the first two in canonical order.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (std::size_t i = 0; i < e.size() && pairs.size() < 2; ++i)
        for (std::size_t j = i + 1; j < e.size() && pairs.size() < 2; ++j)
            if ((e[i] ^ e[j]) == *dup) pairs.emplace_back(e[i], e[j]);
    return std::array<std::uint64_t, 4>{pairs[0].first, pairs[0].second, pairs[1].first, pairs[1].second};
}

inline bool is_sidon(const SupportSet& s) { return !sidon_violation(s); }

struct SumsetWitness {
    std::vector<std::uint64_t> a;
    std::vector<std::uint64_t> b;
    friend bool operator==(const SumsetWitness&, const SumsetWitness&) = default;
};

inline bool sumset_contained(const SupportSet& t, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    for (auto x : a)
        for (auto y : b)
            if (!t.contains(x ^ y)) return false;
    return true;
}

/// A + B inside T with |A| = sa, |B| = sb. Translating both sets by the same
/// vector keeps A + B, so A is normalized to contain 0 and hence B lies in T.
/// B is grown in increasing order while tracking the candidates
/// C = {a : a + B within T}; A is then the sa smallest candidates.
inline std::optional<SumsetWitness> find_sumset_in_set(const SupportSet& t, std::size_t sa, std::size_t sb,
                                                       unsigned workers = 1) {
    if (sa < 1 || sb < 1 || sa > 4 || sb > 4) throw precondition_error("find_sumset_in_set: 1 <= sA, sB <= 4");
    detail::check_support_cap(t, "find_sumset_in_set");
    const detail::Membership in(t);
    const auto& e = t.elems();

    auto probe = [&](std::uint64_t i0) -> std::optional<SumsetWitness> {
        std::vector<std::uint64_t> b{e[i0]};
        std::optional<SumsetWitness> found;
        auto grow = [&](auto&& self, std::size_t next, const std::vector<std::uint64_t>& cand) -> bool {
            if (cand.size() < sa) return false;
            if (b.size() == sb) {
                found = SumsetWitness{std::vector<std::uint64_t>(cand.begin(), cand.begin() + sa), b};
                return true;
            }
            for (std::size_t j = next; j < e.size(); ++j) {
                std::vector<std::uint64_t> narrowed;
                for (auto c : cand)
                    if (in(c ^ e[j])) narrowed.push_back(c);
                b.push_back(e[j]);
                if (self(self, j + 1, narrowed)) return true;
                b.pop_back();
            }
            return false;
        };
        // Candidates for b0 alone: b0 + T (sorted).
        std::vector<std::uint64_t> cand;
        cand.reserve(e.size());
        for (auto x : e) cand.push_back(x ^ e[i0]);
        std::sort(cand.begin(), cand.end());
        grow(grow, i0 + 1, cand);
        return found;
    };
    auto hit = detail::find_first<SumsetWitness>(e.size(), workers, probe);
    if (!hit) return std::nullopt;
    if (!sumset_contained(t, hit->second.a, hit->second.b)) throw std::logic_error("sumset witness failed re-verification");
    return hit->second;
}

class BipartiteGraph {
public:
    static constexpr std::size_t max_side = 256;

    BipartiteGraph(std::size_t left, std::size_t right) : left_(left), right_(right), adj_(left) {
        if (left > max_side || right > max_side) throw size_error("bipartite graph sides are capped at 256");
    }
    BipartiteGraph(std::size_t left, std::size_t right, const std::set<std::pair<std::size_t, std::size_t>>& edges)
        : BipartiteGraph(left, right) {
        for (auto [i, j] : edges) add_edge(i, j);
    }

    void add_edge(std::size_t i, std::size_t j) {
        if (i >= left_ || j >= right_) throw dimension_error("edge endpoint out of range");
        adj_[i].set(j);
    }
    bool has_edge(std::size_t i, std::size_t j) const { return adj_.at(i).test(j); }
    std::size_t left() const { return left_; }
    std::size_t right() const { return right_; }
    const std::bitset<max_side>& neighbors(std::size_t i) const { return adj_.at(i); }
    std::size_t edge_count() const {
        std::size_t c = 0;
        for (const auto& row : adj_) c += row.count();
        return c;
    }
    std::set<std::pair<std::size_t, std::size_t>> edges() const {
        std::set<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < left_; ++i)
            for (std::size_t j = 0; j < right_; ++j)
                if (adj_[i].test(j)) out.emplace(i, j);
        return out;
    }
    BipartiteGraph transposed() const {
        BipartiteGraph g(right_, left_);
        for (std::size_t i = 0; i < left_; ++i)
            for (std::size_t j = 0; j < right_; ++j)
                if (adj_[i].test(j)) g.add_edge(j, i);
        return g;
    }

private:
    std::size_t left_, right_;
    std::vector<std::bitset<max_side>> adj_;
};

struct Biclique {
    std::vector<std::size_t> rows; // left vertices
    std::vector<std::size_t> cols; // right vertices
    friend bool operator==(const Biclique&, const Biclique&) = default;
};

/// A K_{s,s}, lexicographically first over s-subsets of the smaller side.
inline std::optional<Biclique> find_biclique(const BipartiteGraph& g, std::size_t s) {
    if (s < 1 || s > 4) throw precondition_error("find_biclique: s must be in [1, 4]");
    const bool swap = g.right() < g.left();
    const BipartiteGraph h = swap ? g.transposed() : g;
    std::vector<std::size_t> pick;
    std::optional<Biclique> out;
    auto rec = [&](auto&& self, std::size_t start, const std::bitset<BipartiteGraph::max_side>& common) -> bool {
        if (common.count() < s) return false;
        if (pick.size() == s) {
            Biclique b{pick, {}};
            for (std::size_t j = 0; j < h.right() && b.cols.size() < s; ++j)
                if (common.test(j)) b.cols.push_back(j);
            if (swap) std::swap(b.rows, b.cols);
            out = std::move(b);
            return true;
        }
        for (std::size_t i = start; i < h.left(); ++i) {
            pick.push_back(i);
            if (self(self, i + 1, common & h.neighbors(i))) return true;
            pick.pop_back();
        }
        return false;
    };
    std::bitset<BipartiteGraph::max_side> all;
    for (std::size_t j = 0; j < h.right(); ++j) all.set(j);
    rec(rec, 0, all);
    if (out) {
        for (auto i : out->rows)
            for (auto j : out->cols)
                if (!g.has_edge(i, j)) throw std::logic_error("biclique witness failed re-verification");
    }
    return out;
}

/// Edge bound above which an n x n bipartite graph must contain K_{t,t}.
inline double znam_bound(double n, double t) {
    if (n < 1 || t < 1) throw precondition_error("znam_bound: n, t >= 1");
    return std::pow(t - 1, 1.0 / t) * std::pow(n, 2.0 - 1.0 / t) + 0.5 * (t - 1) * n;
}

/// Pr over independent uniform r in R, s in S that r + s lies in T.
inline Rational sumset_hit_probability(const SupportSet& t, const SupportSet& r, const SupportSet& s) {
    if (t.n() != r.n() || t.n() != s.n()) throw dimension_error("sumset_hit_probability: widths differ");
    const detail::Membership in(t);
    std::uint64_t hits = 0;
    for (auto x : r.elems())
        for (auto y : s.elems()) hits += in(x ^ y) ? 1 : 0;
    return Rational(BigInt(hits), BigInt(r.size()) * BigInt(s.size()));
}

struct AffineInSet {
    std::size_t dim = 0;
    AffineSubspace witness;
};

/// The largest affine subspace (dimension at most cap_dim) inside T. For each
/// u in T, a DFS extends a linear subspace W within T + u by directions v in
/// increasing order, tracking the points x with x + W inside T + u.
inline AffineInSet largest_affine_in_set(const SupportSet& t, std::size_t cap_dim) {
    if (cap_dim > 4) throw precondition_error("largest_affine_in_set: cap_dim must be at most 4");
    detail::check_support_cap(t, "largest_affine_in_set");
    const detail::Membership in(t);
    AffineInSet best{0, AffineSubspace::point(F2Vector(t.n(), t.elems().front()))};
    const std::size_t cap = std::min(cap_dim, t.n());
    std::vector<F2Vector> dirs;
    for (auto u : t.elems()) {
        if (best.dim == cap) break;
        std::vector<std::uint64_t> c; // T + u, sorted; contains 0
        for (auto x : t.elems()) c.push_back(x ^ u);
        std::sort(c.begin(), c.end());
        auto dfs = [&](auto&& self, const std::vector<std::uint64_t>& cw, std::uint64_t last) -> bool {
            if (dirs.size() > best.dim) best = {dirs.size(), AffineSubspace(t.n(), F2Vector(t.n(), u), dirs)};
            if (dirs.size() == cap) return true;
            // Every extension of W lies inside cw.
            if (cw.size() < (std::size_t{1} << (best.dim + 1))) return false;
            const AffineSubspace w = AffineSubspace::from_generators(t.n(), F2Vector(t.n()), dirs);
            for (auto v : cw) {
                if (v <= last || w.reduce(v) == 0) continue;
                std::vector<std::uint64_t> next;
                for (auto x : cw)
                    if (std::binary_search(cw.begin(), cw.end(), x ^ v)) next.push_back(x);
                dirs.emplace_back(t.n(), v);
                const bool done = self(self, next, v);
                dirs.pop_back();
                if (done) return true;
            }
            return false;
        };
        dfs(dfs, c, 0);
    }
    for (const auto& p : best.witness.points())
        if (!in(p.word())) throw std::logic_error("affine witness failed re-verification");
    return best;
}

namespace detail {

/// Bilinear parts of a quadratic map: rows[i][a] is the word of b with
/// beta_i(e_a, e_b) = 1, where beta(x, y) = P(x + y) + P(x) + P(y) + P(0).
inline std::vector<std::vector<std::uint64_t>> bilinear_forms(const PolyMap& p) {
    if (p.degree() > 2) throw precondition_error("bilinear form needs a map of degree at most 2");
    const std::size_t m = p.num_vars();
    std::vector<std::vector<std::uint64_t>> rows(p.num_outputs(), std::vector<std::uint64_t>(m, 0));
    for (std::size_t i = 0; i < p.num_outputs(); ++i)
        for (auto mono : p.output(i).monomials()) {
            if (std::popcount(mono) != 2) continue;
            const int a = std::countr_zero(mono);
            const int b = 63 - std::countl_zero(mono);
            rows[i][a] |= std::uint64_t{1} << b;
            rows[i][b] |= std::uint64_t{1} << a;
        }
    return rows;
}

inline bool beta(const std::vector<std::uint64_t>& form, std::uint64_t x, std::uint64_t y) {
    std::uint64_t acc = 0;
    for (std::uint64_t w = x; w; w &= w - 1) acc ^= form[static_cast<std::size_t>(std::countr_zero(w))];
    return parity(acc & y) != 0;
}

} // namespace detail

/// An affine U of dimension s on which every output of P has degree <= 1.
inline std::optional<AffineSubspace> exists_linearizing_subspace(const PolyMap& p, std::size_t s) {
    const std::size_t m = p.num_vars();
    if (m > 10 || s > 3) throw precondition_error("exists_linearizing_subspace: m <= 10 and s <= 3");
    if (s > m) return std::nullopt;
    std::optional<AffineSubspace> out;
    if (p.degree() <= 2) {
        // The quadratic part of a restriction is beta on basis pairs, whatever
        // the offset, so offset 0 is canonical.
        const auto forms = detail::bilinear_forms(p);
        for_each_linear_subspace(m, s, [&](const std::vector<F2Vector>& basis) {
            for (const auto& f : forms)
                for (std::size_t a = 0; a < s; ++a)
                    for (std::size_t b = a + 1; b < s; ++b)
                        if (detail::beta(f, basis[a].word(), basis[b].word())) return false;
            out = AffineSubspace(m, F2Vector(m), basis);
            return true;
        });
        return out;
    }
    for_each_linear_subspace(m, s, [&](const std::vector<F2Vector>& basis) {
        const AffineSubspace lin(m, F2Vector(m), basis);
        for (std::uint64_t off = 0; off < (std::uint64_t{1} << m); ++off) {
            if (lin.reduce(off) != off) continue; // one offset per coset
            const AffineSubspace u(m, F2Vector(m, off), basis);
            bool ok = true;
            for (const auto& q : p.outputs())
                if (restrict_to_subspace(q, u).degree() > 1) {
                    ok = false;
                    break;
                }
            if (ok) {
                out = u;
                return true;
            }
        }
        return false;
    });
    return out;
}

namespace detail {

/// S_a = {z : P'(z) + P'(z + a) = P'(a)} for P' = P + y; an affine subspace
/// because the derivative of a quadratic map is affine.
inline std::optional<AffineSubspace> relation_slice(const PolyMap& p, const F2Vector& y, std::uint64_t a) {
    const std::size_t m = p.num_vars();
    const std::size_t n = p.num_outputs();
    auto f = [&](std::uint64_t z) { return p.eval_word(z) ^ p.eval_word(z ^ a); };
    const std::uint64_t f0 = f(0);
    F2Matrix mat(n, m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint64_t col = f(std::uint64_t{1} << i) ^ f0;
        for (std::size_t r = 0; r < n; ++r) mat.set(r, i, col >> r & 1U);
    }
    const std::uint64_t rhs = p.eval_word(a) ^ y.word() ^ f0;
    auto sol = solve_affine(mat, F2Vector(n, rhs));
    if (!sol) return std::nullopt;
    return AffineSubspace::from_generators(m, sol->particular, sol->kernel_basis);
}

inline AffineSubspace intersect_slices(const PolyMap& p, const F2Vector& y, const AffineSubspace& over) {
    std::optional<AffineSubspace> acc = AffineSubspace::whole(p.num_vars());
    for (std::uint64_t i = 0; i < over.size(); ++i) {
        auto s = relation_slice(p, y, over.point_at(i).word());
        if (s) acc = subspace_intersect(*acc, *s);
        if (!s || !acc) throw std::logic_error("structure fixpoint lost its seed set");
    }
    return *acc;
}

} // namespace detail

struct SubspacePair {
    AffineSubspace u;
    AffineSubspace v;
    friend bool operator==(const SubspacePair&, const SubspacePair&) = default;
};

/// Given P(a) + P(b) = P(a + b) + y on A x B, affine U containing A and V
/// containing B with the same relation on all of U x V.
inline SubspacePair sumset_structure_affine(const PolyMap& p, const F2Vector& y, const SupportSet& a,
                                            const SupportSet& b) {
    const std::size_t m = p.num_vars();
    if (m > 16) throw size_error("sumset_structure_affine: m exceeds 16");
    if (p.degree() > 2) throw precondition_error("sumset_structure_affine: map must have degree at most 2");
    if (y.size() != p.num_outputs()) throw dimension_error("sumset_structure_affine: |y| must equal the output count");
    if (a.n() != m || b.n() != m) throw dimension_error("sumset_structure_affine: A, B must live in F_2^m");
    for (auto x : a.elems())
        for (auto z : b.elems())
            if ((p.eval_word(x) ^ p.eval_word(z)) != (p.eval_word(x ^ z) ^ y.word()))
                throw precondition_error("sumset_structure_affine: relation fails at a=" + F2Vector(m, x).to_string() +
                                         " b=" + F2Vector(m, z).to_string());
    std::vector<F2Vector> av;
    for (auto x : a.elems()) av.emplace_back(m, x);
    AffineSubspace c = AffineSubspace::hull(av);
    AffineSubspace d = detail::intersect_slices(p, y, c);
    for (;;) {
        AffineSubspace c2 = detail::intersect_slices(p, y, d);
        AffineSubspace d2 = detail::intersect_slices(p, y, c2);
        if (c2 == c && d2 == d) break;
        c = std::move(c2);
        d = std::move(d2);
    }
    return {c, d};
}

/// A pair of dimension-r affine subspaces on which (u, v) -> P(u) + P(v) +
/// P(u + v) is constant. For quadratic P that map is beta(u, v) + P(0), and
/// constancy on (u0 + U') x (v0 + V') forces beta(U', V') = 0, which offset 0
/// then achieves; so it suffices to find linear U' with a beta-orthogonal
/// kernel of dimension >= r.
inline std::optional<SubspacePair> find_constant_sumset_pair(const PolyMap& p, std::size_t r) {
    const std::size_t m = p.num_vars();
    if (m > 8 || r > 3) throw precondition_error("certify_no_affine_sumset: m <= 8 and r <= 3");
    if (r > m) return std::nullopt;
    const auto forms = detail::bilinear_forms(p);
    std::optional<SubspacePair> out;
    for_each_linear_subspace(m, r, [&](const std::vector<F2Vector>& basis) {
        std::vector<F2Vector> rows;
        for (const auto& f : forms)
            for (const auto& x : basis) {
                std::uint64_t acc = 0;
                for (std::uint64_t w = x.word(); w; w &= w - 1) acc ^= f[static_cast<std::size_t>(std::countr_zero(w))];
                rows.emplace_back(m, acc);
            }
        auto sol = solve_affine(F2Matrix(m, rows), F2Vector(rows.size()));
        if (!sol || sol->kernel_basis.size() < r) return false;
        const AffineSubspace ker = AffineSubspace::from_generators(m, F2Vector(m), sol->kernel_basis);
        std::vector<F2Vector> vb(ker.basis().begin(), ker.basis().begin() + static_cast<std::ptrdiff_t>(r));
        out = SubspacePair{AffineSubspace(m, F2Vector(m), basis), AffineSubspace(m, F2Vector(m), std::move(vb))};
        return true;
    });
    return out;
}

/// True iff no pair of dimension-r affine subspaces carries a constant
/// P(u) + P(v) + P(u + v).
inline bool certify_no_affine_sumset(const PolyMap& p, std::size_t r) {
    if (r == 0) return false;
    return !find_constant_sumset_pair(p, r);
}

struct NOBFSumsetStructure {
    AffineSubspace u; // in the good-coordinate space
    AffineSubspace v;
    F2Vector a0; // good part of the shift applied to A
    F2Vector b0;
    F2Vector h; // q(a0 + b0): the shift of the relation for Q(x) = q(x + a0 + b0)
};

/// For a degree-2 NOBF source X with A + B inside its support: shift by
/// (a0, b0), project to the good coordinates, run the structure algorithm on
/// Q(x) = q(x + a0 + b0) and shift back. On U x V,
/// q(u + v) + q(u + b0) + q(a0 + v) + q(a0 + b0) = 0.
inline NOBFSumsetStructure sumset_witness_to_affine(const NOBFSource& x, const SupportSet& a, const SupportSet& b) {
    if (x.degree() > 2) throw precondition_error("sumset_witness_to_affine: source must have degree at most 2");
    if (a.n() != x.n || b.n() != x.n) throw dimension_error("sumset_witness_to_affine: A, B must live in F_2^n");
    const SupportSet supp = support_of(x);
    if (!sumset_contained(supp, a.elems(), b.elems()))
        throw precondition_error("sumset_witness_to_affine: A + B is not inside the support");
    const std::size_t k = x.k;
    auto good = [&](std::uint64_t w) {
        std::uint64_t g = 0;
        for (std::size_t j = 0; j < k; ++j) g |= (w >> x.good_positions[j] & 1U) << j;
        return g;
    };
    const std::uint64_t a0 = good(a.elems().front());
    const std::uint64_t b0 = good(b.elems().front());
    const PolyMap q(k, x.bad_polys);
    const PolyMap qs = compose_affine(q, F2Matrix::identity(k), F2Vector(k, a0 ^ b0));
    const F2Vector h(q.num_outputs(), q.eval_word(a0 ^ b0));
    std::vector<std::uint64_t> pa, pb;
    for (auto w : a.elems()) pa.push_back(good(w) ^ a0);
    for (auto w : b.elems()) pb.push_back(good(w) ^ b0);
    auto pair = sumset_structure_affine(qs, h, SupportSet(k, pa), SupportSet(k, pb));
    auto shift = [&](const AffineSubspace& s, std::uint64_t by) {
        return AffineSubspace(k, F2Vector(k, s.offset().word() ^ by), s.basis());
    };
    return {shift(pair.u, a0), shift(pair.v, b0), F2Vector(k, a0), F2Vector(k, b0), h};
}

enum class MixtureMode { exhaustive, sampled };

struct MixtureDistance {
    Rational delta;     // best hit probability found
    Rational bound;     // 1 - delta
    MixtureMode mode;
    bool exact = false; // false: delta is a lower bound, so bound is only an upper bound
    std::uint64_t samples = 0;
};

/// 1 - max Pr[r + s in T] over flat R, S of size 2^k. For a fixed R the best S
/// takes the 2^k points s with the most r + s in T, so only R is enumerated
/// (all of them in exhaustive mode, `samples` random ones otherwise).
template <class Rng>
MixtureDistance distance_from_sumset_mixtures(const SupportSet& t, std::size_t k, MixtureMode mode, Rng& rng,
                                              std::uint64_t samples = 1000) {
    const std::size_t n = t.n();
    if (k > n) throw precondition_error("distance_from_sumset_mixtures: k must not exceed n");
    if (mode == MixtureMode::exhaustive && (n > 4 || k > 2))
        throw precondition_error("distance_from_sumset_mixtures: exhaustive mode needs n <= 4 and k <= 2");
    if (mode == MixtureMode::sampled && n > 16) throw size_error("distance_from_sumset_mixtures: n exceeds 16");
    const detail::Membership in(t);
    const std::size_t space = std::size_t{1} << n;
    const std::size_t kk = std::size_t{1} << k;
    std::uint64_t best = 0;
    std::vector<std::uint64_t> cnt(space);
    auto score = [&](const std::vector<std::uint64_t>& r) {
        std::fill(cnt.begin(), cnt.end(), 0);
        for (std::uint64_t s = 0; s < space; ++s)
            for (auto x : r) cnt[s] += in(x ^ s) ? 1 : 0;
        std::partial_sort(cnt.begin(), cnt.begin() + static_cast<std::ptrdiff_t>(kk), cnt.end(), std::greater<>());
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < kk; ++i) sum += cnt[i];
        best = std::max(best, sum);
    };
    std::vector<std::uint64_t> r;
    MixtureDistance out{0, 0, mode, mode == MixtureMode::exhaustive, 0};
    if (mode == MixtureMode::exhaustive) {
        auto rec = [&](auto&& self, std::uint64_t start) -> void {
            if (r.size() == kk) {
                score(r);
                ++out.samples;
                return;
            }
            for (std::uint64_t x = start; x < space; ++x) {
                r.push_back(x);
                self(self, x + 1);
                r.pop_back();
            }
        };
        rec(rec, 0);
    } else {
        std::vector<std::uint64_t> all(space);
        for (std::size_t i = 0; i < space; ++i) all[i] = i;
        for (std::uint64_t i = 0; i < samples; ++i) {
            // Partial Fisher-Yates from raw draws keeps results portable.
            for (std::size_t j = 0; j < kk; ++j) {
                const std::size_t pick = j + static_cast<std::size_t>(static_cast<std::uint64_t>(rng()) % (space - j));
                std::swap(all[j], all[pick]);
            }
            r.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(kk));
            score(r);
        }
        out.samples = samples;
    }
    out.delta = Rational(BigInt(best), BigInt(kk) * BigInt(kk));
    out.bound = 1 - out.delta;
    return out;
}

inline const char* to_string(MixtureMode m) { return m == MixtureMode::exhaustive ? "exhaustive" : "sampled"; }

} // namespace f2ext
