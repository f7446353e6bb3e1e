#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

#include "aqc/common.hpp"
#include "aqc/field.hpp"

namespace aqc {

// Dense matrix over F_q; entries are packed F_q indexes. The field context
// travels separately (operations take a Gf), so the data stays plain and
// comparable.
struct MatFq {
    int rows = 0;
    int cols = 0;
    std::vector<int> a;  // row-major

    MatFq() = default;
    MatFq(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    int at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    const int* row(int i) const { return a.data() + static_cast<size_t>(i) * cols; }
    int* row(int i) { return a.data() + static_cast<size_t>(i) * cols; }

    static MatFq identity(int n);
    MatFq transpose() const;
    // Rows of this stacked over rows of other (equal column counts).
    MatFq stacked(const MatFq& other) const;

    bool operator==(const MatFq&) const = default;
};

// In-place reduced row echelon form; returns the rank. Pivot columns strictly
// increasing, pivots 1, zeros above and below each pivot.
int rref_in_place(const Gf& F, MatFq& M);
MatFq rref(const Gf& F, MatFq M);
int rank(const Gf& F, MatFq M);

// Matrix product over F_q.
MatFq matmul(const Gf& F, const MatFq& A, const MatFq& B);

// An F_q-subspace of F_q^m in canonical form: the basis matrix is the RREF
// of any spanning set, zero rows dropped. Equality of Subspace values is
// exactly equality of subspaces.
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(int ambient) { return Subspace(ambient, MatFq(0, ambient)); }
    static Subspace full(int ambient);
    // Canonicalizes the given spanning rows.
    static Subspace from_span(const Gf& F, MatFq rows);
    // Accepts rows already known to be in RREF with no zero rows (used by
    // enumeration, which generates canonical matrices directly).
    static Subspace from_rref(MatFq rows);

    int ambient() const { return ambient_; }
    int dim() const { return basis_.rows; }
    const MatFq& basis() const { return basis_; }

    bool operator==(const Subspace&) const = default;
    // Lexicographic on (ambient, dim, basis entries); gives multisets a
    // stable canonical order.
    std::strong_ordering operator<=>(const Subspace& o) const;

private:
    Subspace(int ambient, MatFq basis) : ambient_(ambient), basis_(std::move(basis)) {}
    int ambient_ = 0;
    MatFq basis_;
};

// Solution space of M v = 0 inside F_q^cols.
Subspace kernel(const Gf& F, const MatFq& M);

Subspace sum(const Gf& F, const Subspace& A, const Subspace& B);
// Computed as (A^perp + B^perp)^perp, reusing perp and sum.
Subspace intersect(const Gf& F, const Subspace& A, const Subspace& B);
// Orthogonal complement under the standard dot product.
Subspace perp(const Gf& F, const Subspace& A);

bool contains(const Gf& F, const Subspace& A, const std::vector<int>& v);
bool contains_subspace(const Gf& F, const Subspace& A, const Subspace& B);  // B <= A

int dot(const Gf& F, const std::vector<int>& u, const std::vector<int>& v);

// --- enumeration ---------------------------------------------------------
//
// All streams are duplicate-free, complete, and enumerate in a fixed order:
// base-q counter order with the lowest-index coordinate as the least
// significant digit.

// All q^dim(A) vectors of A (coefficient counter over basis rows).
class ElementStream {
public:
    ElementStream(const Gf& F, const Subspace& A);
    bool next(std::vector<int>& out);
    long long count() const { return total_; }

private:
    const Gf* F_;
    const Subspace* A_;
    long long idx_ = 0, total_;
};

// Canonical representatives of the 1-dim subspaces of F_q^m: vectors whose
// lowest-index nonzero coordinate is 1. (q^m - 1)/(q - 1) of them.
class PointStream {
public:
    PointStream(const Gf& F, int m, const EnumCaps& caps = {});
    bool next(std::vector<int>& out);
    long long count() const { return points_; }

private:
    const Gf* F_;
    int m_;
    long long idx_, total_, points_;
};

// All t-dimensional subspaces of F_q^m, one canonical RREF matrix each.
// Order: pivot-column sets lexicographically, then free entries in counter
// order. Throws cap_exceeded if the Gaussian binomial exceeds the cap.
class SubspaceStream {
public:
    SubspaceStream(const Gf& F, int m, int t, const EnumCaps& caps = {});
    bool next(Subspace& out);
    long long count() const { return total_; }

private:
    bool advance_pivots();
    void rebuild_free();
    const Gf* F_;
    int m_, t_;
    std::vector<int> pivots_;
    std::vector<std::pair<int, int>> free_pos_;  // (row, col) of free entries
    long long free_idx_ = 0, free_total_ = 1;
    bool done_ = false;
    long long total_;
};

// Number of t-dim subspaces of F_q^m; throws std::overflow_error if the
// value does not fit in long long.
long long gaussian_binomial(long long q, int m, int t);

// Canonical projective representative: v scaled so its first nonzero
// coordinate is 1. Zero vector maps to itself.
std::vector<int> projective_rep(const Gf& F, std::vector<int> v);

// Splits [0, total) into roughly equal chunks and runs fn(begin, end) on
// each, using `workers` threads (sequential when workers <= 1). Used by the
// exhaustive scans; reductions on the caller side must be commutative.
void parallel_ranges(long long total, int workers,
                     const std::function<void(long long, long long, int)>& fn);

}  // namespace aqc
