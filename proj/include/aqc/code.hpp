#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aqc/common.hpp"
#include "aqc/field.hpp"
#include "aqc/linalg.hpp"
#include "aqc/packing.hpp"

namespace aqc {

// Value of the quasi-MDS length bound / dual dimension bound. `exact` is
// true when (q^h - 1)/(q^r0 - 1) divides evenly (iff r0 | h); otherwise the
// quotient was floored and both readings of the bound are reported through
// the remainder.
struct BoundValue {
    long long value = 0;
    bool exact = true;
    long long remainder = 0;
};

// n <= k - 2 + q^h + (q^h - 1)/(q^r0 - 1), for r = (k-1)h + r0, 1 <= r0 <= h.
BoundValue qmds_length_bound(int q, int h, int k, int r0);
// k <= q^h + (q^h - 1)/(q^r0 - 1) - 1 for dually QMDS fractional codes.
BoundValue dually_k_bound(int q, int h, int r0);

// Everything distance-related about a code, computed within caps.
struct CodeProfile {
    int d = 0;
    std::optional<int> d_perp;  // empty when the dual scan exceeds the cap
    int k = 0;
    bool qmds = false;
    bool is_long = false;
    bool faithful = false;
    bool dually_qmds = false;
};

// An additive code C <= F_{q^h}^n, F_q-linear of dimension r, held by an
// r x n generator matrix over F_{q^h}. The F_q expansion of the generator
// must have rank r; this is enforced at construction. Immutable; the lazy
// caches (expansion, block subspaces, distances) are value-idempotent.
class AdditiveCode {
public:
    AdditiveCode(FieldTower tower, int n, int r, std::vector<long long> gen);

    // Builds the code whose block perps are the given packing: block i of
    // the expansion is spanned (column-wise) by an RREF basis of
    // blocks[i]^perp, zero-padded to h columns. Requires every block to have
    // dimension >= r - h.
    static AdditiveCode from_packing(const FieldTower& tower, const Packing& t_packing);

    const FieldTower& tower() const { return tower_; }
    int n() const { return n_; }
    int r() const { return r_; }
    int h() const { return tower_.h(); }
    int q() const { return tower_.q(); }
    int k() const { return r_ == 0 ? 0 : (r_ + h() - 1) / h(); }
    bool integral() const { return r_ % h() == 0; }
    long long gen(int i, int j) const { return gen_[static_cast<size_t>(i) * n_ + j]; }

    // G~ over F_q, r x nh, block i carrying the basis coordinates of column
    // i of the generator.
    const MatFq& expanded_generator() const;

    const Subspace& column_space(int i) const;  // U_i, 0-based
    const Subspace& block_perp(int i) const;    // W_i = U_i^perp
    Packing t_packing() const;                  // T(C) = {W_i}
    std::vector<Subspace> x_multiset() const;   // X(C) = {U_i}

    // Weight through the block-membership formula: n - #{i : u in W_i}.
    int weight(const std::vector<int>& u) const;
    // Independent route: Hamming weight of u G computed over F_{q^h}.
    int codeword_weight(const std::vector<int>& u) const;
    std::vector<long long> encode(const std::vector<int>& u) const;

    // Exhaustive minimum distance over one representative per scalar class
    // (weights are scalar-invariant). Memoized. Throws cap_exceeded when
    // q^r > caps.vector_cap.
    int min_distance(const EnumCaps& caps = {}, int workers = 1) const;

    int singleton_defect(const EnumCaps& caps = {}, int workers = 1) const;
    bool is_qmds(const EnumCaps& caps = {}, int workers = 1) const;
    // QMDS and n > q^h + 1.
    bool is_long(const EnumCaps& caps = {}, int workers = 1) const;
    // Every U_i of dimension exactly h.
    bool is_faithful() const;

    // Trace dual: kernel of G~ * Gram, where Gram is block-diagonal with
    // h x h trace blocks T[a][b] = Tr(xi^a xi^b). Dimension nh - r. The
    // dual is cached, so repeated duality queries (and the dual's own
    // memoized distance) cost one computation.
    AdditiveCode dual() const;
    // Memoized d(C^perp); same cap discipline as min_distance.
    int dual_min_distance(const EnumCaps& caps = {}, int workers = 1) const;

    // Geometric quotient: codewords vanishing on J (0-based), coordinates J
    // deleted. Dimension equals dim of the intersection of the W_j.
    AdditiveCode quotient(const std::vector<int>& j_set) const;
    bool non_obliterating(const std::vector<int>& j_set) const;
    int quotient_dimension(const std::vector<int>& j_set) const;

    // Intersection-regularity condition: dim of every <= k-1 fold block
    // intersection equals r - |J| h. Returns a violating J (0-based) or
    // nullopt. For faithful QMDS codes with d > 1 this is equivalent to the
    // dual being QMDS; is_dually_qmds uses it on that path and falls back to
    // the direct dual-distance computation otherwise.
    std::optional<std::vector<int>> condition_b_violation() const;
    bool is_dually_qmds(const EnumCaps& caps = {}, int workers = 1) const;

    // Checks the defining property of the associated subspace system: every
    // hyperplane of F_q^r contains at most n - d of the U_i, with equality
    // attained.
    bool verify_system(const EnumCaps& caps = {}, int workers = 1) const;

    CodeProfile profile(const EnumCaps& caps = {}, int workers = 1) const;

    // Equality as sets of codewords (row spaces of the expansions).
    bool same_codewords(const AdditiveCode& o) const;

    // "[n, r/h, d]_q^h" with the normalized dimension as a reduced fraction.
    std::string type_string(const EnumCaps& caps = {}, int workers = 1) const;

private:
    struct BlockCache {
        std::vector<Subspace> u, w;
    };
    const BlockCache& blocks() const;

    FieldTower tower_;
    int n_, r_;
    std::vector<long long> gen_;

    mutable std::shared_ptr<const MatFq> gtilde_;
    mutable std::shared_ptr<const MatFq> gtilde_rref_;
    mutable std::shared_ptr<const BlockCache> blocks_;
    mutable std::shared_ptr<AdditiveCode> dual_;
    mutable std::optional<int> d_;
};

}  // namespace aqc
