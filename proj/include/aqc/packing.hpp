#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aqc/common.hpp"
#include "aqc/linalg.hpp"

namespace aqc {

// A multiset of subspaces of F_q^r. `lambda` is the verified packing
// parameter; it stays empty until verify_lambda_packing succeeds.
struct Packing {
    int ambient = 0;
    std::vector<Subspace> blocks;
    std::optional<int> lambda;

    int size() const { return static_cast<int>(blocks.size()); }
};

// Witness of a failed lambda-packing check: a projective point together with
// the (0-based) indexes of the lambda+1 blocks containing it.
struct PackingViolation {
    std::vector<int> point;
    std::vector<int> block_indexes;
    std::string describe() const;
};

// Checks that every 1-dim subspace of F_q^r lies in at most lambda blocks.
// Two independent algorithms run and must agree: (1) membership counting per
// projective point, (2) depth-first search over block subsets of size
// lambda+1 with intersection pruning. Disagreement is a logic error.
// Returns a violation witness, or nullopt if P is a lambda-packing.
std::optional<PackingViolation> lambda_packing_violation(const Gf& F, const Packing& P,
                                                         int lambda,
                                                         const EnumCaps& caps = {});

// Convenience wrapper: true iff no violation; stamps P.lambda on success.
bool verify_lambda_packing(const Gf& F, Packing& P, int lambda, const EnumCaps& caps = {});

// Pairwise trivial intersections and uniform dimension t.
bool is_partial_spread(const Gf& F, const Packing& P, int t, const EnumCaps& caps = {});

// floor((q^r - 1)/(q^t - 1)), the counting bound on partial t-spreads.
long long spread_upper_bound(long long q, int r, int t);

// The perfect t-spread of F_q^r for t | r, by field reduction: F_q^r is
// viewed as F_{q^t}^{r/t} and each F_{q^t}-line is expanded over the base.
// Exactly (q^r-1)/(q^t-1) blocks covering every nonzero vector once
// (re-verified before returning).
Packing desarguesian_spread(const Gf& F, int r, int t);

// A partial t-spread of F_q^r of size sum_{i=1..a-1} q^{it+b} + 1, where
// r = at + b with 0 < b < t. Built recursively: the layer F_q^r = U (+) W
// with dim U = r-t contributes the graphs of w -> c*w for all c in F_{q^u}
// (pairwise differences are injective, so the graphs meet trivially), and
// the rest recurses into U. Size and the spread property are re-verified.
Packing beutelspacher_spread(const Gf& F, int r, int t);

// Exhaustive search for a dim_new-dimensional subspace W not in P such that
// P + {W} is still a lambda-packing. Candidates stream in canonical
// subspace order; the first (canonically smallest) hit is returned, or
// nullopt with an exhaustive-search guarantee. Throws cap_exceeded when the
// Grassmannian is too large to certify.
std::optional<Subspace> extend_search(const Gf& F, const Packing& P, int lambda, int dim_new,
                                      const EnumCaps& caps = {}, int workers = 1);

}  // namespace aqc
