#pragma once

#include <optional>
#include <utility>

#include "aqc/code.hpp"
#include "aqc/common.hpp"
#include "aqc/field.hpp"
#include "aqc/packing.hpp"

namespace aqc {

// A verified construction: the packing realizing T(C) and the code built
// from it. Every constructor re-checks its own claims (packing parameter,
// exhaustive distance, length bound) and throws verification_error with a
// witness if any fails.
struct Construction {
    Packing packing;
    AdditiveCode code;
};

// The subspace cut out by sum_i alpha^(i-1) x_i + alpha^(k-1) sum_j xi^(j-1)
// z_j = 0 inside (F_{q^h})^(k-1) x (F_q)^r0, realized as the F_q-kernel of
// the expanded defining equation. Dimension (k-2)h + r0 for every alpha.
Subspace alpha_block(const FieldTower& T, int k, int r0, long long alpha);

// Default (r1, r2) for the q^h+3 family and its k = 3 extension: the largest
// r2 <= floor(h/2), i.e. r2 = floor(h/2) and r1 = h + r0 - r2; rejects
// parameters where r1 would exceed floor(2h/3).
std::pair<int, int> default_b_split(int h, int r0);

// n = q^h + 2 blocks: the alpha blocks plus two blocks carried by disjoint
// coordinate spans S1, S2 of dimension r0. Requires h >= 2,
// 2 <= k <= q^h - 1, 1 <= r0 <= h/2. Verified (k-1)-packing; the code is
// QMDS with d = n - k + 1 and long.
Construction construct_family_a(const FieldTower& T, int k, int r0, const EnumCaps& caps = {},
                                int workers = 1);

// n = q^h + 3 blocks: alpha blocks plus three blocks built from subspaces
// Y_i (dimension r1, trivial triple intersection) and S_i (dimension r2,
// pairwise trivial; drawn from a partial r2-spread). Requires h >= 6,
// h != 7, 3 <= k <= q^h - 1, 1 <= r0 <= h/6.
Construction construct_family_b(const FieldTower& T, int k, int r0,
                                std::optional<int> r1 = std::nullopt,
                                std::optional<int> r2 = std::nullopt,
                                const EnumCaps& caps = {}, int workers = 1);

// k = 3 variant that packs as many Y_i x S_i blocks as the constructed
// partial r2-spread provides (g of them; n = q^h + g). The Y_i come from the
// perps of a partial (h-r1)-spread; the required triple-trivial property of
// the chosen Y_i is re-verified per instance and a verification_error with a
// witness triple is thrown when it fails.
Construction construct_family_bbar(const FieldTower& T, int r0,
                                   std::optional<int> r1 = std::nullopt,
                                   std::optional<int> r2 = std::nullopt,
                                   const EnumCaps& caps = {}, int workers = 1);

// k = 2: T(C) is a partial r0-spread of F_q^(h+r0). Default spread:
// Desarguesian when r0 | h, else the recursive partial spread. A caller-
// supplied spread overrides the default and is validated first.
Construction construct_spread_code(const FieldTower& T, int r0,
                                   std::optional<Packing> omega = std::nullopt,
                                   const EnumCaps& caps = {}, int workers = 1);

}  // namespace aqc
