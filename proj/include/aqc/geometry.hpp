#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aqc/code.hpp"
#include "aqc/common.hpp"
#include "aqc/linalg.hpp"

namespace aqc {

// Number of 1-dimensional subspaces of a (d+1)-dimensional space over F_q:
// (q^(d+1) - 1)/(q - 1).
long long projective_point_count(long long q, int d);

// Dual-arc axioms for a set of (d+1)-dimensional blocks: pairwise
// intersections of dimension exactly 1, trivial triple intersections, and
// the blocks together spanning the ambient space. `why`, when given,
// receives a witness for the first failed axiom. Checked directly from the
// definitions (independently of the bitmask search below).
bool is_dual_arc(const Gf& F, const std::vector<Subspace>& blocks, std::string* why = nullptr);

// A dual arc of maximum size: |L| = theta_q(d) + 1. Oversized inputs fail
// before any intersection work.
bool is_dual_hyperoval(const Gf& F, const std::vector<Subspace>& blocks,
                       std::string* why = nullptr);

// An h-dimensional dual arc in F_q^(2h+1), treated as T(C), yields a
// [n, 2 + 1/h, n-2] dually QMDS code; verified before returning.
AdditiveCode dual_arc_to_code(const FieldTower& T, const std::vector<Subspace>& blocks,
                              const EnumCaps& caps = {}, int workers = 1);

// Inverse direction: T(C) of a faithful [n, 2 + 1/h, n-2] dually QMDS code
// is a dual arc. Validates the code shape, then the axioms.
std::vector<Subspace> code_to_dual_arc(const AdditiveCode& C, const EnumCaps& caps = {},
                                       int workers = 1);

// Serializable DFS position for the hyperoval search: the chosen candidate
// indexes (the first `fixed` of them are seeds and are never popped) and the
// next index to try at the current depth.
struct DhoSearchState {
    int p = 0, e = 0, h = 0;
    std::vector<long long> stack;
    long long cursor = 0;
    int fixed = 0;
    unsigned long long nodes = 0;

    std::string serialize() const;
    static DhoSearchState parse(const std::string& text);
};

struct DhoSearchOptions {
    EnumCaps caps;
    int workers = 1;
    // Invoked every `checkpoint_every` examined candidates (sequential mode
    // only); receives the current resumable state.
    unsigned long long checkpoint_every = 0;
    std::function<void(const DhoSearchState&)> on_checkpoint;
};

struct DhoSearchResult {
    std::optional<std::vector<Subspace>> found;
    // True when the search space was exhausted: combined with !found this is
    // a nonexistence certificate. A cap abort reports inconclusive instead.
    bool exhausted = false;
    unsigned long long nodes = 0;
};

// Exhaustive backtracking search for an h-dimensional dual hyperoval in
// F_q^(2h+1): theta_q(h)+1 blocks of dimension h+1. Candidates are all
// (h+1)-subspaces in canonical order; the first block is pinned to the
// canonically first subspace, which loses no generality because GL(2h+1, q)
// is transitive on (h+1)-subspaces and the axioms are GL-invariant. Any
// returned arc is re-verified with is_dual_hyperoval.
DhoSearchResult search_dho(const Gf& F, int h, const DhoSearchOptions& opts = {});

// Same search seeded with known blocks (e.g. a hyperoval with one block
// removed, or an imported partial arc). New blocks are added in ascending
// canonical order; seeds may sit anywhere.
DhoSearchResult complete_dho(const Gf& F, int h, const std::vector<Subspace>& seed,
                             const DhoSearchOptions& opts = {});

// Continues a checkpointed search. The state must match (p, e, h).
DhoSearchResult resume_dho(const Gf& F, int h, const DhoSearchState& state,
                           const DhoSearchOptions& opts = {});

}  // namespace aqc
