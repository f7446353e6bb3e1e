#include "aqc/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "aqc/packing.hpp"

namespace aqc {

long long projective_point_count(long long q, int d) {
    if (d < 0) throw std::invalid_argument("projective point count: need d >= 0");
    __int128 n = 1;
    for (int i = 0; i < d + 1; ++i) n *= q;
    return static_cast<long long>((n - 1) / (q - 1));
}

bool is_dual_arc(const Gf& F, const std::vector<Subspace>& blocks, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (blocks.size() < 2) return fail("fewer than two blocks");
    const int m = blocks[0].ambient();
    const int bd = blocks[0].dim();
    for (size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].ambient() != m || blocks[i].dim() != bd)
            return fail("mixed ambient or block dimensions");
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = i + 1; j < blocks.size(); ++j) {
            Subspace ij = intersect(F, blocks[i], blocks[j]);
            if (ij.dim() != 1) {
                std::ostringstream os;
                os << "blocks " << i + 1 << " and " << j + 1 << " meet in dimension "
                   << ij.dim();
                return fail(os.str());
            }
            for (size_t l = j + 1; l < blocks.size(); ++l)
                if (intersect(F, ij, blocks[l]).dim() != 0) {
                    std::ostringstream os;
                    os << "blocks " << i + 1 << ", " << j + 1 << ", " << l + 1
                       << " have nontrivial triple intersection";
                    return fail(os.str());
                }
        }
    MatFq all(0, m);
    for (const auto& b : blocks) all = all.stacked(b.basis());
    if (rank(F, all) != m) return fail("blocks do not span the ambient space");
    return true;
}

bool is_dual_hyperoval(const Gf& F, const std::vector<Subspace>& blocks, std::string* why) {
    if (blocks.empty()) {
        if (why) *why = "empty block set";
        return false;
    }
    const int d = blocks[0].dim() - 1;
    long long target = projective_point_count(F.q(), d) + 1;
    if (static_cast<long long>(blocks.size()) > target) {
        if (why) *why = "more blocks than theta_q(d) + 1";
        return false;
    }
    if (static_cast<long long>(blocks.size()) != target) {
        if (why) *why = "fewer blocks than theta_q(d) + 1";
        return false;
    }
    return is_dual_arc(F, blocks, why);
}

AdditiveCode dual_arc_to_code(const FieldTower& T, const std::vector<Subspace>& blocks,
                              const EnumCaps& caps, int workers) {
    if (blocks.empty()) throw std::invalid_argument("dual arc to code: no blocks");
    const int h = T.h();
    if (blocks[0].ambient() != 2 * h + 1)
        throw std::invalid_argument("dual arc to code: ambient must be 2h + 1");
    if (blocks[0].dim() != h + 1)
        throw std::invalid_argument("dual arc to code: blocks must have dimension h + 1");
    std::string why;
    if (!is_dual_arc(T.base(), blocks, &why))
        throw std::invalid_argument("dual arc to code: axioms fail: " + why);
    Packing P;
    P.ambient = 2 * h + 1;
    P.blocks = blocks;
    AdditiveCode code = AdditiveCode::from_packing(T, P);
    if (code.min_distance(caps, workers) != code.n() - 2)
        throw verification_error("dual arc code: distance is not n - 2");
    if (!code.is_dually_qmds(caps, workers))
        throw verification_error("dual arc code: not dually QMDS");
    return code;
}

std::vector<Subspace> code_to_dual_arc(const AdditiveCode& C, const EnumCaps& caps,
                                       int workers) {
    const int h = C.h();
    if (C.r() != 2 * h + 1)
        throw std::invalid_argument("code to dual arc: need r = 2h + 1");
    if (!C.is_faithful()) throw std::invalid_argument("code to dual arc: code is unfaithful");
    if (C.min_distance(caps, workers) != C.n() - 2)
        throw std::invalid_argument("code to dual arc: need d = n - 2");
    if (!C.is_dually_qmds(caps, workers))
        throw std::invalid_argument("code to dual arc: code is not dually QMDS");
    std::vector<Subspace> blocks = C.t_packing().blocks;
    {
        auto sorted = blocks;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("code to dual arc: repeated blocks");
    }
    std::string why;
    if (!is_dual_arc(C.tower().base(), blocks, &why))
        throw verification_error("code to dual arc: axioms fail: " + why);
    return blocks;
}

// --- hyperoval search -----------------------------------------------------

namespace {

// 128-bit point-set mask; enough for every search the subspace cap admits
// in reasonable time (ambient spaces with at most 128 projective points).
struct Mask128 {
    unsigned long long w0 = 0, w1 = 0;
    void set(int b) { (b < 64 ? w0 : w1) |= 1ULL << (b & 63); }
    bool test(int b) const { return ((b < 64 ? w0 : w1) >> (b & 63)) & 1ULL; }
};

// popcount of the AND; when exactly 1, *single_bit receives the bit index.
inline int and_popcount(const Mask128& a, const Mask128& b, int* single_bit) {
    unsigned long long x0 = a.w0 & b.w0, x1 = a.w1 & b.w1;
    int total = __builtin_popcountll(x0) + __builtin_popcountll(x1);
    if (total == 1)
        *single_bit = x0 ? __builtin_ctzll(x0) : 64 + __builtin_ctzll(x1);
    return total;
}

struct SearchContext {
    const Gf* F;
    int m;     // ambient 2h+1
    int bdim;  // block dimension h+1
    long long target;
    std::vector<Subspace> cand;
    std::vector<Mask128> mask;
    int points = 0;
};

SearchContext build_context(const Gf& F, int h, const EnumCaps& caps) {
    SearchContext ctx;
    ctx.F = &F;
    ctx.m = 2 * h + 1;
    ctx.bdim = h + 1;
    ctx.target = projective_point_count(F.q(), h) + 1;
    long long pts = projective_point_count(F.q(), ctx.m - 1);
    if (pts > 128)
        throw cap_exceeded("hyperoval search: ambient has " + std::to_string(pts) +
                           " projective points, above the 128-point search limit");
    ctx.points = static_cast<int>(pts);
    // Point ids follow the canonical point stream order.
    std::unordered_map<long long, int> point_id;
    {
        PointStream ps(F, ctx.m, caps);
        std::vector<int> v;
        int id = 0;
        while (ps.next(v)) {
            long long key = 0;
            for (int i = ctx.m - 1; i >= 0; --i) key = key * F.q() + v[i];
            point_id[key] = id++;
        }
    }
    SubspaceStream ss(F, ctx.m, ctx.bdim, caps);
    Subspace S;
    while (ss.next(S)) {
        Mask128 bm;
        ElementStream es(F, S);
        std::vector<int> v;
        while (es.next(v)) {
            int first = -1;
            for (size_t i = 0; i < v.size(); ++i)
                if (v[i] != 0) {
                    first = static_cast<int>(i);
                    break;
                }
            if (first < 0 || v[first] != 1) continue;
            long long key = 0;
            for (int i = ctx.m - 1; i >= 0; --i) key = key * F.q() + v[i];
            bm.set(point_id.at(key));
        }
        ctx.cand.push_back(std::move(S));
        ctx.mask.push_back(bm);
    }
    return ctx;
}

bool spans_ambient(const SearchContext& ctx, const std::vector<long long>& chosen) {
    MatFq all(0, ctx.m);
    for (long long c : chosen) all = all.stacked(ctx.cand[c].basis());
    return rank(*ctx.F, all) == ctx.m;
}

// A still-viable candidate at some search depth: its index and the set of
// pairwise intersection points it shares with the blocks chosen so far.
// Keeping those as a mask makes the triple-trivial check one bit test: a
// repeated pair point is exactly a nontrivial triple intersection.
struct Viable {
    long long idx;
    Mask128 pair_points;
};

struct Level {
    std::vector<Viable> list;
    size_t pos = 0;  // next list entry to try
};

// Entries of `parent` after `from` that stay viable once block x joins the
// chosen set.
std::vector<Viable> filter_level(const SearchContext& ctx, const std::vector<Viable>& parent,
                                 size_t from, const Viable& x, unsigned long long& nodes) {
    std::vector<Viable> out;
    out.reserve(parent.size() - from);
    for (size_t i = from; i < parent.size(); ++i) {
        const Viable& y = parent[i];
        ++nodes;
        int bit;
        if (and_popcount(ctx.mask[x.idx], ctx.mask[y.idx], &bit) != 1) continue;
        if (y.pair_points.test(bit)) continue;
        Viable ny = y;
        ny.pair_points.set(bit);
        out.push_back(ny);
    }
    return out;
}

// Viability of one candidate against an arbitrary chosen set (used to seed
// the root level and to validate user-provided seeds).
bool viable_against(const SearchContext& ctx, const std::vector<long long>& chosen,
                    long long x, Mask128* ppm) {
    *ppm = Mask128{};
    for (long long c : chosen) {
        int bit;
        if (and_popcount(ctx.mask[c], ctx.mask[x], &bit) != 1) return false;
        if (ppm->test(bit)) return false;
        ppm->set(bit);
    }
    return true;
}

// Iterative DFS over per-level filtered candidate lists. The position is
// fully described by (stack, cursor): `stack` holds chosen candidate
// indexes (the first `fixed` are seeds), `cursor` is the global index of
// the next candidate to try at the deepest level. That pair serializes into
// DhoSearchState and replays on resume.
DhoSearchResult run_dfs(const SearchContext& ctx, std::vector<long long> stack, long long cursor,
                        int fixed, unsigned long long nodes, const DhoSearchOptions& opts) {
    DhoSearchResult res;
    res.nodes = nodes;
    unsigned long long last_checkpoint = nodes;
    std::vector<long long> seeds(stack.begin(), stack.begin() + fixed);

    // Root level: all candidates outside the seed set that tolerate every
    // seed block.
    std::vector<Level> levels;
    {
        Level root;
        for (long long x = 0; x < static_cast<long long>(ctx.cand.size()); ++x) {
            if (std::find(seeds.begin(), seeds.end(), x) != seeds.end()) continue;
            Mask128 ppm;
            ++res.nodes;
            if (viable_against(ctx, seeds, x, &ppm)) root.list.push_back({x, ppm});
        }
        levels.push_back(std::move(root));
    }
    // Replay pushes past the seeds (resume path).
    for (size_t d = fixed; d < stack.size(); ++d) {
        Level& cur = levels.back();
        size_t at = 0;
        while (at < cur.list.size() && cur.list[at].idx != stack[d]) ++at;
        if (at == cur.list.size())
            throw std::invalid_argument("resume: stack entry is not a viable candidate");
        cur.pos = at + 1;
        Level child;
        child.list = filter_level(ctx, cur.list, at + 1, cur.list[at], res.nodes);
        levels.push_back(std::move(child));
    }
    // Position the deepest level at the cursor.
    {
        Level& top = levels.back();
        top.pos = 0;
        while (top.pos < top.list.size() && top.list[top.pos].idx < cursor) ++top.pos;
    }

    while (true) {
        Level& top = levels.back();
        const long long have = static_cast<long long>(stack.size());
        if (have == ctx.target) {
            if (spans_ambient(ctx, stack)) {
                std::vector<Subspace> blocks;
                for (long long c : stack) blocks.push_back(ctx.cand[c]);
                res.found = std::move(blocks);
                return res;
            }
            if (static_cast<int>(stack.size()) <= fixed) {
                res.exhausted = true;
                return res;
            }
            stack.pop_back();
            levels.pop_back();
            continue;
        }
        // Not enough viable candidates left to finish: backtrack.
        if (top.pos >= top.list.size() ||
            static_cast<long long>(top.list.size() - top.pos) < ctx.target - have) {
            if (static_cast<long long>(stack.size()) <= fixed) {
                res.exhausted = true;
                return res;
            }
            stack.pop_back();
            levels.pop_back();
            continue;
        }
        const Viable& x = top.list[top.pos];
        ++top.pos;
        ++res.nodes;
        if (opts.checkpoint_every && opts.on_checkpoint &&
            res.nodes - last_checkpoint >= opts.checkpoint_every) {
            last_checkpoint = res.nodes;
            DhoSearchState st;
            st.p = ctx.F->p();
            st.e = ctx.F->e();
            st.h = ctx.bdim - 1;
            st.stack = stack;
            st.cursor = x.idx;
            st.fixed = fixed;
            st.nodes = res.nodes;
            opts.on_checkpoint(st);
        }
        Level child;
        if (have + 1 < ctx.target)
            child.list = filter_level(ctx, top.list, top.pos, x, res.nodes);
        stack.push_back(x.idx);
        levels.push_back(std::move(child));
    }
}

DhoSearchResult run_search(const Gf& F, const SearchContext& ctx,
                           std::vector<long long> seed_idx,
                           std::optional<DhoSearchState> state, const DhoSearchOptions& opts) {
    const long long N = static_cast<long long>(ctx.cand.size());
    std::vector<long long> stack;
    long long cursor = 0;
    int fixed = 0;
    unsigned long long nodes = 0;
    if (state) {
        stack = state->stack;
        cursor = state->cursor;
        fixed = state->fixed;
        nodes = state->nodes;
    } else {
        stack = std::move(seed_idx);
        fixed = static_cast<int>(stack.size());
        cursor = 0;
        // Seeds must themselves satisfy the arc axioms pairwise.
        for (size_t i = 0; i < stack.size(); ++i) {
            std::vector<long long> prefix(stack.begin(), stack.begin() + i);
            Mask128 ppm;
            if (std::find(prefix.begin(), prefix.end(), stack[i]) != prefix.end() ||
                !viable_against(ctx, prefix, stack[i], &ppm))
                throw std::invalid_argument("seed blocks violate the dual-arc axioms");
        }
    }

    DhoSearchResult res;
    if (opts.workers <= 1 || static_cast<long long>(stack.size()) >= ctx.target) {
        res = run_dfs(ctx, std::move(stack), cursor, fixed, nodes, opts);
    } else {
        // Parallel mode: split on the first free level. Every branch must
        // finish for a nonexistence certificate; the branch with the
        // smallest first choice wins, so the result is deterministic.
        std::mutex mtx;
        std::optional<std::vector<Subspace>> best;
        long long best_first = -1;
        std::atomic<unsigned long long> total_nodes{nodes};
        std::vector<std::thread> pool;
        for (int w = 0; w < opts.workers; ++w)
            pool.emplace_back([&, w]() {
                for (long long first = w; first < N; first += opts.workers) {
                    Mask128 ppm;
                    if (std::find(stack.begin(), stack.end(), first) != stack.end()) continue;
                    if (!viable_against(ctx, stack, first, &ppm)) continue;
                    std::vector<long long> st = stack;
                    st.push_back(first);
                    DhoSearchOptions sub = opts;
                    sub.on_checkpoint = nullptr;
                    sub.checkpoint_every = 0;
                    DhoSearchResult r = run_dfs(ctx, std::move(st), first + 1, fixed + 1, 0, sub);
                    total_nodes += r.nodes;
                    if (r.found) {
                        std::lock_guard<std::mutex> g(mtx);
                        if (best_first < 0 || first < best_first) {
                            best_first = first;
                            best = r.found;
                        }
                    }
                }
            });
        for (auto& th : pool) th.join();
        res.nodes = total_nodes.load();
        if (best) {
            res.found = best;
            res.exhausted = false;
        } else {
            res.exhausted = true;
        }
    }
    if (res.found) {
        std::string why;
        if (!is_dual_hyperoval(F, *res.found, &why))
            throw verification_error("hyperoval search returned an invalid arc: " + why);
    }
    return res;
}

}  // namespace


std::string DhoSearchState::serialize() const {
    std::ostringstream os;
    os << "dho-state p=" << p << " e=" << e << " h=" << h << "\n";
    os << "fixed=" << fixed << "\n";
    os << "nodes=" << nodes << "\n";
    os << "cursor=" << cursor << "\n";
    os << "stack=";
    for (size_t i = 0; i < stack.size(); ++i) os << (i ? "," : "") << stack[i];
    os << "\n";
    return os.str();
}

DhoSearchState DhoSearchState::parse(const std::string& text) {
    DhoSearchState st;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.rfind("dho-state", 0) == 0) {
            std::istringstream ls(line);
            std::string tok;
            ls >> tok;
            while (ls >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) throw parse_error("dho-state: bad token " + tok);
                std::string k = tok.substr(0, eq);
                long long v = std::stoll(tok.substr(eq + 1));
                if (k == "p") st.p = static_cast<int>(v);
                else if (k == "e") st.e = static_cast<int>(v);
                else if (k == "h") st.h = static_cast<int>(v);
                else throw parse_error("dho-state: unknown key " + k);
            }
            header = true;
        } else if (line.rfind("fixed=", 0) == 0) {
            st.fixed = std::stoi(line.substr(6));
        } else if (line.rfind("nodes=", 0) == 0) {
            st.nodes = std::stoull(line.substr(6));
        } else if (line.rfind("cursor=", 0) == 0) {
            st.cursor = std::stoll(line.substr(7));
        } else if (line.rfind("stack=", 0) == 0) {
            std::string rest = line.substr(6);
            std::istringstream rs(rest);
            std::string item;
            while (std::getline(rs, item, ','))
                if (!item.empty()) st.stack.push_back(std::stoll(item));
        } else if (!line.empty()) {
            throw parse_error("dho-state: unexpected line: " + line);
        }
    }
    if (!header) throw parse_error("dho-state: missing header");
    return st;
}

DhoSearchResult search_dho(const Gf& F, int h, const DhoSearchOptions& opts) {
    if (h < 1) throw std::invalid_argument("search: need h >= 1");
    SearchContext ctx = build_context(F, h, opts.caps);
    return run_search(F, ctx, {0}, std::nullopt, opts);
}

DhoSearchResult complete_dho(const Gf& F, int h, const std::vector<Subspace>& seed,
                             const DhoSearchOptions& opts) {
    SearchContext ctx = build_context(F, h, opts.caps);
    std::vector<long long> idx;
    for (const auto& s : seed) {
        auto it = std::find(ctx.cand.begin(), ctx.cand.end(), s);
        if (it == ctx.cand.end())
            throw std::invalid_argument("seed block is not an (h+1)-subspace of F_q^(2h+1)");
        idx.push_back(it - ctx.cand.begin());
    }
    return run_search(F, ctx, std::move(idx), std::nullopt, opts);
}

DhoSearchResult resume_dho(const Gf& F, int h, const DhoSearchState& state,
                           const DhoSearchOptions& opts) {
    if (state.p != F.p() || state.e != F.e() || state.h != h)
        throw std::invalid_argument("resume: state file does not match (p, e, h)");
    SearchContext ctx = build_context(F, h, opts.caps);
    return run_search(F, ctx, {}, state, opts);
}

}  // namespace aqc
