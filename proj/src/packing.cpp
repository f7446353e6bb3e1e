#include "aqc/packing.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "aqc/field.hpp"

namespace aqc {

namespace {

long long vec_index(int q, const std::vector<int>& v) {
    long long idx = 0;
    for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) idx = idx * q + v[i];
    return idx;
}

// Projective points of a block, as canonical representative vectors.
std::vector<std::vector<int>> block_points(const Gf& F, const Subspace& B) {
    std::vector<std::vector<int>> pts;
    ElementStream es(F, B);
    std::vector<int> v;
    while (es.next(v)) {
        int first = -1;
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) {
                first = static_cast<int>(i);
                break;
            }
        if (first >= 0 && v[first] == 1) pts.push_back(v);
    }
    return pts;
}

// Algorithm 1: per-point membership counts. Returns the worst point (count,
// indexes) over the whole packing.
std::optional<PackingViolation> violation_by_point_counts(const Gf& F, const Packing& P,
                                                          int lambda) {
    std::unordered_map<long long, std::vector<int>> members;
    for (int b = 0; b < P.size(); ++b)
        for (const auto& pt : block_points(F, P.blocks[b]))
            members[vec_index(F.q(), pt)].push_back(b);
    const std::vector<int>* worst = nullptr;
    long long worst_key = -1;
    for (const auto& [key, idxs] : members)
        if (static_cast<int>(idxs.size()) > lambda &&
            (!worst || idxs.size() > worst->size() ||
             (idxs.size() == worst->size() && key < worst_key))) {
            worst = &idxs;
            worst_key = key;
        }
    if (!worst) return std::nullopt;
    std::vector<int> point(P.ambient, 0);
    long long t = worst_key;
    for (int i = 0; i < P.ambient; ++i) {
        point[i] = static_cast<int>(t % F.q());
        t /= F.q();
    }
    PackingViolation v;
    v.point = std::move(point);
    v.block_indexes = std::vector<int>(worst->begin(), worst->begin() + lambda + 1);
    return v;
}

// Algorithm 2: DFS over index subsets with a running intersection; any
// subset of size lambda+1 reached with a nontrivial intersection is a
// violation. At the last level only a yes/no is needed, and a
// one-dimensional running intersection reduces it to a containment test.
bool meets_nontrivially(const Gf& F, const Subspace& current, const Subspace& block) {
    if (current.dim() == 1) {
        std::vector<int> v(current.basis().row(0), current.basis().row(0) + current.ambient());
        return contains(F, block, v);
    }
    return intersect(F, current, block).dim() > 0;
}

bool subset_violation_dfs(const Gf& F, const Packing& P, int lambda, int start, int depth,
                          const Subspace& current, std::vector<int>& chosen) {
    for (int i = start; i < P.size(); ++i) {
        if (depth == lambda) {
            if (depth > 0 && !meets_nontrivially(F, current, P.blocks[i])) continue;
            chosen.push_back(i);
            return true;
        }
        Subspace next = depth == 0 ? P.blocks[i] : intersect(F, current, P.blocks[i]);
        if (next.dim() == 0) continue;
        chosen.push_back(i);
        if (subset_violation_dfs(F, P, lambda, i + 1, depth + 1, next, chosen)) return true;
        chosen.pop_back();
    }
    return false;
}

}  // namespace

std::string PackingViolation::describe() const {
    std::ostringstream os;
    os << "point (";
    for (size_t i = 0; i < point.size(); ++i) os << (i ? "," : "") << point[i];
    os << ") lies in blocks";
    for (int b : block_indexes) os << ' ' << b + 1;
    return os.str();
}

namespace {
void ensure_blocks_enumerable(const Gf& F, const Packing& P, const EnumCaps& caps) {
    for (const auto& B : P.blocks) {
        long long n = 1;
        for (int i = 0; i < B.dim(); ++i) {
            n *= F.q();
            if (n > caps.vector_cap)
                throw cap_exceeded("packing block with q^" + std::to_string(B.dim()) +
                                   " elements exceeds enumeration cap");
        }
    }
}
}  // namespace

std::optional<PackingViolation> lambda_packing_violation(const Gf& F, const Packing& P,
                                                         int lambda, const EnumCaps& caps) {
    if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
    ensure_blocks_enumerable(F, P, caps);
    auto v1 = violation_by_point_counts(F, P, lambda);
    std::vector<int> chosen;
    bool v2 = subset_violation_dfs(F, P, lambda, 0, 0, Subspace(), chosen);
    if (v1.has_value() != v2)
        throw std::logic_error("lambda-packing algorithms disagree: internal bug");
    return v1;
}

bool verify_lambda_packing(const Gf& F, Packing& P, int lambda, const EnumCaps& caps) {
    auto v = lambda_packing_violation(F, P, lambda, caps);
    if (!v) P.lambda = lambda;
    return !v.has_value();
}

bool is_partial_spread(const Gf& F, const Packing& P, int t, const EnumCaps& caps) {
    ensure_blocks_enumerable(F, P, caps);
    for (const auto& B : P.blocks)
        if (B.dim() != t || B.ambient() != P.ambient) return false;
    // Two t-spaces meet trivially iff they share no projective point.
    std::unordered_map<long long, int> seen;
    for (const auto& B : P.blocks)
        for (const auto& pt : block_points(F, B))
            if (++seen[vec_index(F.q(), pt)] > 1) return false;
    return true;
}

long long spread_upper_bound(long long q, int r, int t) {
    if (t < 1 || t >= r) throw std::invalid_argument("spread bound: need 1 <= t < r");
    __int128 num = 1, den = 1;
    for (int i = 0; i < r; ++i) num *= q;
    for (int i = 0; i < t; ++i) den *= q;
    return static_cast<long long>((num - 1) / (den - 1));
}

Packing desarguesian_spread(const Gf& F, int r, int t) {
    if (t < 1 || r < 1 || r % t != 0) throw std::invalid_argument("desarguesian spread: t must divide r");
    {
        long long n = 1;
        for (int i = 0; i < r; ++i) {
            n *= F.q();
            if (n > (1LL << 26)) throw cap_exceeded("desarguesian spread: q^r too large");
        }
    }
    const int m = r / t;
    FieldTower ext(F, t, smallest_irreducible(F, t));
    Packing P;
    P.ambient = r;
    // Canonical projective representatives of F_{q^t}^m: first nonzero
    // coordinate equals 1, counter order (coordinate 0 least significant).
    std::vector<long long> v(m, 0);
    auto advance = [&]() {
        for (int i = 0; i < m; ++i) {
            if (++v[i] < ext.qh()) return true;
            v[i] = 0;
        }
        return false;
    };
    while (advance()) {
        int first = 0;
        while (v[first] == 0) ++first;
        if (v[first] != 1) continue;
        MatFq basis(t, r);
        for (int a = 0; a < t; ++a) {
            long long scale = ext.pow(ext.xi(), a);
            for (int c = 0; c < m; ++c) {
                auto coords = ext.expand(ext.mul(scale, v[c]));
                for (int i = 0; i < t; ++i) basis.at(a, c * t + i) = coords[i];
            }
        }
        P.blocks.push_back(Subspace::from_span(F, std::move(basis)));
    }
    // Perfect cover check: every nonzero vector in exactly one block.
    __int128 num = 1, den = 1;
    for (int i = 0; i < r; ++i) num *= F.q();
    for (int i = 0; i < t; ++i) den *= F.q();
    long long expected = static_cast<long long>((num - 1) / (den - 1));
    if (static_cast<long long>(P.blocks.size()) != expected)
        throw verification_error("desarguesian spread: wrong block count");
    std::unordered_map<long long, int> seen;
    for (const auto& B : P.blocks)
        for (const auto& pt : block_points(F, B))
            if (++seen[vec_index(F.q(), pt)] > 1)
                throw verification_error("desarguesian spread: point covered twice");
    long long all_points = 1;
    for (int i = 0; i < r; ++i) all_points *= F.q();
    all_points = (all_points - 1) / (F.q() - 1);
    if (static_cast<long long>(seen.size()) != all_points)
        throw verification_error("desarguesian spread: cover incomplete");
    P.lambda = 1;
    return P;
}

namespace {

// Recursive worker for beutelspacher_spread; blocks live in the first
// `r` coordinates of an `ambient`-dimensional space.
void beutelspacher_rec(const Gf& F, int r, int t, int ambient, Packing& out) {
    if (r < 2 * t) {
        // Base: a single t-space (r = t + b, no room for a second layer).
        MatFq basis(t, ambient);
        for (int i = 0; i < t; ++i) basis.at(i, i) = 1;
        out.blocks.push_back(Subspace::from_rref(std::move(basis)));
        return;
    }
    const int u = r - t;
    FieldTower ext(F, u, smallest_irreducible(F, u));
    // Graph blocks: for c in F_{q^u}, the span of (c * xi^i, e_i), i < t,
    // sitting in coordinates [0, u) + [u, u+t) of the current layer.
    for (long long c = 0; c < ext.qh(); ++c) {
        MatFq basis(t, ambient);
        for (int i = 0; i < t; ++i) {
            auto coords = ext.expand(ext.mul(c, ext.pow(ext.xi(), i)));
            for (int j = 0; j < u; ++j) basis.at(i, j) = coords[j];
            basis.at(i, u + i) = 1;
        }
        out.blocks.push_back(Subspace::from_span(F, std::move(basis)));
    }
    beutelspacher_rec(F, u, t, ambient, out);
}

}  // namespace

Packing beutelspacher_spread(const Gf& F, int r, int t) {
    if (t < 1 || t >= r || r % t == 0)
        throw std::invalid_argument("beutelspacher spread: need t < r with t not dividing r");
    Packing P;
    P.ambient = r;
    beutelspacher_rec(F, r, t, r, P);
    const int a = r / t, b = r % t;
    long long expected = 1;
    for (int i = 1; i <= a - 1; ++i) {
        long long term = 1;
        for (int j = 0; j < i * t + b; ++j) term *= F.q();
        expected += term;
    }
    if (static_cast<long long>(P.blocks.size()) != expected)
        throw verification_error("beutelspacher spread: size formula violated");
    if (!is_partial_spread(F, P, t))
        throw verification_error("beutelspacher spread: not a partial spread");
    P.lambda = 1;
    return P;
}

std::optional<Subspace> extend_search(const Gf& F, const Packing& P, int lambda, int dim_new,
                                      const EnumCaps& caps, int workers) {
    // Current per-point block counts; adding W keeps the packing iff every
    // point of W currently sits in at most lambda-1 blocks.
    std::unordered_map<long long, int> counts;
    for (const auto& B : P.blocks)
        for (const auto& pt : block_points(F, B)) ++counts[vec_index(F.q(), pt)];
    for (const auto& [k, c] : counts)
        if (c > lambda) throw std::invalid_argument("extend_search: P is not a lambda-packing");

    auto candidate_ok = [&](const Subspace& W) {
        for (const auto& B : P.blocks)
            if (B == W) return false;  // must be a new block
        for (const auto& pt : block_points(F, W)) {
            auto it = counts.find(vec_index(F.q(), pt));
            if (it != counts.end() && it->second > lambda - 1) return false;
        }
        return true;
    };

    if (workers <= 1) {
        SubspaceStream ss(F, P.ambient, dim_new, caps);
        Subspace W;
        while (ss.next(W))
            if (candidate_ok(W)) return W;
        return std::nullopt;
    }

    // Strided scan: worker w tests candidates with index % workers == w and
    // stops at its earliest hit; the global minimum index wins, so the result
    // matches the sequential order regardless of scheduling.
    std::mutex mtx;
    long long best_idx = -1;
    Subspace best;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            SubspaceStream ss(F, P.ambient, dim_new, caps);
            Subspace W;
            long long idx = 0;
            while (ss.next(W)) {
                if (idx % workers == w && candidate_ok(W)) {
                    std::lock_guard<std::mutex> g(mtx);
                    if (best_idx < 0 || idx < best_idx) {
                        best_idx = idx;
                        best = W;
                    }
                    return;
                }
                ++idx;
            }
        });
    for (auto& th : pool) th.join();
    if (best_idx < 0) return std::nullopt;
    return best;
}

}  // namespace aqc
