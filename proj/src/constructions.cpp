#include "aqc/constructions.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace aqc {

namespace {

// Span of unit vectors at the given ambient coordinate indexes.
Subspace coordinate_span(int ambient, const std::vector<int>& idxs) {
    MatFq basis(static_cast<int>(idxs.size()), ambient);
    std::vector<int> sorted = idxs;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) basis.at(static_cast<int>(i), sorted[i]) = 1;
    return Subspace::from_rref(std::move(basis));
}

// Places a subspace of F_q^h into ambient coordinates [offset, offset+h).
MatFq embed_rows(const Subspace& S, int ambient, int offset) {
    MatFq rows(S.dim(), ambient);
    for (int i = 0; i < S.dim(); ++i)
        for (int j = 0; j < S.ambient(); ++j) rows.at(i, offset + j) = S.basis().at(i, j);
    return rows;
}

void check_distance(const AdditiveCode& code, int expected_d, const char* family,
                    const EnumCaps& caps, int workers) {
    int d = code.min_distance(caps, workers);
    if (d != expected_d) {
        std::ostringstream os;
        os << family << ": exhaustive distance " << d << " != expected " << expected_d;
        throw verification_error(os.str());
    }
    BoundValue bound = qmds_length_bound(code.q(), code.h(), code.k(),
                                         code.r() - (code.k() - 1) * code.h());
    if (code.n() > bound.value) {
        std::ostringstream os;
        os << family << ": n = " << code.n() << " exceeds the length bound " << bound.value;
        throw verification_error(os.str());
    }
}

void check_packing(const Gf& F, Packing& P, int lambda, const char* family,
                   const EnumCaps& caps) {
    if (auto v = lambda_packing_violation(F, P, lambda, caps)) {
        std::ostringstream os;
        os << family << ": not a " << lambda << "-packing: " << v->describe();
        throw verification_error(os.str());
    }
    P.lambda = lambda;
}

}  // namespace

Subspace alpha_block(const FieldTower& T, int k, int r0, long long alpha) {
    if (k < 2) throw std::invalid_argument("alpha block: need k >= 2");
    if (r0 < 1 || r0 > T.h()) throw std::invalid_argument("alpha block: need 1 <= r0 <= h");
    const int h = T.h();
    const int r = (k - 1) * h + r0;
    // One F_{q^h}-valued linear equation on r F_q coordinates; expanding over
    // the basis gives h rows.
    MatFq eq(h, r);
    for (int i = 0; i < k - 1; ++i) {
        long long coef = T.pow(alpha, i);
        for (int a = 0; a < h; ++a) {
            auto col = T.expand(T.mul(coef, T.pow(T.xi(), a)));
            for (int b = 0; b < h; ++b) eq.at(b, i * h + a) = col[b];
        }
    }
    long long lead = T.pow(alpha, k - 1);
    for (int j = 0; j < r0; ++j) {
        auto col = T.expand(T.mul(lead, T.pow(T.xi(), j)));
        for (int b = 0; b < h; ++b) eq.at(b, (k - 1) * h + j) = col[b];
    }
    return kernel(T.base(), eq);
}

Construction construct_family_a(const FieldTower& T, int k, int r0, const EnumCaps& caps,
                                int workers) {
    const int h = T.h();
    if (h < 2) throw std::invalid_argument("family A: need h >= 2");
    if (k < 2 || k > T.qh() - 1) throw std::invalid_argument("family A: need 2 <= k <= q^h - 1");
    if (r0 < 1 || 2 * r0 > h) throw std::invalid_argument("family A: need 1 <= r0 <= h/2");
    const int r = (k - 1) * h + r0;

    Packing P;
    P.ambient = r;
    for (long long a = 0; a < T.qh(); ++a) P.blocks.push_back(alpha_block(T, k, r0, a));
    // The two extra blocks: free F_{q^h} coordinates x_1..x_{k-2}, then S_i
    // inside the last F_{q^h} coordinate, z = 0. S_1 and S_2 are spans of
    // disjoint basis ranges, so S_1 meet S_2 = 0.
    for (int which = 0; which < 2; ++which) {
        std::vector<int> idxs;
        for (int c = 0; c < (k - 2) * h; ++c) idxs.push_back(c);
        for (int j = 0; j < r0; ++j) idxs.push_back((k - 2) * h + which * r0 + j);
        P.blocks.push_back(coordinate_span(r, idxs));
    }
    for (const auto& B : P.blocks)
        if (B.dim() != (k - 2) * h + r0)
            throw verification_error("family A: block of unexpected dimension");
    check_packing(T.base(), P, k - 1, "family A", caps);

    AdditiveCode code = AdditiveCode::from_packing(T, P);
    check_distance(code, static_cast<int>(P.blocks.size()) - k + 1, "family A", caps, workers);
    if (!code.is_long(caps, workers)) throw verification_error("family A: code not long");
    return {std::move(P), std::move(code)};
}

std::pair<int, int> default_b_split(int h, int r0) {
    const int r2 = h / 2;
    const int r1 = h + r0 - r2;
    if (3 * r1 > 2 * h)
        throw std::invalid_argument("no (r1, r2) split with r1 <= 2h/3 and r2 <= h/2 exists");
    return {r1, r2};
}

namespace {

struct BSplit {
    int r1, r2;
};

BSplit resolve_b_split(int h, int r0, std::optional<int> r1, std::optional<int> r2) {
    if (r1.has_value() != r2.has_value())
        throw std::invalid_argument("give both r1 and r2 or neither");
    if (!r1) {
        auto [a, b] = default_b_split(h, r0);
        return {a, b};
    }
    if (*r1 < 1 || *r2 < 1 || *r1 + *r2 != h + r0 || 3 * *r1 > 2 * h || 2 * *r2 > h)
        throw std::invalid_argument(
            "need r1 + r2 = h + r0 with 1 <= r1 <= 2h/3 and 1 <= r2 <= h/2");
    return {*r1, *r2};
}

// Y_1, Y_2, Y_3: coordinate spans of F_q^h of dimension r1 whose supports
// miss a common index, so the triple intersection is trivial. Y_3 avoids the
// overlap [h-r1, r1) of the other two; 2(h-r1) >= r1 makes that possible.
std::vector<std::vector<int>> triple_trivial_supports(int h, int r1) {
    std::vector<std::vector<int>> y(3);
    for (int i = 0; i < r1; ++i) y[0].push_back(i);
    for (int i = h - r1; i < h; ++i) y[1].push_back(i);
    for (int i = 0; i < h && static_cast<int>(y[2].size()) < r1; ++i)
        if (i < h - r1 || i >= r1) y[2].push_back(i);
    return y;
}

Packing small_spread(const Gf& F, int m, int t) {
    return m % t == 0 ? desarguesian_spread(F, m, t) : beutelspacher_spread(F, m, t);
}

}  // namespace

Construction construct_family_b(const FieldTower& T, int k, int r0, std::optional<int> r1_opt,
                                std::optional<int> r2_opt, const EnumCaps& caps, int workers) {
    const int h = T.h();
    if (h < 6 || h == 7) throw std::invalid_argument("family B: need h >= 6, h != 7");
    if (k < 3 || k > T.qh() - 1) throw std::invalid_argument("family B: need 3 <= k <= q^h - 1");
    if (r0 < 1 || 6 * r0 > h) throw std::invalid_argument("family B: need 1 <= r0 <= h/6");
    auto [r1, r2] = resolve_b_split(h, r0, r1_opt, r2_opt);
    const int r = (k - 1) * h + r0;

    auto supports = triple_trivial_supports(h, r1);
    std::vector<Subspace> ys;
    for (auto& s : supports) ys.push_back(coordinate_span(h, s));
    {
        Subspace t3 = intersect(T.base(), intersect(T.base(), ys[0], ys[1]), ys[2]);
        if (t3.dim() != 0) throw verification_error("family B: Y triple intersection nontrivial");
    }
    Packing s_spread = small_spread(T.base(), h, r2);
    if (s_spread.size() < 3)
        throw std::invalid_argument("family B: partial r2-spread has fewer than 3 blocks");

    Packing P;
    P.ambient = r;
    for (long long a = 0; a < T.qh(); ++a) P.blocks.push_back(alpha_block(T, k, r0, a));
    for (int i = 0; i < 3; ++i) {
        // Free x_1..x_{k-3}, then Y_i, then S_i, then z = 0.
        MatFq rows(0, r);
        std::vector<int> free_idx;
        for (int c = 0; c < (k - 3) * h; ++c) free_idx.push_back(c);
        rows = coordinate_span(r, free_idx).basis();
        rows = rows.stacked(embed_rows(ys[i], r, (k - 3) * h));
        rows = rows.stacked(embed_rows(s_spread.blocks[i], r, (k - 2) * h));
        P.blocks.push_back(Subspace::from_span(T.base(), std::move(rows)));
    }
    for (const auto& B : P.blocks)
        if (B.dim() != (k - 2) * h + r0)
            throw verification_error("family B: block of unexpected dimension");
    check_packing(T.base(), P, k - 1, "family B", caps);

    AdditiveCode code = AdditiveCode::from_packing(T, P);
    check_distance(code, static_cast<int>(P.blocks.size()) - k + 1, "family B", caps, workers);
    if (!code.is_long(caps, workers)) throw verification_error("family B: code not long");
    return {std::move(P), std::move(code)};
}

Construction construct_family_bbar(const FieldTower& T, int r0, std::optional<int> r1_opt,
                                   std::optional<int> r2_opt, const EnumCaps& caps, int workers) {
    const int h = T.h();
    const int k = 3;
    if (h < 6 || h == 7) throw std::invalid_argument("family Bbar: need h >= 6, h != 7");
    if (r0 < 1 || 6 * r0 > h) throw std::invalid_argument("family Bbar: need 1 <= r0 <= h/6");
    auto [r1, r2] = resolve_b_split(h, r0, r1_opt, r2_opt);
    const int r = (k - 1) * h + r0;

    // Omega_2: the constructed partial r2-spread; its size is the number of
    // extra blocks we try to pack.
    Packing omega2 = small_spread(T.base(), h, r2);
    const int g = omega2.size();
    {
        // g must meet the recursive lower bound sum q^{i r2 + b} + 1.
        int a = h / r2, b = h % r2;
        long long lb = 1;
        for (int i = 1; i <= a - 1; ++i) {
            long long term = 1;
            for (int j = 0; j < i * r2 + b; ++j) term *= T.q();
            lb += term;
        }
        if (g < lb) throw verification_error("family Bbar: spread smaller than its lower bound");
    }

    // Gamma: a partial (h-r1)-spread; the Y_i are drawn from its perps.
    Packing gamma = small_spread(T.base(), h, h - r1);
    if (gamma.size() < g)
        throw verification_error("family Bbar: fewer Gamma-perp subspaces than spread blocks");
    std::vector<Subspace> ys;
    for (int i = 0; i < g; ++i) ys.push_back(perp(T.base(), gamma.blocks[i]));

    // The construction needs every Y-triple trivial; that property does not
    // follow from the spread property of Gamma, so verify it outright.
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j) {
            Subspace ij = intersect(T.base(), ys[i], ys[j]);
            if (ij.dim() == 0) continue;
            for (int l = j + 1; l < g; ++l)
                if (intersect(T.base(), ij, ys[l]).dim() != 0) {
                    std::ostringstream os;
                    os << "family Bbar: Gamma-perp triple (" << i + 1 << "," << j + 1 << ","
                       << l + 1 << ") has nontrivial intersection; the packing cannot reach n = "
                       << T.qh() + g;
                    throw verification_error(os.str());
                }
        }

    Packing P;
    P.ambient = r;
    for (long long a = 0; a < T.qh(); ++a) P.blocks.push_back(alpha_block(T, k, r0, a));
    for (int i = 0; i < g; ++i) {
        MatFq rows = embed_rows(ys[i], r, 0);
        rows = rows.stacked(embed_rows(omega2.blocks[i], r, h));
        P.blocks.push_back(Subspace::from_span(T.base(), std::move(rows)));
    }
    for (const auto& B : P.blocks)
        if (B.dim() != (k - 2) * h + r0)
            throw verification_error("family Bbar: block of unexpected dimension");
    check_packing(T.base(), P, k - 1, "family Bbar", caps);

    AdditiveCode code = AdditiveCode::from_packing(T, P);
    check_distance(code, static_cast<int>(P.blocks.size()) - k + 1, "family Bbar", caps, workers);
    if (!code.is_long(caps, workers)) throw verification_error("family Bbar: code not long");
    return {std::move(P), std::move(code)};
}

Construction construct_spread_code(const FieldTower& T, int r0, std::optional<Packing> omega,
                                   const EnumCaps& caps, int workers) {
    const int h = T.h();
    if (r0 < 1 || r0 >= h) throw std::invalid_argument("spread code: need 1 <= r0 < h");
    const int r = h + r0;
    Packing P;
    if (omega) {
        P = std::move(*omega);
        if (P.ambient != r) throw std::invalid_argument("spread code: spread ambient must be h + r0");
        if (!is_partial_spread(T.base(), P, r0, caps))
            throw std::invalid_argument("spread code: supplied packing is not a partial r0-spread");
    } else {
        P = small_spread(T.base(), r, r0);
    }
    check_packing(T.base(), P, 1, "spread code", caps);

    AdditiveCode code = AdditiveCode::from_packing(T, P);
    check_distance(code, static_cast<int>(P.blocks.size()) - 1, "spread code", caps, workers);
    return {std::move(P), std::move(code)};
}

}  // namespace aqc
