#include "aqc/code.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace aqc {

namespace {

long long pow_checked(long long base, int exp, long long limit) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > limit / base) return limit + 1;
        r *= base;
    }
    return r;
}

}  // namespace

namespace {
// q^h and q^r0 as exact integers; rejects inputs whose bound would not fit.
std::pair<__int128, __int128> bound_powers(int q, int h, int r0) {
    if (q < 2) throw std::invalid_argument("bound: need q >= 2");
    __int128 qh = 1, qr0 = 1;
    for (int i = 0; i < h; ++i) {
        qh *= q;
        if (qh > (__int128)1 << 62) throw std::invalid_argument("bound: q^h out of range");
    }
    for (int i = 0; i < r0; ++i) qr0 *= q;
    return {qh, qr0};
}
}  // namespace

BoundValue qmds_length_bound(int q, int h, int k, int r0) {
    if (r0 < 1 || r0 > h) throw std::invalid_argument("length bound: need 1 <= r0 <= h");
    if (k < 1) throw std::invalid_argument("length bound: need k >= 1");
    auto [qh, qr0] = bound_powers(q, h, r0);
    BoundValue b;
    b.remainder = static_cast<long long>((qh - 1) % (qr0 - 1));
    b.exact = b.remainder == 0;
    b.value = static_cast<long long>(k - 2 + qh + (qh - 1) / (qr0 - 1));
    return b;
}

BoundValue dually_k_bound(int q, int h, int r0) {
    if (r0 < 1 || r0 > h) throw std::invalid_argument("k bound: need 1 <= r0 <= h");
    auto [qh, qr0] = bound_powers(q, h, r0);
    BoundValue b;
    b.remainder = static_cast<long long>((qh - 1) % (qr0 - 1));
    b.exact = b.remainder == 0;
    b.value = static_cast<long long>(qh + (qh - 1) / (qr0 - 1) - 1);
    return b;
}

AdditiveCode::AdditiveCode(FieldTower tower, int n, int r, std::vector<long long> gen)
    : tower_(std::move(tower)), n_(n), r_(r), gen_(std::move(gen)) {
    if (n < 0 || r < 0) throw std::invalid_argument("code: negative dimensions");
    if (gen_.size() != static_cast<size_t>(n_) * r_)
        throw std::invalid_argument("code: generator size mismatch");
    for (long long x : gen_)
        if (x < 0 || x >= tower_.qh())
            throw std::invalid_argument("code: generator entry out of F_{q^h}");
    if (rank(tower_.base(), expanded_generator()) != r_)
        throw std::invalid_argument("code: expansion of the generator must have rank r");
}

const MatFq& AdditiveCode::expanded_generator() const {
    if (!gtilde_) {
        const int h = tower_.h();
        MatFq G(r_, n_ * h);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < n_; ++j) {
                auto coords = tower_.expand(gen(i, j));
                for (int a = 0; a < h; ++a) G.at(i, j * h + a) = coords[a];
            }
        gtilde_ = std::make_shared<const MatFq>(std::move(G));
    }
    return *gtilde_;
}

const AdditiveCode::BlockCache& AdditiveCode::blocks() const {
    if (!blocks_) {
        auto bc = std::make_shared<BlockCache>();
        const MatFq& G = expanded_generator();
        const int h = tower_.h();
        bc->u.reserve(n_);
        bc->w.reserve(n_);
        for (int j = 0; j < n_; ++j) {
            // Columns of block j, as rows of an h x r matrix.
            MatFq cols(h, r_);
            for (int a = 0; a < h; ++a)
                for (int i = 0; i < r_; ++i) cols.at(a, i) = G.at(i, j * h + a);
            Subspace u = Subspace::from_span(tower_.base(), std::move(cols));
            bc->w.push_back(perp(tower_.base(), u));
            bc->u.push_back(std::move(u));
        }
        blocks_ = std::move(bc);
    }
    return *blocks_;
}

const Subspace& AdditiveCode::column_space(int i) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("column_space: index out of range");
    return blocks().u[i];
}

const Subspace& AdditiveCode::block_perp(int i) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("block_perp: index out of range");
    return blocks().w[i];
}

Packing AdditiveCode::t_packing() const {
    Packing P;
    P.ambient = r_;
    P.blocks = blocks().w;
    return P;
}

std::vector<Subspace> AdditiveCode::x_multiset() const { return blocks().u; }

int AdditiveCode::weight(const std::vector<int>& u) const {
    if (static_cast<int>(u.size()) != r_) throw std::invalid_argument("weight: dimension mismatch");
    const auto& bc = blocks();
    int zeros = 0;
    for (int j = 0; j < n_; ++j) {
        // u in W_j iff u is orthogonal to every basis vector of U_j.
        const MatFq& B = bc.u[j].basis();
        bool in_w = true;
        for (int i = 0; i < B.rows && in_w; ++i) {
            int s = 0;
            const int* row = B.row(i);
            for (int c = 0; c < r_; ++c)
                if (u[c] != 0 && row[c] != 0)
                    s = tower_.base().add(s, tower_.base().mul(u[c], row[c]));
            in_w = s == 0;
        }
        if (in_w) ++zeros;
    }
    return n_ - zeros;
}

std::vector<long long> AdditiveCode::encode(const std::vector<int>& u) const {
    if (static_cast<int>(u.size()) != r_) throw std::invalid_argument("encode: dimension mismatch");
    std::vector<long long> c(n_, 0);
    for (int i = 0; i < r_; ++i) {
        if (u[i] == 0) continue;
        for (int j = 0; j < n_; ++j)
            c[j] = tower_.add(c[j], tower_.scalar_mul(u[i], gen(i, j)));
    }
    return c;
}

int AdditiveCode::codeword_weight(const std::vector<int>& u) const {
    auto c = encode(u);
    return static_cast<int>(std::count_if(c.begin(), c.end(), [](long long x) { return x != 0; }));
}

int AdditiveCode::min_distance(const EnumCaps& caps, int workers) const {
    if (d_) return *d_;
    if (r_ < 1) throw std::invalid_argument("min_distance: zero code");
    const int q = tower_.q();
    long long total = pow_checked(q, r_, caps.vector_cap);
    if (total > caps.vector_cap)
        throw cap_exceeded("min_distance: q^r = q^" + std::to_string(r_) + " exceeds cap " +
                           std::to_string(caps.vector_cap));
    const auto& bc = blocks();  // build caches before any parallel scan
    (void)bc;

    std::vector<int> local_max(std::max(workers, 1), 0);
    parallel_ranges(total - 1, std::max(workers, 1), [&](long long lo, long long hi, int w) {
        std::vector<int> u(r_);
        int best = 0;
        for (long long idx = lo; idx < hi; ++idx) {
            long long t = idx + 1;  // skip the zero vector
            int first = -1;
            for (int i = 0; i < r_; ++i) {
                u[i] = static_cast<int>(t % q);
                t /= q;
                if (first < 0 && u[i] != 0) first = i;
            }
            if (u[first] != 1) continue;  // one representative per scalar class
            int wt = weight(u);
            if (n_ - wt > best) best = n_ - wt;
        }
        local_max[w] = best;
    });
    int max_membership = *std::max_element(local_max.begin(), local_max.end());
    d_ = n_ - max_membership;
    return *d_;
}

int AdditiveCode::singleton_defect(const EnumCaps& caps, int workers) const {
    return (n_ - min_distance(caps, workers) + 1) - k();
}

bool AdditiveCode::is_qmds(const EnumCaps& caps, int workers) const {
    return singleton_defect(caps, workers) == 0;
}

bool AdditiveCode::is_long(const EnumCaps& caps, int workers) const {
    return is_qmds(caps, workers) && n_ > tower_.qh() + 1;
}

bool AdditiveCode::is_faithful() const {
    const auto& bc = blocks();
    for (const auto& u : bc.u)
        if (u.dim() != tower_.h()) return false;
    return true;
}

AdditiveCode AdditiveCode::dual() const {
    if (dual_) return *dual_;
    const Gf& F = tower_.base();
    const int h = tower_.h();
    // Gram block of the trace form on the basis 1, xi, ..., xi^{h-1}.
    MatFq gram(h, h);
    {
        std::vector<long long> xi_pow(2 * h - 1, 1);
        for (int i = 1; i < 2 * h - 1; ++i) xi_pow[i] = tower_.mul(xi_pow[i - 1], tower_.xi());
        for (int a = 0; a < h; ++a)
            for (int b = 0; b < h; ++b) gram.at(a, b) = tower_.trace(xi_pow[a + b]);
    }
    const MatFq& G = expanded_generator();
    MatFq M(r_, n_ * h);
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < r_; ++i)
            for (int b = 0; b < h; ++b) {
                int s = 0;
                for (int a = 0; a < h; ++a)
                    s = F.add(s, F.mul(G.at(i, j * h + a), gram.at(a, b)));
                M.at(i, j * h + b) = s;
            }
    Subspace K = kernel(F, M);
    if (K.dim() != n_ * h - r_)
        throw std::logic_error("dual: kernel dimension is not nh - r (trace form degenerate?)");
    std::vector<long long> dual_gen;
    dual_gen.reserve(static_cast<size_t>(K.dim()) * n_);
    for (int i = 0; i < K.dim(); ++i)
        for (int j = 0; j < n_; ++j) {
            std::vector<int> coords(h);
            for (int a = 0; a < h; ++a) coords[a] = K.basis().at(i, j * h + a);
            dual_gen.push_back(tower_.contract(coords));
        }
    dual_ = std::make_shared<AdditiveCode>(tower_, n_, K.dim(), std::move(dual_gen));
    return *dual_;
}

int AdditiveCode::dual_min_distance(const EnumCaps& caps, int workers) const {
    dual();
    return dual_->min_distance(caps, workers);
}

int AdditiveCode::quotient_dimension(const std::vector<int>& j_set) const {
    Subspace inter = Subspace::full(r_);
    for (int j : j_set) {
        if (j < 0 || j >= n_) throw std::invalid_argument("quotient: index out of range");
        inter = intersect(tower_.base(), inter, block_perp(j));
    }
    return inter.dim();
}

AdditiveCode AdditiveCode::quotient(const std::vector<int>& j_set) const {
    if (j_set.empty()) return *this;
    std::vector<int> J = j_set;
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    Subspace inter = Subspace::full(r_);
    for (int j : J) {
        if (j < 0 || j >= n_) throw std::invalid_argument("quotient: index out of range");
        inter = intersect(tower_.base(), inter, block_perp(j));
    }
    const int ell = inter.dim();
    const int n_new = n_ - static_cast<int>(J.size());
    std::vector<int> keep;
    for (int j = 0; j < n_; ++j)
        if (!std::binary_search(J.begin(), J.end(), j)) keep.push_back(j);
    // Rows of the new generator: u G_J for u running over a basis of the
    // intersection of the W_j.
    std::vector<long long> qgen;
    qgen.reserve(static_cast<size_t>(ell) * n_new);
    for (int i = 0; i < ell; ++i) {
        std::vector<int> u(inter.basis().row(i), inter.basis().row(i) + r_);
        auto c = encode(u);
        for (int j : keep) qgen.push_back(c[j]);
    }
    return AdditiveCode(tower_, n_new, ell, std::move(qgen));
}

bool AdditiveCode::non_obliterating(const std::vector<int>& j_set) const {
    return quotient_dimension(j_set) >= tower_.h();
}

namespace {
// DFS over index subsets in increasing order, tracking the running
// intersection; reports the first J (by DFS order) whose intersection
// dimension differs from r - |J| h.
bool condition_b_dfs(const Gf& F, const std::vector<Subspace>& w, int r, int h, int max_depth,
                     int start, const Subspace& current, std::vector<int>& chosen,
                     std::vector<int>& witness) {
    int depth = static_cast<int>(chosen.size());
    if (depth == max_depth) return false;
    for (int i = start; i < static_cast<int>(w.size()); ++i) {
        Subspace next = depth == 0 ? w[i] : intersect(F, current, w[i]);
        chosen.push_back(i);
        if (next.dim() != r - (depth + 1) * h) {
            witness = chosen;
            return true;
        }
        if (condition_b_dfs(F, w, r, h, max_depth, i + 1, next, chosen, witness)) return true;
        chosen.pop_back();
    }
    return false;
}
}  // namespace

std::optional<std::vector<int>> AdditiveCode::condition_b_violation() const {
    const auto& bc = blocks();
    std::vector<int> chosen, witness;
    if (condition_b_dfs(tower_.base(), bc.w, r_, tower_.h(), k() - 1, 0, Subspace(), chosen,
                        witness))
        return witness;
    return std::nullopt;
}

bool AdditiveCode::is_dually_qmds(const EnumCaps& caps, int workers) const {
    if (!is_qmds(caps, workers)) return false;
    if (is_faithful() && min_distance(caps, workers) > 1)
        return !condition_b_violation().has_value();
    // Degenerate cases (unfaithful or d = 1): fall back to the direct dual
    // distance, which stays within caps exactly when nh - r is small.
    dual();
    return dual_->is_qmds(caps, workers);
}

bool AdditiveCode::verify_system(const EnumCaps& caps, int workers) const {
    const int d = min_distance(caps, workers);
    const int q = tower_.q();
    long long total = pow_checked(q, r_, caps.vector_cap);
    if (total > caps.vector_cap) throw cap_exceeded("verify_system: hyperplane scan exceeds cap");
    const auto& bc = blocks();
    // U_i lies in the hyperplane w^perp iff w in W_i, so the hyperplane
    // counts are membership counts of covectors.
    std::vector<int> local_max(std::max(workers, 1), 0);
    std::vector<char> local_over(std::max(workers, 1), 0);
    parallel_ranges(total - 1, std::max(workers, 1), [&](long long lo, long long hi, int wk) {
        std::vector<int> w(r_);
        for (long long idx = lo; idx < hi; ++idx) {
            long long t = idx + 1;
            int first = -1;
            for (int i = 0; i < r_; ++i) {
                w[i] = static_cast<int>(t % q);
                t /= q;
                if (first < 0 && w[i] != 0) first = i;
            }
            if (w[first] != 1) continue;
            int cnt = 0;
            for (int j = 0; j < n_; ++j)
                if (contains(tower_.base(), bc.w[j], w)) ++cnt;
            if (cnt > local_max[wk]) local_max[wk] = cnt;
            if (cnt > n_ - d) local_over[wk] = 1;
        }
    });
    int max_cnt = *std::max_element(local_max.begin(), local_max.end());
    bool over = std::any_of(local_over.begin(), local_over.end(), [](char c) { return c != 0; });
    return !over && max_cnt == n_ - d;
}

CodeProfile AdditiveCode::profile(const EnumCaps& caps, int workers) const {
    CodeProfile p;
    p.d = min_distance(caps, workers);
    p.k = k();
    p.qmds = is_qmds(caps, workers);
    p.is_long = is_long(caps, workers);
    p.faithful = is_faithful();
    p.dually_qmds = is_dually_qmds(caps, workers);
    long long dual_total = pow_checked(q(), n_ * h() - r_, caps.vector_cap);
    if (dual_total <= caps.vector_cap) p.d_perp = dual_min_distance(caps, workers);
    return p;
}

bool AdditiveCode::same_codewords(const AdditiveCode& o) const {
    if (tower_ != o.tower_ || n_ != o.n_ || r_ != o.r_) return false;
    if (!gtilde_rref_)
        gtilde_rref_ =
            std::make_shared<const MatFq>(rref(tower_.base(), expanded_generator()));
    if (!o.gtilde_rref_)
        o.gtilde_rref_ =
            std::make_shared<const MatFq>(rref(o.tower_.base(), o.expanded_generator()));
    return *gtilde_rref_ == *o.gtilde_rref_;
}

std::string AdditiveCode::type_string(const EnumCaps& caps, int workers) const {
    const int g = r_ == 0 ? h() : std::gcd(r_, h());
    const int num = r_ / g, den = h() / g;
    std::ostringstream os;
    os << '[' << n_ << ", " << num;
    if (den != 1) os << '/' << den;
    os << ", " << min_distance(caps, workers) << "]_" << q() << '^' << h();
    return os.str();
}

AdditiveCode AdditiveCode::from_packing(const FieldTower& tower, const Packing& t_packing) {
    const Gf& F = tower.base();
    const int r = t_packing.ambient;
    const int h = tower.h();
    const int n = t_packing.size();
    std::vector<long long> gen(static_cast<size_t>(r) * n, 0);
    for (int j = 0; j < n; ++j) {
        const Subspace& W = t_packing.blocks[j];
        if (W.ambient() != r) throw std::invalid_argument("from_packing: ambient mismatch");
        if (W.dim() < r - h)
            throw std::invalid_argument("from_packing: block of dimension < r - h");
        Subspace U = perp(F, W);
        // Basis rows of U become the leading columns of expansion block j;
        // the remaining columns stay zero.
        for (int i = 0; i < r; ++i) {
            std::vector<int> coords(h, 0);
            for (int a = 0; a < U.dim(); ++a) coords[a] = U.basis().at(a, i);
            gen[static_cast<size_t>(i) * n + j] = tower.contract(coords);
        }
    }
    return AdditiveCode(tower, n, r, std::move(gen));
}

}  // namespace aqc
