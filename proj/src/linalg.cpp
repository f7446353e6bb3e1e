#include "aqc/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace aqc {

MatFq MatFq::identity(int n) {
    MatFq I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

MatFq MatFq::transpose() const {
    MatFq T(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) T.at(j, i) = at(i, j);
    return T;
}

MatFq MatFq::stacked(const MatFq& other) const {
    if (cols != other.cols) throw std::invalid_argument("stack: column count mismatch");
    MatFq S(rows + other.rows, cols);
    std::copy(a.begin(), a.end(), S.a.begin());
    std::copy(other.a.begin(), other.a.end(), S.a.begin() + a.size());
    return S;
}

int rref_in_place(const Gf& F, MatFq& M) {
    int lead = 0;
    for (int col = 0; col < M.cols && lead < M.rows; ++col) {
        int piv = -1;
        for (int i = lead; i < M.rows; ++i)
            if (M.at(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != lead)
            for (int j = 0; j < M.cols; ++j) std::swap(M.at(piv, j), M.at(lead, j));
        int s = F.inv(M.at(lead, col));
        if (s != 1)
            for (int j = 0; j < M.cols; ++j) M.at(lead, j) = F.mul(s, M.at(lead, j));
        for (int i = 0; i < M.rows; ++i) {
            if (i == lead) continue;
            int c = M.at(i, col);
            if (c == 0) continue;
            for (int j = col; j < M.cols; ++j)
                M.at(i, j) = F.sub(M.at(i, j), F.mul(c, M.at(lead, j)));
        }
        ++lead;
    }
    return lead;
}

MatFq rref(const Gf& F, MatFq M) {
    rref_in_place(F, M);
    return M;
}

int rank(const Gf& F, MatFq M) { return rref_in_place(F, M); }

MatFq matmul(const Gf& F, const MatFq& A, const MatFq& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: dimension mismatch");
    MatFq C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            int aik = A.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < B.cols; ++j)
                C.at(i, j) = F.add(C.at(i, j), F.mul(aik, B.at(k, j)));
        }
    return C;
}

Subspace Subspace::full(int ambient) { return Subspace(ambient, MatFq::identity(ambient)); }

Subspace Subspace::from_span(const Gf& F, MatFq rows) {
    int r = rref_in_place(F, rows);
    MatFq basis(r, rows.cols);
    std::copy(rows.a.begin(), rows.a.begin() + static_cast<size_t>(r) * rows.cols,
              basis.a.begin());
    return Subspace(rows.cols, std::move(basis));
}

Subspace Subspace::from_rref(MatFq rows) {
    return Subspace(rows.cols, std::move(rows));
}

std::strong_ordering Subspace::operator<=>(const Subspace& o) const {
    if (auto c = ambient_ <=> o.ambient_; c != 0) return c;
    if (auto c = basis_.rows <=> o.basis_.rows; c != 0) return c;
    return basis_.a <=> o.basis_.a;
}

Subspace kernel(const Gf& F, const MatFq& M) {
    MatFq R = M;
    int rk = rref_in_place(F, R);
    // Pivot column of row i is its first nonzero entry.
    std::vector<int> pivot_col(rk);
    std::vector<bool> is_pivot(M.cols, false);
    for (int i = 0; i < rk; ++i) {
        int pc = 0;
        while (R.at(i, pc) == 0) ++pc;
        pivot_col[i] = pc;
        is_pivot[pc] = true;
    }
    MatFq basis(M.cols - rk, M.cols);
    int b = 0;
    for (int j = 0; j < M.cols; ++j) {
        if (is_pivot[j]) continue;
        basis.at(b, j) = 1;
        for (int i = 0; i < rk; ++i) basis.at(b, pivot_col[i]) = F.neg(R.at(i, j));
        ++b;
    }
    // Free-variable vectors are independent but not RREF-canonical; fix that.
    return Subspace::from_span(F, std::move(basis));
}

Subspace sum(const Gf& F, const Subspace& A, const Subspace& B) {
    if (A.ambient() != B.ambient()) throw std::invalid_argument("sum: ambient mismatch");
    return Subspace::from_span(F, A.basis().stacked(B.basis()));
}

Subspace perp(const Gf& F, const Subspace& A) {
    return kernel(F, A.basis());
}

Subspace intersect(const Gf& F, const Subspace& A, const Subspace& B) {
    if (A.ambient() != B.ambient()) throw std::invalid_argument("intersect: ambient mismatch");
    return perp(F, sum(F, perp(F, A), perp(F, B)));
}

int dot(const Gf& F, const std::vector<int>& u, const std::vector<int>& v) {
    if (u.size() != v.size()) throw std::invalid_argument("dot: dimension mismatch");
    int s = 0;
    for (size_t i = 0; i < u.size(); ++i) s = F.add(s, F.mul(u[i], v[i]));
    return s;
}

bool contains(const Gf& F, const Subspace& A, const std::vector<int>& v) {
    if (static_cast<int>(v.size()) != A.ambient())
        throw std::invalid_argument("contains: dimension mismatch");
    // Reduce v against the RREF basis; v is in A iff it reduces to zero.
    std::vector<int> w = v;
    const MatFq& B = A.basis();
    for (int i = 0; i < B.rows; ++i) {
        int pc = -1;
        for (int j = 0; j < B.cols; ++j)
            if (B.at(i, j) != 0) {
                pc = j;
                break;
            }
        int c = w[pc];
        if (c == 0) continue;
        for (int j = pc; j < B.cols; ++j) w[j] = F.sub(w[j], F.mul(c, B.at(i, j)));
    }
    return std::all_of(w.begin(), w.end(), [](int x) { return x == 0; });
}

bool contains_subspace(const Gf& F, const Subspace& A, const Subspace& B) {
    if (A.ambient() != B.ambient()) throw std::invalid_argument("ambient mismatch");
    for (int i = 0; i < B.dim(); ++i) {
        std::vector<int> v(B.basis().row(i), B.basis().row(i) + B.ambient());
        if (!contains(F, A, v)) return false;
    }
    return true;
}

// --- enumeration ----------------------------------------------------------

namespace {
long long pow_ll(long long q, int n) {
    long long r = 1;
    for (int i = 0; i < n; ++i) {
        if (r > (1LL << 62) / q) throw std::overflow_error("q^n overflow");
        r *= q;
    }
    return r;
}
}  // namespace

ElementStream::ElementStream(const Gf& F, const Subspace& A)
    : F_(&F), A_(&A), total_(pow_ll(F.q(), A.dim())) {}

bool ElementStream::next(std::vector<int>& out) {
    if (idx_ >= total_) return false;
    out.assign(A_->ambient(), 0);
    long long t = idx_;
    for (int i = 0; i < A_->dim(); ++i) {
        int c = static_cast<int>(t % F_->q());
        t /= F_->q();
        if (c != 0)
            for (int j = 0; j < A_->ambient(); ++j)
                out[j] = F_->add(out[j], F_->mul(c, A_->basis().at(i, j)));
    }
    ++idx_;
    return true;
}

PointStream::PointStream(const Gf& F, int m, const EnumCaps& caps)
    : F_(&F), m_(m), idx_(1) {
    total_ = pow_ll(F.q(), m);
    points_ = (total_ - 1) / (F.q() - 1);
    if (points_ > caps.vector_cap)
        throw cap_exceeded("projective point stream of size " + std::to_string(points_) +
                           " exceeds cap " + std::to_string(caps.vector_cap));
}

bool PointStream::next(std::vector<int>& out) {
    while (idx_ < total_) {
        long long t = idx_++;
        out.assign(m_, 0);
        int first = -1;
        for (int i = 0; i < m_; ++i) {
            out[i] = static_cast<int>(t % F_->q());
            t /= F_->q();
            if (first < 0 && out[i] != 0) first = i;
        }
        if (out[first] == 1) return true;
    }
    return false;
}

std::vector<int> projective_rep(const Gf& F, std::vector<int> v) {
    for (int x : v)
        if (x != 0) {
            if (x != 1) {
                int s = F.inv(x);
                for (int& y : v) y = F.mul(s, y);
            }
            return v;
        }
    return v;
}

long long gaussian_binomial(long long q, int m, int t) {
    if (t < 0 || t > m) return 0;
    // q-Pascal recurrence [m,t] = [m-1,t-1] + q^t [m-1,t]; exact integers all
    // the way, with overflow detection in __int128.
    const __int128 limit = (__int128)9223372036854775807LL;
    std::vector<__int128> row(t + 1, 0);
    row[0] = 1;
    for (int mm = 1; mm <= m; ++mm) {
        for (int tt = std::min(mm, t); tt >= 1; --tt) {
            __int128 qe = 1;
            for (int i = 0; i < tt; ++i) {
                qe *= q;
                if (qe > limit) throw std::overflow_error("gaussian binomial overflow");
            }
            // row entries are kept <= limit, qe <= limit, so the product
            // fits __int128 and the check below suffices.
            __int128 v = row[tt - 1] + qe * row[tt];
            if (v > limit) throw std::overflow_error("gaussian binomial overflow");
            row[tt] = v;
        }
    }
    return static_cast<long long>(row[t]);
}

SubspaceStream::SubspaceStream(const Gf& F, int m, int t, const EnumCaps& caps)
    : F_(&F), m_(m), t_(t) {
    if (t < 0 || t > m) throw std::invalid_argument("subspace stream: need 0 <= t <= m");
    try {
        total_ = gaussian_binomial(F.q(), m, t);
    } catch (const std::overflow_error&) {
        throw cap_exceeded("subspace stream: Gaussian binomial exceeds any representable cap");
    }
    if (total_ > caps.subspace_cap)
        throw cap_exceeded("subspace stream of size " + std::to_string(total_) +
                           " exceeds cap " + std::to_string(caps.subspace_cap));
    pivots_.resize(t);
    for (int i = 0; i < t; ++i) pivots_[i] = i;
    rebuild_free();
}

void SubspaceStream::rebuild_free() {
    free_pos_.clear();
    free_total_ = 1;
    free_idx_ = 0;
    for (int r = 0; r < t_; ++r)
        for (int j = pivots_[r] + 1; j < m_; ++j)
            if (std::find(pivots_.begin(), pivots_.end(), j) == pivots_.end()) {
                free_pos_.emplace_back(r, j);
                free_total_ *= F_->q();
            }
}

bool SubspaceStream::advance_pivots() {
    // Next t-combination of {0..m-1} in lexicographic order.
    int i = t_ - 1;
    while (i >= 0 && pivots_[i] == m_ - t_ + i) --i;
    if (i < 0) return false;
    ++pivots_[i];
    for (int j = i + 1; j < t_; ++j) pivots_[j] = pivots_[j - 1] + 1;
    rebuild_free();
    return true;
}

bool SubspaceStream::next(Subspace& out) {
    if (done_) return false;
    if (t_ == 0) {
        out = Subspace::zero(m_);
        done_ = true;
        return true;
    }
    if (free_idx_ >= free_total_) {
        if (!advance_pivots()) {
            done_ = true;
            return false;
        }
    }
    MatFq M(t_, m_);
    for (int i = 0; i < t_; ++i) M.at(i, pivots_[i]) = 1;
    long long x = free_idx_++;
    for (auto& [r, c] : free_pos_) {
        M.at(r, c) = static_cast<int>(x % F_->q());
        x /= F_->q();
    }
    out = Subspace::from_rref(std::move(M));
    return true;
}

void parallel_ranges(long long total, int workers,
                     const std::function<void(long long, long long, int)>& fn) {
    if (workers <= 1 || total < 2 * workers) {
        fn(0, total, 0);
        return;
    }
    std::vector<std::thread> pool;
    long long chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        long long lo = w * chunk;
        long long hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(fn, lo, hi, w);
    }
    for (auto& th : pool) th.join();
}

}  // namespace aqc
