#include "aqc/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace aqc {

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// Dense polynomial arithmetic over an abstract coefficient field. The field
// is any type with add/sub/neg/mul/inv on int indexes and a q() size; used
// both for F_p (via the ZpCtx shim below) and for F_q (via Gf itself).

struct ZpCtx {
    int p;
    int q() const { return p; }
    int add(int a, int b) const { return (a + b) % p; }
    int sub(int a, int b) const { return (a - b % p + p) % p; }
    int neg(int a) const { return a == 0 ? 0 : p - a; }
    int mul(int a, int b) const { return (a * b) % p; }
    int inv(int a) const {
        if (a == 0) throw std::domain_error("division by zero in F_p");
        // p is small; scan.
        for (int x = 1; x < p; ++x)
            if (a * x % p == 1) return x;
        throw std::logic_error("F_p inverse not found");
    }
};

inline void poly_trim(std::vector<int>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

template <class F>
std::vector<int> poly_mul(const F& k, const std::vector<int>& a, const std::vector<int>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = k.add(c[i + j], k.mul(a[i], b[j]));
    }
    poly_trim(c);
    return c;
}

// Remainder of a modulo the monic polynomial m.
template <class F>
std::vector<int> poly_mod(const F& k, std::vector<int> a, const std::vector<int>& m) {
    poly_trim(a);
    const size_t dm = m.size() - 1;
    while (a.size() > dm) {
        int lead = a.back();
        size_t shift = a.size() - 1 - dm;
        if (lead != 0)
            for (size_t i = 0; i < dm; ++i)
                a[shift + i] = k.sub(a[shift + i], k.mul(lead, m[i]));
        a.pop_back();
        poly_trim(a);
    }
    return a;
}

template <class F>
std::vector<int> poly_scale(const F& k, std::vector<int> a, int s) {
    for (int& c : a) c = k.mul(c, s);
    poly_trim(a);
    return a;
}

template <class F>
std::vector<int> poly_sub(const F& k, std::vector<int> a, const std::vector<int>& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = k.sub(a[i], b[i]);
    poly_trim(a);
    return a;
}

// Irreducibility by trial division: a polynomial of degree n >= 2 with a
// factor has a monic factor of degree <= n/2.
template <class F>
bool poly_irreducible(const F& k, const std::vector<int>& f) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n <= 0) return false;
    if (n == 1) return true;
    for (int d = 1; 2 * d <= n; ++d) {
        // All monic polynomials of degree d, counter order over low coeffs.
        long long total = 1;
        for (int i = 0; i < d; ++i) total *= k.q();
        for (long long idx = 0; idx < total; ++idx) {
            std::vector<int> g(d + 1, 0);
            long long t = idx;
            for (int i = 0; i < d; ++i) {
                g[i] = static_cast<int>(t % k.q());
                t /= k.q();
            }
            g[d] = 1;
            if (poly_mod<F>(k, f, g).empty()) return false;
        }
    }
    return true;
}

template <class F>
std::vector<int> smallest_irreducible_impl(const F& k, int n) {
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= k.q();
    for (long long idx = 0; idx < total; ++idx) {
        std::vector<int> f(n + 1, 0);
        long long t = idx;
        for (int i = 0; i < n; ++i) {
            f[i] = static_cast<int>(t % k.q());
            t /= k.q();
        }
        f[n] = 1;
        if (poly_irreducible<F>(k, f)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

// Inverse of a modulo the monic irreducible m, by the extended Euclidean
// algorithm on polynomial representatives.
template <class F>
std::vector<int> ext_gcd_inverse(const F& k, std::vector<int> a, const std::vector<int>& m) {
    poly_trim(a);
    if (a.empty()) throw std::domain_error("division by zero in extension field");
    std::vector<int> r_prev = m, r_cur = a;
    std::vector<int> s_prev = {}, s_cur = {1};
    while (!r_cur.empty()) {
        // Divide r_prev by r_cur: r_prev = q * r_cur + rem.
        std::vector<int> quot;
        std::vector<int> rem = r_prev;
        int lead_inv = k.inv(r_cur.back());
        while (rem.size() >= r_cur.size() && !rem.empty()) {
            size_t shift = rem.size() - r_cur.size();
            int c = k.mul(rem.back(), lead_inv);
            if (quot.size() < shift + 1) quot.resize(shift + 1, 0);
            quot[shift] = k.add(quot[shift], c);
            std::vector<int> term(shift + 1, 0);
            term[shift] = c;
            rem = poly_sub<F>(k, rem, poly_mul<F>(k, term, r_cur));
        }
        std::vector<int> s_next = poly_sub<F>(k, s_prev, poly_mul<F>(k, quot, s_cur));
        r_prev = std::move(r_cur);
        r_cur = std::move(rem);
        s_prev = std::move(s_cur);
        s_cur = std::move(s_next);
        if (r_prev.size() == 1) break;  // gcd reached a nonzero constant
    }
    if (r_prev.size() != 1)
        throw std::logic_error("non-invertible element: modulus not irreducible?");
    std::vector<int> out = poly_scale<F>(k, s_prev, k.inv(r_prev[0]));
    return poly_mod<F>(k, out, m);
}
}  // namespace

Gf::Gf(int p, int e, std::vector<int> f) : p_(p), e_(e), f_(std::move(f)) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (e < 1) throw std::invalid_argument("extension degree e must be >= 1");
    if (static_cast<int>(f_.size()) != e + 1 || f_.back() != 1)
        throw std::invalid_argument("f must be monic of degree e");
    for (int c : f_)
        if (c < 0 || c >= p) throw std::invalid_argument("f coefficients must lie in [0, p)");
    long long qq = 1;
    for (int i = 0; i < e; ++i) {
        qq *= p;
        if (qq > 4096) throw std::invalid_argument("field size q = p^e above desk-scale limit 4096");
    }
    q_ = static_cast<int>(qq);
    ZpCtx zp{p};
    if (!poly_irreducible(zp, f_)) throw std::invalid_argument("f is reducible over F_p");

    auto tab = std::make_shared<Tables>();
    tab->add.resize(static_cast<size_t>(q_) * q_);
    tab->mul.resize(static_cast<size_t>(q_) * q_);
    tab->neg.resize(q_);
    tab->inv.assign(q_, -1);
    auto decode = [&](int a) {
        std::vector<int> d(e_, 0);
        for (int i = 0; i < e_; ++i) {
            d[i] = a % p;
            a /= p;
        }
        return d;
    };
    auto encode = [&](const std::vector<int>& d) {
        int a = 0;
        for (int i = e_ - 1; i >= 0; --i) a = a * p + (i < static_cast<int>(d.size()) ? d[i] : 0);
        return a;
    };
    for (int a = 0; a < q_; ++a) {
        auto da = decode(a);
        std::vector<int> na(e_);
        for (int i = 0; i < e_; ++i) na[i] = zp.neg(da[i]);
        tab->neg[a] = encode(na);
        for (int b = 0; b < q_; ++b) {
            auto db = decode(b);
            std::vector<int> s(e_);
            for (int i = 0; i < e_; ++i) s[i] = zp.add(da[i], db[i]);
            tab->add[a * q_ + b] = encode(s);
            auto prod = poly_mod(zp, poly_mul(zp, da, db), f_);
            tab->mul[a * q_ + b] = encode(prod);
        }
    }
    for (int a = 1; a < q_; ++a) {
        auto ia = ext_gcd_inverse(zp, decode(a), f_);
        tab->inv[a] = encode(ia);
    }
    t_ = std::move(tab);
}

Gf Gf::make(int p, int e) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (e < 1) throw std::invalid_argument("extension degree e must be >= 1");
    ZpCtx zp{p};
    return Gf(p, e, smallest_irreducible_impl(zp, e));
}

int Gf::inv(int a) const {
    if (a == 0) throw std::domain_error("division by zero in F_q");
    return t_->inv[a];
}

int Gf::pow(int a, long long k) const {
    if (k < 0) return pow(inv(a), -k);
    int r = 1;
    int base = a;
    while (k > 0) {
        if (k & 1) r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

std::vector<int> Gf::digits(int a) const {
    std::vector<int> d(e_);
    for (int i = 0; i < e_; ++i) {
        d[i] = a % p_;
        a /= p_;
    }
    return d;
}

int Gf::from_digits(const std::vector<int>& d) const {
    if (static_cast<int>(d.size()) != e_)
        throw std::invalid_argument("expected exactly e F_p digits");
    int a = 0;
    for (int i = e_ - 1; i >= 0; --i) {
        if (d[i] < 0 || d[i] >= p_) throw std::invalid_argument("F_p digit out of range");
        a = a * p_ + d[i];
    }
    return a;
}

FieldTower::FieldTower(Gf base, int h, std::vector<int> g)
    : base_(std::move(base)), h_(h), g_(std::move(g)) {
    if (h < 1) throw std::invalid_argument("extension degree h must be >= 1");
    if (static_cast<int>(g_.size()) != h + 1 || g_.back() != 1)
        throw std::invalid_argument("g must be monic of degree h");
    for (int c : g_)
        if (c < 0 || c >= base_.q()) throw std::invalid_argument("g coefficients must lie in F_q");
    if (!poly_irreducible(base_, g_)) throw std::invalid_argument("g is reducible over F_q");
    qh_ = 1;
    for (int i = 0; i < h; ++i) {
        qh_ *= base_.q();
        if (qh_ > (1LL << 40)) throw std::invalid_argument("q^h above desk-scale limit");
    }
}

long long FieldTower::xi() const {
    if (h_ >= 2) return q();
    return base_.neg(g_[0]);
}

std::vector<int> FieldTower::expand(long long a) const {
    if (a < 0 || a >= qh_) throw std::invalid_argument("F_{q^h} index out of range");
    std::vector<int> d(h_);
    for (int i = 0; i < h_; ++i) {
        d[i] = static_cast<int>(a % q());
        a /= q();
    }
    return d;
}

long long FieldTower::contract(const std::vector<int>& coords) const {
    if (static_cast<int>(coords.size()) != h_)
        throw std::invalid_argument("expected exactly h F_q coordinates");
    long long a = 0;
    for (int i = h_ - 1; i >= 0; --i) {
        if (coords[i] < 0 || coords[i] >= q())
            throw std::invalid_argument("F_q coordinate out of range");
        a = a * q() + coords[i];
    }
    return a;
}

long long FieldTower::add(long long a, long long b) const {
    long long r = 0, mult = 1;
    for (int i = 0; i < h_; ++i) {
        r += mult * base_.add(static_cast<int>(a % q()), static_cast<int>(b % q()));
        a /= q();
        b /= q();
        mult *= q();
    }
    return r;
}

long long FieldTower::neg(long long a) const {
    long long r = 0, mult = 1;
    for (int i = 0; i < h_; ++i) {
        r += mult * base_.neg(static_cast<int>(a % q()));
        a /= q();
        mult *= q();
    }
    return r;
}

long long FieldTower::sub(long long a, long long b) const { return add(a, neg(b)); }

long long FieldTower::mul(long long a, long long b) const {
    auto prod = poly_mod(base_, poly_mul(base_, expand(a), expand(b)), g_);
    prod.resize(h_, 0);
    return contract(prod);
}

long long FieldTower::scalar_mul(int s, long long a) const {
    long long r = 0, mult = 1;
    for (int i = 0; i < h_; ++i) {
        r += mult * base_.mul(s, static_cast<int>(a % q()));
        a /= q();
        mult *= q();
    }
    return r;
}

long long FieldTower::inv(long long a) const {
    auto ia = ext_gcd_inverse(base_, expand(a), g_);
    ia.resize(h_, 0);
    return contract(ia);
}

long long FieldTower::pow(long long a, long long k) const {
    if (k < 0) return pow(inv(a), -k);
    long long r = 1, base = a;
    while (k > 0) {
        if (k & 1) r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

int FieldTower::trace(long long a) const {
    long long t = 0, conj = a;
    for (int i = 0; i < h_; ++i) {
        t = add(t, conj);
        conj = frobenius(conj);
    }
    auto d = expand(t);
    for (int i = 1; i < h_; ++i)
        if (d[i] != 0) throw std::logic_error("trace left F_q: field arithmetic bug");
    return d[0];
}

std::vector<int> smallest_irreducible(const Gf& field, int n) {
    return smallest_irreducible_impl(field, n);
}

FieldTower make_tower(int p, int e, int h) {
    Gf base = Gf::make(p, e);
    return FieldTower(base, h, smallest_irreducible(base, h));
}

}  // namespace aqc
