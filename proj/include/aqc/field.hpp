#pragma once

#include <memory>
#include <string>
#include <vector>

#include "aqc/common.hpp"

namespace aqc {

// The base field F_q = F_p[x]/(f), q = p^e. Elements are packed into an int
// in [0, q): the element with F_p digits (c_0, ..., c_{e-1}), coefficients
// ascending, has index sum_i c_i * p^i. Arithmetic goes through tables built
// once at construction, so copies are cheap (shared tables) and all
// operations are pure.
class Gf {
public:
    // f: monic irreducible of degree e over F_p, coefficients ascending
    // (f.back() == 1). Irreducibility is re-verified by trial division.
    Gf(int p, int e, std::vector<int> f);

    // Deterministic field: picks the lexicographically smallest monic
    // irreducible f (coefficient tuples (c_0,...,c_{e-1}) in ascending
    // lexicographic order).
    static Gf make(int p, int e);

    int p() const { return p_; }
    int e() const { return e_; }
    int q() const { return q_; }
    const std::vector<int>& modulus() const { return f_; }

    int add(int a, int b) const { return t_->add[a * q_ + b]; }
    int sub(int a, int b) const { return t_->add[a * q_ + t_->neg[b]]; }
    int neg(int a) const { return t_->neg[a]; }
    int mul(int a, int b) const { return t_->mul[a * q_ + b]; }
    int inv(int a) const;
    int pow(int a, long long k) const;

    // F_p digits of an element, ascending; inverse of from_digits.
    std::vector<int> digits(int a) const;
    int from_digits(const std::vector<int>& d) const;

    bool operator==(const Gf& o) const {
        return p_ == o.p_ && e_ == o.e_ && f_ == o.f_;
    }
    bool operator!=(const Gf& o) const { return !(*this == o); }

private:
    struct Tables {
        std::vector<int> add, mul, neg, inv;
    };
    int p_, e_, q_;
    std::vector<int> f_;
    std::shared_ptr<const Tables> t_;
};

// The extension tower F_p <= F_q <= F_{q^h}, with F_{q^h} = F_q[y]/(g) and
// basis B = {1, xi, ..., xi^{h-1}} where xi is the residue class of y.
// Elements of F_{q^h} are packed into a long long in [0, q^h): digit i in
// base q (an F_q index) is the coefficient of xi^i. No tables at this layer;
// multiplication reduces modulo g directly.
class FieldTower {
public:
    FieldTower(Gf base, int h, std::vector<int> g);

    const Gf& base() const { return base_; }
    int p() const { return base_.p(); }
    int e() const { return base_.e(); }
    int q() const { return base_.q(); }
    int h() const { return h_; }
    long long qh() const { return qh_; }
    const std::vector<int>& ext_modulus() const { return g_; }

    // Residue class of y mod g: the basis element xi. For h == 1 this is
    // -g_0, the root of the (linear) modulus.
    long long xi() const;

    long long add(long long a, long long b) const;
    long long sub(long long a, long long b) const;
    long long neg(long long a) const;
    long long mul(long long a, long long b) const;
    long long inv(long long a) const;
    long long pow(long long a, long long k) const;
    long long frobenius(long long a) const { return pow(a, q()); }

    // Scalar action of F_q on F_{q^h} (digit-wise).
    long long scalar_mul(int s, long long a) const;

    // Lift an F_q element into F_{q^h} (constant polynomial).
    long long embed(int s) const { return s; }

    // Tr_{q^h/q}(a) = sum of the h Frobenius conjugates; always lands in F_q
    // and is returned as an F_q index.
    int trace(long long a) const;

    // Coordinates of a with respect to B, ascending; exactly h of them.
    std::vector<int> expand(long long a) const;
    long long contract(const std::vector<int>& coords) const;

    bool operator==(const FieldTower& o) const {
        return base_ == o.base_ && h_ == o.h_ && g_ == o.g_;
    }
    bool operator!=(const FieldTower& o) const { return !(*this == o); }

private:
    Gf base_;
    int h_;
    long long qh_;
    std::vector<int> g_;  // h+1 F_q indexes, ascending, g_.back() == 1
};

// Builds the tower F_p <= F_{p^e} <= F_{(p^e)^h} with deterministically
// chosen moduli (lexicographically smallest monic irreducibles at both
// layers). Rejects non-prime p.
FieldTower make_tower(int p, int e, int h);

// Smallest monic irreducible of degree n over F_q, coefficients ascending as
// F_q indexes (last entry 1). Degree-1 polynomials are y + c with c minimal,
// i.e. {0, 1}.
std::vector<int> smallest_irreducible(const Gf& field, int n);

bool is_prime(long long n);

}  // namespace aqc
