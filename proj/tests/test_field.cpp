#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "aqc/field.hpp"

using namespace aqc;

namespace {

// Test-side irreducibility oracle for quadratics over F_p: reducible iff it
// has a root.
bool has_root_mod_p(const std::vector<int>& f, int p) {
    for (int x = 0; x < p; ++x) {
        long long v = 0, xp = 1;
        for (int c : f) {
            v = (v + c * xp) % p;
            xp = xp * x % p;
        }
        if (v == 0) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("tower moduli are the first irreducibles in ascending order") {
    // q = 4: of the four monic quadratics over F_2, y^2+y+1 is the only
    // irreducible one, so it must be chosen.
    FieldTower t4 = make_tower(2, 1, 2);
    CHECK(t4.ext_modulus() == std::vector<int>{1, 1, 1});
    CHECK(t4.q() == 2);
    CHECK(t4.qh() == 4);
    {
        // Oracle: scan the quadratics in ascending coefficient order.
        std::vector<int> first;
        for (int c0 = 0; c0 < 2 && first.empty(); ++c0)
            for (int c1 = 0; c1 < 2 && first.empty(); ++c1) {
                std::vector<int> f = {c0, c1, 1};
                if (!has_root_mod_p(f, 2)) first = f;
            }
        CHECK(t4.ext_modulus() == first);
    }

    // q = 9: root check over F_3 picks y^2 + 1.
    FieldTower t9 = make_tower(3, 1, 2);
    {
        std::vector<int> first;
        for (int c0 = 0; c0 < 3 && first.empty(); ++c0)
            for (int c1 = 0; c1 < 3 && first.empty(); ++c1) {
                std::vector<int> f = {c0, c1, 1};
                if (!has_root_mod_p(f, 3)) first = f;
            }
        CHECK(first == std::vector<int>{1, 0, 1});
        CHECK(t9.ext_modulus() == first);
    }

    // Trivial tower: degree-1 modulus y.
    FieldTower t2 = make_tower(2, 1, 1);
    CHECK(t2.h() == 1);
    CHECK(t2.qh() == 2);
    CHECK(t2.ext_modulus() == std::vector<int>{0, 1});

    CHECK_THROWS_AS(make_tower(4, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_tower(6, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_tower(1, 1, 2), std::invalid_argument);
}

TEST_CASE("F_4 arithmetic") {
    FieldTower t = make_tower(2, 1, 2);
    const long long xi = t.xi();
    CHECK(xi == 2);
    // xi^2 = xi + 1 after reduction mod y^2+y+1.
    CHECK(t.mul(xi, xi) == t.add(xi, 1));
    for (long long a = 0; a < 4; ++a) {
        CHECK(t.mul(a, 1) == a);
        CHECK(t.add(a, t.neg(a)) == 0);
        if (a != 0) CHECK(t.mul(a, t.inv(a)) == 1);
    }
    CHECK_THROWS_AS(t.inv(0), std::domain_error);
}

TEST_CASE("field axioms on small towers") {
    for (auto [p, e, h] : {std::tuple{2, 1, 2}, {2, 1, 3}, {3, 1, 2}, {2, 2, 2}, {5, 1, 2}}) {
        FieldTower t = make_tower(p, e, h);
        const long long n = t.qh();
        for (long long a = 0; a < n; ++a)
            for (long long b = 0; b < n; ++b) {
                CHECK(t.add(a, b) == t.add(b, a));
                CHECK(t.mul(a, b) == t.mul(b, a));
                CHECK(t.sub(t.add(a, b), b) == a);
            }
        // Associativity and distributivity, all triples for the smallest
        // towers only.
        if (n <= 9)
            for (long long a = 0; a < n; ++a)
                for (long long b = 0; b < n; ++b)
                    for (long long c = 0; c < n; ++c) {
                        CHECK(t.mul(a, t.mul(b, c)) == t.mul(t.mul(a, b), c));
                        CHECK(t.mul(a, t.add(b, c)) == t.add(t.mul(a, b), t.mul(a, c)));
                    }
        for (long long a = 1; a < n; ++a) CHECK(t.pow(a, n - 1) == 1);
        if (n > 2) CHECK(t.inv(t.xi()) == t.pow(t.xi(), n - 2));
    }
}

TEST_CASE("trace values and properties") {
    FieldTower t = make_tower(2, 1, 2);
    CHECK(t.trace(0) == 0);
    CHECK(t.trace(1) == 0);       // 1 + 1^2 in characteristic 2
    CHECK(t.trace(t.xi()) == 1);  // xi + xi^2 = xi + (xi + 1) = 1

    for (auto [p, e, h] : {std::tuple{2, 1, 2}, {2, 1, 3}, {3, 1, 2}, {2, 2, 2}, {2, 1, 6}}) {
        FieldTower tw = make_tower(p, e, h);
        const Gf& F = tw.base();
        const long long n = tw.qh();
        // F_q-linearity, exhaustively (q^h <= 64 for all towers above).
        for (int lam = 0; lam < F.q(); ++lam)
            for (long long a = 0; a < n; ++a)
                for (long long b = 0; b < n; b += 3) {
                    int lhs = tw.trace(tw.add(tw.scalar_mul(lam, a), b));
                    int rhs = F.add(F.mul(lam, tw.trace(a)), tw.trace(b));
                    CHECK(lhs == rhs);
                }
        // Surjectivity onto F_q.
        std::set<int> image;
        for (long long a = 0; a < n; ++a) image.insert(tw.trace(a));
        CHECK(static_cast<int>(image.size()) == F.q());
    }
}

TEST_CASE("frobenius fixes exactly F_q and permutes the field") {
    for (auto [p, e, h] : {std::tuple{2, 1, 2}, {3, 1, 2}, {2, 1, 3}, {2, 2, 2}}) {
        FieldTower t = make_tower(p, e, h);
        std::set<long long> image;
        int fixed = 0;
        for (long long a = 0; a < t.qh(); ++a) {
            long long fa = t.frobenius(a);
            image.insert(fa);
            if (fa == a) ++fixed;
            for (int lam = 0; lam < t.q(); ++lam)
                CHECK(t.frobenius(t.scalar_mul(lam, a)) == t.scalar_mul(lam, fa));
        }
        CHECK(static_cast<long long>(image.size()) == t.qh());
        CHECK(fixed == t.q());
    }
}

TEST_CASE("multiplicative group is cyclic of order q^h - 1") {
    for (auto [p, e, h] : {std::tuple{2, 1, 2}, {3, 1, 2}, {2, 2, 2}, {2, 1, 5}, {2, 1, 6}}) {
        FieldTower t = make_tower(p, e, h);
        const long long n = t.qh();
        bool found_generator = false;
        for (long long g = 2; g < n && !found_generator; ++g) {
            long long x = g;
            long long order = 1;
            while (x != 1) {
                x = t.mul(x, g);
                ++order;
            }
            if (order == n - 1) found_generator = true;
        }
        CHECK(found_generator);
    }
}

TEST_CASE("expand and contract are mutually inverse F_q-linear maps") {
    for (auto [p, e, h] : {std::tuple{2, 1, 2}, {3, 1, 2}, {2, 2, 3}}) {
        FieldTower t = make_tower(p, e, h);
        for (long long a = 0; a < t.qh(); ++a) {
            auto c = t.expand(a);
            CHECK(static_cast<int>(c.size()) == h);
            CHECK(t.contract(c) == a);
        }
        auto xi_coords = t.expand(t.xi());
        std::vector<int> expected(h, 0);
        expected[1] = 1;
        CHECK(xi_coords == expected);
        CHECK(t.expand(0) == std::vector<int>(h, 0));
        // Linearity over F_q.
        for (long long a = 0; a < t.qh(); a += 2)
            for (int lam = 0; lam < t.q(); ++lam) {
                auto lhs = t.expand(t.scalar_mul(lam, a));
                auto rhs = t.expand(a);
                for (int i = 0; i < h; ++i) rhs[i] = t.base().mul(lam, rhs[i]);
                CHECK(lhs == rhs);
            }
        CHECK_THROWS_AS(t.contract(std::vector<int>(h + 1, 0)), std::invalid_argument);
    }
    FieldTower t4 = make_tower(2, 1, 2);
    CHECK(t4.contract({1, 1}) == t4.add(1, t4.xi()));
}
