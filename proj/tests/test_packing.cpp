#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "aqc/field.hpp"
#include "aqc/linalg.hpp"
#include "aqc/packing.hpp"

using namespace aqc;

namespace {

Subspace span_of(const Gf& F, std::vector<std::vector<int>> rows) {
    MatFq M(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) M.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return Subspace::from_span(F, M);
}

// Test-side membership counting, independent of the library's two
// verification algorithms.
std::map<std::vector<int>, int> point_counts(const Gf& F, const Packing& P) {
    std::map<std::vector<int>, int> counts;
    PointStream ps(F, P.ambient);
    std::vector<int> v;
    while (ps.next(v)) {
        int c = 0;
        for (const auto& B : P.blocks)
            if (contains(F, B, v)) ++c;
        if (c > 0) counts[v] = c;
    }
    return counts;
}

}  // namespace

TEST_CASE("lambda packing verification") {
    Gf F = Gf::make(2, 1);
    // A partial spread is a 1-packing.
    Packing sp = desarguesian_spread(F, 4, 2);
    CHECK(!lambda_packing_violation(F, sp, 1).has_value());
    CHECK(verify_lambda_packing(F, sp, 1));
    CHECK(sp.lambda == 1);

    // Duplicate a block: no longer a 1-packing, and the witness names the
    // duplicated point.
    Packing dup = sp;
    dup.blocks.push_back(dup.blocks[0]);
    auto v = lambda_packing_violation(F, dup, 1);
    REQUIRE(v.has_value());
    CHECK(v->block_indexes.size() == 2);
    for (int b : v->block_indexes) CHECK(contains(F, dup.blocks[b], v->point));

    // Cross-check against the independent test-side counter on random
    // packings, for lambda = 1 and 2.
    std::mt19937 rng(17);
    for (int it = 0; it < 20; ++it) {
        Packing P;
        P.ambient = 4;
        SubspaceStream ss(F, 4, 2);
        std::vector<Subspace> all;
        Subspace S;
        while (ss.next(S)) all.push_back(S);
        for (int b = 0; b < 4; ++b) P.blocks.push_back(all[rng() % all.size()]);
        auto counts = point_counts(F, P);
        for (int lambda : {1, 2, 3}) {
            int max_count = 0;
            for (auto& [pt, c] : counts) max_count = std::max(max_count, c);
            CHECK(lambda_packing_violation(F, P, lambda).has_value() == (max_count > lambda));
        }
    }
}

TEST_CASE("partial spreads and bounds") {
    Gf F = Gf::make(2, 1);
    CHECK(spread_upper_bound(2, 3, 2) == 2);
    CHECK(spread_upper_bound(2, 4, 2) == 5);
    CHECK_THROWS_AS(spread_upper_bound(2, 3, 3), std::invalid_argument);

    Packing single;
    single.ambient = 4;
    single.blocks.push_back(span_of(F, {{1, 0, 0, 0}, {0, 1, 0, 0}}));
    CHECK(is_partial_spread(F, single, 2));

    Packing sp = desarguesian_spread(F, 4, 2);
    CHECK(sp.size() == 5);
    CHECK(is_partial_spread(F, sp, 2));
    // Perfect cover: every nonzero vector exactly once.
    auto counts = point_counts(F, sp);
    CHECK(counts.size() == 15);
    for (auto& [pt, c] : counts) CHECK(c == 1);

    CHECK(desarguesian_spread(F, 2, 1).size() == 3);
    CHECK(desarguesian_spread(F, 6, 3).size() == 9);
    CHECK_THROWS_AS(desarguesian_spread(F, 5, 2), std::invalid_argument);
}

TEST_CASE("beutelspacher partial spreads match the size formula") {
    Gf F2 = Gf::make(2, 1);
    // (2,3,2): a=1, b=1, empty sum -> size 1.
    CHECK(beutelspacher_spread(F2, 3, 2).size() == 1);
    // (2,5,2): 2^3 + 1 = 9.
    Packing s52 = beutelspacher_spread(F2, 5, 2);
    CHECK(s52.size() == 9);
    CHECK(is_partial_spread(F2, s52, 2));
    CHECK(s52.size() <= spread_upper_bound(2, 5, 2));
    // (2,7,3): 2^4 + 1 = 17.
    Packing s73 = beutelspacher_spread(F2, 7, 3);
    CHECK(s73.size() == 17);
    CHECK(is_partial_spread(F2, s73, 3));
    // (3,5,2): 3^3 + 1 = 28.
    Gf F3 = Gf::make(3, 1);
    Packing s352 = beutelspacher_spread(F3, 5, 2);
    CHECK(s352.size() == 28);
    CHECK(is_partial_spread(F3, s352, 2));
    CHECK_THROWS_AS(beutelspacher_spread(F2, 4, 2), std::invalid_argument);
}

TEST_CASE("perps of a partial spread meet in dimension r - 2t") {
    Gf F = Gf::make(2, 1);
    Packing sp = desarguesian_spread(F, 6, 2);
    CHECK(sp.size() == 21);
    std::vector<Subspace> perps;
    for (const auto& B : sp.blocks) perps.push_back(perp(F, B));
    for (size_t i = 0; i < perps.size(); i += 5)
        for (size_t j = i + 1; j < perps.size(); j += 3)
            CHECK(intersect(F, perps[i], perps[j]).dim() == 6 - 2 * 2);
}

TEST_CASE("extend search") {
    Gf F = Gf::make(2, 1);
    // The six blocks of the A-family packing at (2,2,2,1) are six of the
    // seven points of F_2^3; the missing one is (1,1,0).
    Packing six;
    six.ambient = 3;
    for (auto v : std::vector<std::vector<int>>{
             {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 0, 0}, {0, 1, 0}})
        six.blocks.push_back(span_of(F, {v}));
    auto found = extend_search(F, six, 1, 1);
    REQUIRE(found.has_value());
    CHECK(contains(F, *found, {1, 1, 0}));
    CHECK(found->dim() == 1);

    // Removing a block from a perfect spread: the search re-finds exactly it.
    Packing sp = desarguesian_spread(F, 4, 2);
    Subspace removed = sp.blocks[3];
    sp.blocks.erase(sp.blocks.begin() + 3);
    sp.lambda.reset();
    auto re = extend_search(F, sp, 1, 2);
    REQUIRE(re.has_value());
    CHECK(*re == removed);

    // A full spread admits no extension.
    Packing full = desarguesian_spread(F, 4, 2);
    CHECK(!extend_search(F, full, 1, 2).has_value());

    // Worker count does not change the outcome.
    auto re2 = extend_search(F, sp, 1, 2, {}, 3);
    REQUIRE(re2.has_value());
    CHECK(*re2 == removed);

    // Not a packing to begin with: rejected.
    Packing bad = desarguesian_spread(F, 4, 2);
    bad.blocks.push_back(bad.blocks[0]);
    CHECK_THROWS_AS(extend_search(F, bad, 1, 2), std::invalid_argument);

    // Cap.
    EnumCaps tight;
    tight.subspace_cap = 3;
    CHECK_THROWS_AS(extend_search(F, six, 1, 1, tight), cap_exceeded);
}
