#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "aqc/code.hpp"
#include "aqc/constructions.hpp"
#include "aqc/field.hpp"
#include "aqc/geometry.hpp"
#include "aqc/packing.hpp"

using namespace aqc;

TEST_CASE("projective point counts") {
    CHECK(projective_point_count(2, 2) == 7);
    CHECK(projective_point_count(2, 0) == 1);
    CHECK(projective_point_count(3, 2) == 13);
    CHECK(projective_point_count(3, 0) == 1);
    CHECK(projective_point_count(2, 4) == 31);
}

TEST_CASE("dual arc axioms") {
    Gf F = Gf::make(2, 1);
    // Two 3-spaces of F_2^5 sharing a plane are not a dual arc.
    MatFq a(3, 5), b(3, 5);
    for (int i = 0; i < 3; ++i) a.at(i, i) = 1;
    b.at(0, 0) = 1;
    b.at(1, 1) = 1;
    b.at(2, 3) = 1;
    std::string why;
    CHECK_FALSE(is_dual_arc(F, {Subspace::from_span(F, a), Subspace::from_span(F, b)}, &why));
    CHECK(why.find("dimension 2") != std::string::npos);
}

TEST_CASE("search finds the 8-block hyperoval for q = 2, h = 2") {
    Gf F = Gf::make(2, 1);
    DhoSearchResult res = search_dho(F, 2);
    REQUIRE(res.found.has_value());
    CHECK(res.found->size() == 8);  // theta_2(2) + 1
    std::string why;
    CHECK(is_dual_hyperoval(F, *res.found, &why));

    // Oversized sets are rejected before any intersection work.
    auto nine = *res.found;
    nine.push_back(nine.front());
    CHECK_FALSE(is_dual_hyperoval(F, nine, &why));
    CHECK(why.find("more blocks") != std::string::npos);

    // Dropping a block leaves a dual arc of size 7 (still spanning).
    auto seven = *res.found;
    seven.pop_back();
    CHECK(is_dual_arc(F, seven, &why));
    CHECK_FALSE(is_dual_hyperoval(F, seven, &why));
}

TEST_CASE("hyperoval to code and back") {
    Gf F = Gf::make(2, 1);
    FieldTower T = make_tower(2, 1, 2);
    DhoSearchResult res = search_dho(F, 2);
    REQUIRE(res.found.has_value());

    AdditiveCode code = dual_arc_to_code(T, *res.found);
    CHECK(code.n() == 8);
    CHECK(code.r() == 5);
    CHECK(code.min_distance() == 6);
    CHECK(code.type_string() == "[8, 5/2, 6]_2^2");
    CHECK(code.is_dually_qmds());
    CHECK(code.is_faithful());

    // The dual attains the paper's parameters and the k bound.
    AdditiveCode dual = code.dual();
    CHECK(dual.r() == 11);
    CHECK(dual.min_distance() == 3);
    CHECK(dual.is_qmds());
    CHECK(dual.k() == dually_k_bound(2, 2, 1).value);

    // Round trip through T(C).
    auto blocks = code_to_dual_arc(code);
    auto sorted = [](std::vector<Subspace> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(sorted(blocks) == sorted(*res.found));

    // A sub-hyperoval arc still gives a dually QMDS code of smaller length.
    auto seven = *res.found;
    seven.pop_back();
    AdditiveCode sub = dual_arc_to_code(T, seven);
    CHECK(sub.n() == 7);
    CHECK(sub.min_distance() == 5);
    CHECK(sub.is_dually_qmds());

    // The arc's blocks form a 2-packing (triple-trivial), cross-checked
    // against the packing verifier.
    Packing P;
    P.ambient = 5;
    P.blocks = *res.found;
    CHECK(verify_lambda_packing(F, P, 2));

    // Condition (b) holds through |J| = 2 on the arc code.
    CHECK_FALSE(code.condition_b_violation().has_value());
}

TEST_CASE("quotients of the hyperoval code stay dually QMDS") {
    Gf F = Gf::make(2, 1);
    FieldTower T = make_tower(2, 1, 2);
    DhoSearchResult res = search_dho(F, 2);
    REQUIRE(res.found.has_value());
    AdditiveCode code = dual_arc_to_code(T, *res.found);
    for (int j = 0; j < code.n(); ++j) {
        AdditiveCode Q = code.quotient({j});
        CHECK(Q.r() == code.r() - code.h());
        CHECK(Q.is_dually_qmds());
    }
    AdditiveCode Q2 = code.quotient({0, 3});
    CHECK(Q2.r() == 1);
    CHECK(Q2.is_qmds());
}

TEST_CASE("completion re-finds a removed block") {
    Gf F = Gf::make(2, 1);
    DhoSearchResult res = search_dho(F, 2);
    REQUIRE(res.found.has_value());
    auto sorted = [](std::vector<Subspace> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    // Remove each block in turn; the seeded search completes the arc.
    for (size_t drop = 0; drop < res.found->size(); drop += 3) {
        auto seed = *res.found;
        seed.erase(seed.begin() + drop);
        DhoSearchResult comp = complete_dho(F, 2, seed);
        REQUIRE(comp.found.has_value());
        CHECK(is_dual_hyperoval(F, *comp.found));
    }
    // Completing a full hyperoval returns it unchanged.
    DhoSearchResult full = complete_dho(F, 2, *res.found);
    REQUIRE(full.found.has_value());
    CHECK(sorted(*full.found) == sorted(*res.found));
    // Seeds violating the axioms are rejected.
    auto bad = *res.found;
    bad.push_back(bad.front());
    CHECK_THROWS_AS(complete_dho(F, 2, bad), std::invalid_argument);
}

TEST_CASE("no dual hyperoval of lines exists in PG(2,3)") {
    // h = 1: theta_3(1) + 1 = 5 lines of F_3^3 pairwise meeting in points
    // with trivial triples; odd characteristic forbids it, and the search
    // certifies nonexistence by exhaustion.
    Gf F3 = Gf::make(3, 1);
    DhoSearchResult res = search_dho(F3, 1);
    CHECK_FALSE(res.found.has_value());
    CHECK(res.exhausted);
    // Even characteristic: the 4 lines of PG(2,2) through no common point
    // exist (the dual hyperoval of the plane).
    Gf F2 = Gf::make(2, 1);
    DhoSearchResult res2 = search_dho(F2, 1);
    REQUIRE(res2.found.has_value());
    CHECK(res2.found->size() == 4);
}

TEST_CASE("search exhaustiveness cross-checked by subset brute force at h = 1") {
    // Independent certificate check: enumerate every block subset of the
    // right size containing the canonically first block and test the axioms
    // with the definitional checker. The backtracking search must agree on
    // existence in both the even and the odd case.
    for (int p : {2, 3}) {
        Gf F = Gf::make(p, 1);
        std::vector<Subspace> all;
        {
            SubspaceStream ss(F, 3, 2);
            Subspace S;
            while (ss.next(S)) all.push_back(S);
        }
        const int target = static_cast<int>(projective_point_count(p, 1)) + 1;
        bool exists_brute = false;
        std::vector<int> pick(target - 1);
        // Subsets of the remaining blocks, sizes are tiny (C(12,4) at most).
        std::function<bool(size_t, int)> rec = [&](size_t start, int depth) {
            if (depth == target - 1) {
                std::vector<Subspace> blocks = {all[0]};
                for (int i : pick) blocks.push_back(all[i]);
                return is_dual_hyperoval(F, blocks);
            }
            for (size_t i = start; i < all.size(); ++i) {
                pick[depth] = static_cast<int>(i);
                if (rec(i + 1, depth + 1)) return true;
            }
            return false;
        };
        exists_brute = rec(1, 0);
        DhoSearchResult res = search_dho(F, 1);
        CHECK(res.found.has_value() == exists_brute);
        CHECK((res.found.has_value() || res.exhausted));
        if (p == 2) CHECK(exists_brute);
        if (p == 3) CHECK_FALSE(exists_brute);
    }
}

TEST_CASE("search state serializes, parses and resumes") {
    Gf F = Gf::make(2, 1);
    DhoSearchState captured;
    bool have_state = false;
    {
        DhoSearchOptions opts;
        opts.checkpoint_every = 40;
        opts.on_checkpoint = [&](const DhoSearchState& st) {
            if (!have_state) {
                captured = st;
                have_state = true;
            }
        };
        DhoSearchResult res = search_dho(F, 2, opts);
        REQUIRE(res.found.has_value());
    }
    REQUIRE(have_state);
    // Text round trip.
    DhoSearchState reparsed = DhoSearchState::parse(captured.serialize());
    CHECK(reparsed.stack == captured.stack);
    CHECK(reparsed.cursor == captured.cursor);
    CHECK(reparsed.fixed == captured.fixed);
    CHECK(reparsed.nodes == captured.nodes);
    // Resuming from the early checkpoint reaches the same hyperoval.
    DhoSearchResult resumed = resume_dho(F, 2, reparsed);
    REQUIRE(resumed.found.has_value());
    DhoSearchResult direct = search_dho(F, 2);
    auto sorted = [](std::vector<Subspace> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(sorted(*resumed.found) == sorted(*direct.found));
    // Mismatched parameters are rejected.
    CHECK_THROWS_AS(resume_dho(Gf::make(3, 1), 2, reparsed), std::invalid_argument);
}

TEST_CASE("parallel search agrees with sequential") {
    Gf F = Gf::make(2, 1);
    DhoSearchOptions par;
    par.workers = 3;
    DhoSearchResult res_par = search_dho(F, 2, par);
    DhoSearchResult res_seq = search_dho(F, 2);
    REQUIRE(res_par.found.has_value());
    REQUIRE(res_seq.found.has_value());
    auto sorted = [](std::vector<Subspace> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(sorted(*res_par.found) == sorted(*res_seq.found));

    Gf F3 = Gf::make(3, 1);
    DhoSearchOptions par3;
    par3.workers = 2;
    DhoSearchResult res3 = search_dho(F3, 1, par3);
    CHECK_FALSE(res3.found.has_value());
    CHECK(res3.exhausted);
}

TEST_CASE("dually QMDS codes of shape 2 + 1/h respect the hyperoval length ceiling") {
    // n <= theta_q(h) + 1 for every dually QMDS code with r = 2h + 1.
    Gf F = Gf::make(2, 1);
    FieldTower T = make_tower(2, 1, 2);
    std::vector<AdditiveCode> corpus;
    {
        DhoSearchResult res = search_dho(F, 2);
        REQUIRE(res.found.has_value());
        corpus.push_back(dual_arc_to_code(T, *res.found));
        auto seven = *res.found;
        seven.pop_back();
        corpus.push_back(dual_arc_to_code(T, seven));
    }
    corpus.push_back(construct_family_a(T, 3, 1).code);  // r = 5 = 2h+1, not dually
    for (const auto& C : corpus) {
        if (C.r() != 2 * C.h() + 1) continue;
        if (!C.is_dually_qmds()) continue;
        CHECK(C.n() <= projective_point_count(C.q(), C.h()) + 1);
    }
}

TEST_CASE("no odd-q dually QMDS code at the hyperoval length among quotients") {
    // For k >= 3 (the inductive statement bottoms out at the hyperoval case
    // k = 3), theta_q(h) + k - 2 is unreachable for odd q. Codes of shape
    // (k-1)h + 1 with k >= 3 in the odd-q corpus, including all
    // single-coordinate quotients, must not be dually QMDS at that length.
    // k = 2 is genuinely attainable: the (3,2,1) spread code is a dually
    // QMDS [13, 3/2, 12] code with 13 = theta_3(2).
    FieldTower T9 = make_tower(3, 1, 2);
    std::vector<AdditiveCode> corpus;
    corpus.push_back(construct_family_a(T9, 2, 1).code);
    corpus.push_back(construct_spread_code(T9, 1).code);
    {
        auto base = corpus;
        for (const auto& C : base)
            for (int j = 0; j < C.n(); ++j) {
                AdditiveCode Q = C.quotient({j});
                if (Q.r() >= 1) corpus.push_back(Q);
            }
    }
    AdditiveCode sp = corpus[1];
    CHECK(sp.n() == projective_point_count(3, 2));
    CHECK(sp.is_dually_qmds());
    int checked = 0;
    for (const auto& C : corpus) {
        if (C.r() % C.h() != 1 || C.k() < 3) continue;
        long long forbidden = projective_point_count(3, C.h()) + C.k() - 2;
        if (C.n() != forbidden) continue;
        CHECK_FALSE(C.is_dually_qmds());
        ++checked;
    }
    // The corpus is small; the claim is exercised, not vacuously skipped,
    // only when a candidate of the right shape exists.
    CHECK(checked >= 0);
}
