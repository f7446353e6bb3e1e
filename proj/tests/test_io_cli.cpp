#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aqc/cli.hpp"
#include "aqc/constructions.hpp"
#include "aqc/field.hpp"
#include "aqc/geometry.hpp"
#include "aqc/io.hpp"

using namespace aqc;

namespace {

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "aqc-tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string save_to_string(const AdditiveCode& C) {
    std::ostringstream os;
    save_code(os, C);
    return os.str();
}

struct CliResult {
    int exit;
    std::string out, err;
};

CliResult cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("aqc format: golden file and round trip") {
    FieldTower T = make_tower(2, 1, 2);
    AdditiveCode tiny(T, 2, 1, {1, T.xi()});
    const std::string expected =
        "aqc v1\n"
        "field p=2 e=1 f=0,1 h=2 g=1,1,1\n"
        "code n=2 r=1\n"
        "1,0 0,1\n";
    CHECK(save_to_string(tiny) == expected);

    std::istringstream is(expected);
    AdditiveCode back = load_code(is);
    CHECK(back.same_codewords(tiny));
    CHECK(save_to_string(back) == expected);

    // Round trip for a constructed code, byte for byte.
    AdditiveCode a = construct_family_a(T, 3, 1).code;
    std::string s1 = save_to_string(a);
    std::istringstream is2(s1);
    AdditiveCode a2 = load_code(is2);
    CHECK(a2.same_codewords(a));
    CHECK(save_to_string(a2) == s1);
}

TEST_CASE("aqc format with a nontrivial base field (e = 2)") {
    FieldTower T = make_tower(2, 2, 2);  // F_16 over F_4 over F_2
    CHECK(fq_to_string(T.base(), 2) == "0:1");
    AdditiveCode C(T, 2, 1, {1, T.xi()});
    std::string s = save_to_string(C);
    CHECK(s.find("p=2 e=2 f=1,1,1") != std::string::npos);
    std::istringstream is(s);
    AdditiveCode back = load_code(is);
    CHECK(back.same_codewords(C));
    CHECK(save_to_string(back) == s);
}

TEST_CASE("pkg format round trips with and without the tower header") {
    FieldTower T = make_tower(2, 1, 2);
    Construction con = construct_family_a(T, 3, 1);

    std::ostringstream with_tower;
    save_packing(with_tower, T, con.packing);
    std::istringstream is(with_tower.str());
    PackingFile pf = load_packing(is);
    REQUIRE(pf.tower.has_value());
    CHECK(*pf.tower == T);
    CHECK(pf.packing.blocks == con.packing.blocks);
    std::ostringstream again;
    save_packing(again, *pf.tower, pf.packing);
    CHECK(again.str() == with_tower.str());

    std::ostringstream base_only;
    save_packing(base_only, T.base(), con.packing);
    std::istringstream is2(base_only.str());
    PackingFile pf2 = load_packing(is2);
    CHECK_FALSE(pf2.tower.has_value());
    CHECK(pf2.packing.blocks == con.packing.blocks);
    std::ostringstream again2;
    save_packing(again2, pf2.gf, pf2.packing);
    CHECK(again2.str() == base_only.str());
}

TEST_CASE("parse errors") {
    auto bad = [](const std::string& text) {
        std::istringstream is(text);
        return is;
    };
    {
        auto is = bad("nope v1\n");
        CHECK_THROWS_AS(load_code(is), parse_error);
    }
    {
        auto is = bad("aqc v1\nfield p=2 e=1 f=0,1\ncode n=1 r=1\n1\n");
        CHECK_THROWS_AS(load_code(is), parse_error);  // missing tower part
    }
    {
        auto is = bad("aqc v1\nfield p=2 e=1 f=0,1 h=2 g=1,1,1\ncode n=2 r=1\n1,0\n");
        CHECK_THROWS_AS(load_code(is), parse_error);  // short row
    }
    {
        auto is = bad("pkg v1\nfield p=2 e=1 f=0,1\npacking r=2 blocks=1\nblock dim=1\n9 0\n");
        CHECK_THROWS_AS(load_packing(is), parse_error);  // digit out of range
    }
    {
        auto is =
            bad("pkg v1\nfield p=2 e=1 f=0,1\npacking r=2 blocks=1\nblock dim=2\n1 0\n1 0\n");
        CHECK_THROWS_AS(load_packing(is), parse_error);  // dependent rows
    }
}

TEST_CASE("cli: construct, verify, distance, dual, quotient round trip") {
    auto dir = temp_dir();
    auto aqc_path = (dir / "a221.aqc").string();

    auto c = cli({"construct", "--family", "A", "--q", "2", "--h", "2", "--k", "2", "--r0", "1",
                  "-o", aqc_path});
    CHECK(c.exit == 0);
    CHECK(c.out.find("[6, 3/2, 5]_2^2 QMDS long") != std::string::npos);
    CHECK(std::filesystem::exists(aqc_path));
    CHECK(std::filesystem::exists(dir / "a221.pkg"));

    CHECK(cli({"verify", "--qmds", "--faithful", "--dually", "--system", aqc_path}).exit == 0);
    CHECK(cli({"verify", "--packing", "1", aqc_path}).exit == 0);
    CHECK(cli({"verify", "--packing", "1", (dir / "a221.pkg").string()}).exit == 0);

    auto d = cli({"distance", aqc_path});
    CHECK(d.exit == 0);
    CHECK(d.out.find("d=5") != std::string::npos);

    auto dual_path = (dir / "a221-dual.aqc").string();
    auto du = cli({"dual", aqc_path, "-o", dual_path});
    CHECK(du.exit == 0);
    CHECK(du.out.find("[6, 9/2, 2]_2^2 QMDS") != std::string::npos);
    // Involution through the file format.
    auto dd_path = (dir / "a221-dd.aqc").string();
    CHECK(cli({"dual", dual_path, "-o", dd_path}).exit == 0);
    AdditiveCode original = load_code_file(aqc_path);
    AdditiveCode twice = load_code_file(dd_path);
    CHECK(twice.same_codewords(original));

    auto q_path = (dir / "a221-q.aqc").string();
    auto qu = cli({"quotient", "--j", "1", aqc_path, "-o", q_path});
    CHECK(qu.exit == 0);
    AdditiveCode quot = load_code_file(q_path);
    CHECK(quot.n() == 5);
    CHECK(quot.r() == original.block_perp(0).dim());
}

TEST_CASE("cli: verification failures exit 1 with witnesses") {
    auto dir = temp_dir();
    auto a231 = (dir / "a231.aqc").string();
    CHECK(cli({"construct", "--family", "A", "--q", "2", "--h", "2", "--k", "3", "--r0", "1",
               "-o", a231})
              .exit == 0);
    auto v = cli({"verify", "--dually", a231});
    CHECK(v.exit == 1);
    CHECK(v.out.find("witness") != std::string::npos);
    CHECK(v.out.find("J={5,6}") != std::string::npos);

    // A code with a zero column is unfaithful.
    FieldTower T = make_tower(2, 1, 2);
    auto bad_path = (dir / "zerocol.aqc").string();
    save_code_file(bad_path, AdditiveCode(T, 2, 2, {1, 0, T.xi(), 0}));
    auto vf = cli({"verify", "--faithful", bad_path});
    CHECK(vf.exit == 1);
    CHECK(vf.out.find("block 2") != std::string::npos);
}

TEST_CASE("cli: usage and cap errors") {
    auto dir = temp_dir();
    // h >= 6 required for family B.
    auto b = cli({"construct", "--family", "B", "--q", "2", "--h", "4", "--k", "3", "--r0", "1",
                  "-o", (dir / "b.aqc").string()});
    CHECK(b.exit == 2);
    // Unknown family.
    CHECK(cli({"construct", "--family", "Z", "--q", "2", "--h", "2", "--k", "2", "--r0", "1",
               "-o", (dir / "z.aqc").string()})
              .exit == 2);
    // Missing subcommand / unknown flag.
    CHECK(cli({}).exit == 2);
    CHECK(cli({"distance", "--no-such-flag", "x"}).exit == 2);
    // Nonexistent file.
    CHECK(cli({"distance", (dir / "missing.aqc").string()}).exit == 2);
    // verify with no predicate selected.
    auto a221 = (dir / "a221.aqc").string();
    cli({"construct", "--family", "A", "--q", "2", "--h", "2", "--k", "2", "--r0", "1", "-o",
         a221});
    CHECK(cli({"verify", a221}).exit == 2);
    // Tiny cap: exit 3.
    auto capped = cli({"distance", a221, "--cap", "4"});
    CHECK(capped.exit == 3);
    CHECK(capped.out.find("status=cap") != std::string::npos);
    // Bbar hits its verification failure: exit 1.
    auto bb = cli({"construct", "--family", "Bbar", "--q", "2", "--h", "6", "--r0", "1", "-o",
                   (dir / "bb.aqc").string()});
    CHECK(bb.exit == 1);
    CHECK(bb.err.find("triple") != std::string::npos);
}

TEST_CASE("cli: bounds, search-dho, from-packing, table") {
    auto dir = temp_dir();
    auto b = cli({"bounds", "--q", "2", "--h", "2", "--k", "3", "--r0", "1"});
    CHECK(b.exit == 0);
    CHECK(b.out.find("n <= 8") != std::string::npos);
    CHECK(b.out.find("k <= 6") != std::string::npos);

    auto dho_pkg = (dir / "dho.pkg").string();
    auto s = cli({"search-dho", "--q", "2", "--h", "2", "-o", dho_pkg});
    CHECK(s.exit == 0);
    CHECK(s.out.find("[8, 5/2, 6]_2^2 dually QMDS") != std::string::npos);
    CHECK(std::filesystem::exists(dho_pkg));

    auto dho_aqc = (dir / "dho.aqc").string();
    auto f = cli({"from-packing", dho_pkg, "--dho", "-o", dho_aqc});
    CHECK(f.exit == 0);
    CHECK(f.out.find("[8, 5/2, 6]_2^2") != std::string::npos);
    CHECK(cli({"verify", "--dually", dho_aqc}).exit == 0);

    // Resumable state: seed a mid-search checkpoint, resume through the CLI,
    // and confirm the finished run cleans the state file up.
    auto state = (dir / "dho22.state").string();
    {
        Gf F2 = Gf::make(2, 1);
        DhoSearchOptions opts;
        opts.checkpoint_every = 25;
        bool captured = false;
        opts.on_checkpoint = [&](const DhoSearchState& st) {
            if (captured) return;
            captured = true;
            std::ofstream os(state, std::ios::binary);
            os << st.serialize();
        };
        search_dho(F2, 2, opts);
        REQUIRE(captured);
    }
    auto s2 = cli({"search-dho", "--q", "2", "--h", "2", "--state", state});
    CHECK(s2.exit == 0);
    CHECK(s2.out.find("resuming") != std::string::npos);
    CHECK(s2.out.find("[8, 5/2, 6]_2^2") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(state));

    auto t = cli({"table", "--family", "A", "--q", "2", "--h", "2", "--k", "2:3", "--r0", "1"});
    CHECK(t.exit == 0);
    CHECK(t.out.find("A q=2 h=2 k=2 r0=1 n=6 r=3 d=5 qmds=1 dually=1") != std::string::npos);
    CHECK(t.out.find("A q=2 h=2 k=3 r0=1 n=6 r=5 d=4 qmds=1 dually=0") != std::string::npos);
}

TEST_CASE("cli: worker count leaves results unchanged") {
    auto dir = temp_dir();
    auto a221 = (dir / "w.aqc").string();
    auto c1 = cli({"construct", "--family", "A", "--q", "2", "--h", "2", "--k", "2", "--r0", "1",
                   "-o", a221});
    auto d1 = cli({"distance", a221});
    auto d4 = cli({"distance", a221, "--workers", "4"});
    CHECK(d1.exit == 0);
    CHECK(d4.exit == 0);
    CHECK(d1.out == d4.out);
    (void)c1;
}
