#include "aqc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "aqc/code.hpp"
#include "aqc/constructions.hpp"
#include "aqc/field.hpp"
#include "aqc/geometry.hpp"
#include "aqc/io.hpp"
#include "aqc/packing.hpp"

namespace aqc {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFails = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct Summary {
    std::vector<std::pair<std::string, std::string>> kv;
    void add(const std::string& k, const std::string& v) { kv.emplace_back(k, v); }
    void add(const std::string& k, const char* v) { kv.emplace_back(k, v); }
    template <class T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
    void add(const std::string& k, T v) {
        if constexpr (std::is_same_v<T, bool>)
            kv.emplace_back(k, v ? "1" : "0");
        else
            kv.emplace_back(k, std::to_string(v));
    }
    void print(std::ostream& os) const {
        for (auto& [k, v] : kv) os << k << '=' << v << '\n';
    }
};

std::pair<int, int> factor_prime_power(long long q) {
    if (q < 2) throw std::invalid_argument("q must be a prime power >= 2");
    long long p = q;
    for (long long d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    int e = 0;
    long long t = q;
    while (t > 1) {
        if (t % p != 0) throw std::invalid_argument("q = " + std::to_string(q) + " is not a prime power");
        t /= p;
        ++e;
    }
    return {static_cast<int>(p), e};
}

struct Range {
    long long lo = 0, hi = 0;
};

Range parse_range(const std::string& s) {
    auto colon = s.find(':');
    Range r;
    if (colon == std::string::npos) {
        r.lo = r.hi = std::stoll(s);
    } else {
        r.lo = std::stoll(s.substr(0, colon));
        r.hi = std::stoll(s.substr(colon + 1));
    }
    if (r.lo > r.hi) throw std::invalid_argument("bad range: " + s);
    return r;
}

std::string sibling_pkg_path(const std::string& aqc_path) {
    std::filesystem::path p(aqc_path);
    p.replace_extension(".pkg");
    return p.string();
}

// The type line printed by construct/search: "[n, r/h, d]_q^h" plus
// property flags.
std::string describe(const AdditiveCode& C, const EnumCaps& caps, int workers) {
    std::string s = C.type_string(caps, workers);
    if (C.is_qmds(caps, workers)) s += " QMDS";
    if (C.is_long(caps, workers)) s += " long";
    return s;
}

std::string sniff_format(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw parse_error("cannot open: " + path);
    std::string line;
    std::getline(is, line);
    if (line == "aqc v1") return "aqc";
    if (line == "pkg v1") return "pkg";
    throw parse_error(path + ": unknown format (expected aqc v1 or pkg v1)");
}

std::vector<int> parse_index_list(const std::string& s, int n) {
    std::vector<int> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        int j = std::stoi(item);
        if (j < 1 || j > n)
            throw std::invalid_argument("coordinate index " + item + " out of 1.." +
                                        std::to_string(n));
        out.push_back(j - 1);
    }
    return out;
}

int cmd_construct(const std::string& family, long long q, int h, int k, int r0,
                  std::optional<int> r1, std::optional<int> r2, const std::string& out_path,
                  const EnumCaps& caps, int workers, std::ostream& out) {
    auto [p, e] = factor_prime_power(q);
    FieldTower T = make_tower(p, e, h);
    Construction con = [&] {
        if (family == "A") return construct_family_a(T, k, r0, caps, workers);
        if (family == "B") return construct_family_b(T, k, r0, r1, r2, caps, workers);
        if (family == "Bbar") return construct_family_bbar(T, r0, r1, r2, caps, workers);
        return construct_spread_code(T, r0, std::nullopt, caps, workers);
    }();
    save_code_file(out_path, con.code);
    const std::string pkg_path = sibling_pkg_path(out_path);
    save_packing_file(pkg_path, T, con.packing);
    out << describe(con.code, caps, workers) << "\n";
    Summary s;
    s.add("status", "ok");
    s.add("family", family);
    s.add("q", q);
    s.add("h", h);
    s.add("k", con.code.k());
    s.add("r0", r0);
    s.add("n", con.code.n());
    s.add("r", con.code.r());
    s.add("d", con.code.min_distance(caps, workers));
    s.add("qmds", con.code.is_qmds(caps, workers));
    s.add("long", con.code.is_long(caps, workers));
    s.add("faithful", con.code.is_faithful());
    s.add("dually", con.code.is_dually_qmds(caps, workers));
    s.add("out_aqc", out_path);
    s.add("out_pkg", pkg_path);
    s.print(out);
    return kExitOk;
}

int cmd_verify(const std::string& path, bool want_qmds, bool want_dually, bool want_faithful,
               bool want_system, std::optional<int> packing_lambda, const EnumCaps& caps,
               int workers, std::ostream& out) {
    const std::string fmt = sniff_format(path);
    bool all_ok = true;
    Summary s;
    std::optional<AdditiveCode> code;
    std::optional<Packing> packing;
    Gf base = Gf::make(2, 1);  // replaced below
    if (fmt == "aqc") {
        code = load_code_file(path);
        base = code->tower().base();
    } else {
        auto pf = load_packing_file(path);
        base = pf.gf;
        packing = std::move(pf.packing);
        if (want_qmds || want_dually || want_faithful || want_system)
            throw std::invalid_argument("code predicates need an .aqc file");
    }

    if (want_qmds) {
        int d = code->min_distance(caps, workers);
        int target = code->n() - code->k() + 1;
        bool ok = d == target;
        out << "qmds: " << (ok ? "PASS" : "FAIL") << " d=" << d << " singleton=" << target
            << "\n";
        s.add("qmds", ok);
        all_ok &= ok;
    }
    if (want_faithful) {
        bool ok = code->is_faithful();
        out << "faithful: " << (ok ? "PASS" : "FAIL");
        if (!ok)
            for (int i = 0; i < code->n(); ++i)
                if (code->column_space(i).dim() != code->h()) {
                    out << " witness: block " << i + 1 << " has dim U = "
                        << code->column_space(i).dim();
                    break;
                }
        out << "\n";
        s.add("faithful", ok);
        all_ok &= ok;
    }
    if (want_dually) {
        bool ok = code->is_dually_qmds(caps, workers);
        out << "dually: " << (ok ? "PASS" : "FAIL");
        if (!ok) {
            if (auto j = code->condition_b_violation()) {
                out << " witness: J={";
                for (size_t i = 0; i < j->size(); ++i) out << (i ? "," : "") << (*j)[i] + 1;
                Subspace inter = Subspace::full(code->r());
                for (int jj : *j) inter = intersect(base, inter, code->block_perp(jj));
                out << "} dim=" << inter.dim() << " expected="
                    << code->r() - static_cast<int>(j->size()) * code->h();
            }
        }
        out << "\n";
        s.add("dually", ok);
        all_ok &= ok;
    }
    if (want_system) {
        bool ok = code->verify_system(caps, workers);
        out << "system: " << (ok ? "PASS" : "FAIL") << "\n";
        s.add("system", ok);
        all_ok &= ok;
    }
    if (packing_lambda) {
        Packing P = packing ? *packing : code->t_packing();
        auto v = lambda_packing_violation(base, P, *packing_lambda, caps);
        bool ok = !v.has_value();
        out << "packing lambda=" << *packing_lambda << ": " << (ok ? "PASS" : "FAIL");
        if (v) out << " witness: " << v->describe();
        out << "\n";
        s.add("packing", ok);
        all_ok &= ok;
    }
    s.add("status", all_ok ? "ok" : "fail");
    s.print(out);
    return all_ok ? kExitOk : kExitPropertyFails;
}

int cmd_distance(const std::string& path, const EnumCaps& caps, int workers, std::ostream& out) {
    AdditiveCode code = load_code_file(path);
    int d = code.min_distance(caps, workers);
    out << "d = " << d << "\n";
    Summary s;
    s.add("status", "ok");
    s.add("n", code.n());
    s.add("r", code.r());
    s.add("d", d);
    s.print(out);
    return kExitOk;
}

int cmd_dual(const std::string& path, const std::string& out_path, const EnumCaps& caps,
             int workers, std::ostream& out) {
    AdditiveCode code = load_code_file(path);
    AdditiveCode d = code.dual();
    save_code_file(out_path, d);
    Summary s;
    s.add("status", "ok");
    s.add("n", d.n());
    s.add("r", d.r());
    try {
        out << describe(d, caps, workers) << "\n";
        s.add("d", d.min_distance(caps, workers));
    } catch (const cap_exceeded&) {
        out << "[" << d.n() << ", " << d.r() << "/" << d.h()
            << ", ?]: dual distance enumeration exceeds cap\n";
    }
    s.add("out_aqc", out_path);
    s.print(out);
    return kExitOk;
}

int cmd_quotient(const std::string& j_list, const std::string& path, const std::string& out_path,
                 const EnumCaps& caps, int workers, std::ostream& out) {
    AdditiveCode code = load_code_file(path);
    std::vector<int> J = parse_index_list(j_list, code.n());
    AdditiveCode q = code.quotient(J);
    save_code_file(out_path, q);
    Summary s;
    s.add("status", "ok");
    s.add("n", q.n());
    s.add("r", q.r());
    if (q.r() >= 1) {
        out << describe(q, caps, workers) << "\n";
        s.add("d", q.min_distance(caps, workers));
    } else {
        out << "[" << q.n() << ", 0, -]: quotient is the zero code\n";
    }
    s.add("out_aqc", out_path);
    s.print(out);
    return kExitOk;
}

int cmd_bounds(long long q, int h, int k, int r0, std::ostream& out) {
    factor_prime_power(q);
    BoundValue nb = qmds_length_bound(static_cast<int>(q), h, k, r0);
    BoundValue kb = dually_k_bound(static_cast<int>(q), h, r0);
    out << "n <= " << nb.value;
    if (!nb.exact) out << " (floored, remainder " << nb.remainder << ")";
    out << "\n";
    out << "k <= " << kb.value;
    if (!kb.exact) out << " (floored, remainder " << kb.remainder << ")";
    out << "\n";
    Summary s;
    s.add("status", "ok");
    s.add("n_bound", nb.value);
    s.add("k_bound", kb.value);
    s.add("exact", nb.exact);
    s.print(out);
    return kExitOk;
}

int cmd_search_dho(long long q, int h, const std::string& out_path, const std::string& state_path,
                   unsigned long long checkpoint_every, const EnumCaps& caps, int workers,
                   std::ostream& out) {
    auto [p, e] = factor_prime_power(q);
    Gf F = Gf::make(p, e);
    DhoSearchOptions opts;
    opts.caps = caps;
    opts.workers = workers;
    if (!state_path.empty() && workers <= 1) {
        opts.checkpoint_every = checkpoint_every;
        opts.on_checkpoint = [state_path](const DhoSearchState& st) {
            const std::string tmp = state_path + ".tmp";
            {
                std::ofstream os(tmp, std::ios::binary);
                os << st.serialize();
            }
            std::filesystem::rename(tmp, state_path);
        };
    }
    DhoSearchResult res;
    if (!state_path.empty() && std::filesystem::exists(state_path)) {
        std::ifstream is(state_path, std::ios::binary);
        std::stringstream buf;
        buf << is.rdbuf();
        DhoSearchState st = DhoSearchState::parse(buf.str());
        out << "resuming from " << state_path << " (nodes=" << st.nodes << ")\n";
        res = resume_dho(F, h, st, opts);
    } else {
        res = search_dho(F, h, opts);
    }
    // A finished search (either way) invalidates the checkpoint.
    if (!state_path.empty() && (res.found || res.exhausted))
        std::filesystem::remove(state_path);
    Summary s;
    s.add("q", q);
    s.add("h", h);
    s.add("nodes", static_cast<long long>(res.nodes));
    if (res.found) {
        FieldTower T = make_tower(p, e, h);
        AdditiveCode code = dual_arc_to_code(T, *res.found, caps, workers);
        out << code.type_string(caps, workers) << " dually QMDS\n";
        if (!out_path.empty()) {
            Packing P;
            P.ambient = 2 * h + 1;
            P.blocks = *res.found;
            P.lambda = 2;
            save_packing_file(out_path, T, P);
            s.add("out_pkg", out_path);
        }
        s.add("status", "ok");
        s.add("found", true);
        s.add("blocks", static_cast<long long>(res.found->size()));
        s.print(out);
        return kExitOk;
    }
    if (res.exhausted) {
        out << "none (search exhausted: no dual hyperoval exists)\n";
        s.add("status", "ok");
        s.add("found", false);
        s.add("exhausted", true);
        s.print(out);
        return kExitPropertyFails;
    }
    out << "inconclusive\n";
    s.add("status", "inconclusive");
    s.print(out);
    return kExitCap;
}

int cmd_from_packing(const std::string& in_path, const std::string& out_path, bool dho,
                     const EnumCaps& caps, int workers, std::ostream& out) {
    auto pf = load_packing_file(in_path);
    if (!pf.tower)
        throw std::invalid_argument("from-packing: field header must carry h and g");
    const FieldTower& T = *pf.tower;
    AdditiveCode code = [&] {
        if (!dho) return AdditiveCode::from_packing(T, pf.packing);
        std::string why;
        if (!is_dual_hyperoval(T.base(), pf.packing.blocks, &why))
            throw verification_error("not a dual hyperoval: " + why);
        return dual_arc_to_code(T, pf.packing.blocks, caps, workers);
    }();
    save_code_file(out_path, code);
    out << describe(code, caps, workers) << "\n";
    Summary s;
    s.add("status", "ok");
    s.add("n", code.n());
    s.add("r", code.r());
    s.add("d", code.min_distance(caps, workers));
    s.add("out_aqc", out_path);
    s.print(out);
    return kExitOk;
}

int cmd_table(const std::string& family, const std::string& q_range, const std::string& h_range,
              const std::string& k_range, const std::string& r0_range, const EnumCaps& caps,
              int workers, std::ostream& out) {
    Range qr = parse_range(q_range), hr = parse_range(h_range);
    Range kr = parse_range(k_range), r0r = parse_range(r0_range);
    out << "# family q h k r0 n r d qmds dually\n";
    for (long long q = qr.lo; q <= qr.hi; ++q) {
        int p, e;
        try {
            std::tie(p, e) = factor_prime_power(q);
        } catch (const std::invalid_argument&) {
            continue;  // not a prime power
        }
        for (long long h = hr.lo; h <= hr.hi; ++h)
            for (long long k = kr.lo; k <= kr.hi; ++k)
                for (long long r0 = r0r.lo; r0 <= r0r.hi; ++r0) {
                    try {
                        FieldTower T = make_tower(p, e, static_cast<int>(h));
                        Construction con = [&]() -> Construction {
                            if (family == "A")
                                return construct_family_a(T, static_cast<int>(k),
                                                          static_cast<int>(r0), caps, workers);
                            if (family == "B")
                                return construct_family_b(T, static_cast<int>(k),
                                                          static_cast<int>(r0), std::nullopt,
                                                          std::nullopt, caps, workers);
                            if (family == "Bbar")
                                return construct_family_bbar(T, static_cast<int>(r0),
                                                             std::nullopt, std::nullopt, caps,
                                                             workers);
                            return construct_spread_code(T, static_cast<int>(r0), std::nullopt,
                                                         caps, workers);
                        }();
                        // Re-verified row: the construction recomputed the
                        // distance exhaustively.
                        out << family << " q=" << q << " h=" << h << " k=" << con.code.k()
                            << " r0=" << r0 << " n=" << con.code.n() << " r=" << con.code.r()
                            << " d=" << con.code.min_distance(caps, workers)
                            << " qmds=" << (con.code.is_qmds(caps, workers) ? 1 : 0)
                            << " dually=" << (con.code.is_dually_qmds(caps, workers) ? 1 : 0)
                            << "\n";
                    } catch (const std::invalid_argument&) {
                        // Not a valid parameter tuple for this family.
                    } catch (const verification_error& ex) {
                        out << "# " << family << " q=" << q << " h=" << h << " k=" << k
                            << " r0=" << r0 << " construction failed: " << ex.what() << "\n";
                    } catch (const cap_exceeded& ex) {
                        out << "# " << family << " q=" << q << " h=" << h << " k=" << k
                            << " r0=" << r0 << " skipped: " << ex.what() << "\n";
                    }
                }
    }
    out << "status=ok\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"additive quasi-MDS code constructor and verifier"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    auto sub = [&](const char* name, const char* desc) {
        CLI::App* c = app.add_subcommand(name, desc);
        c->set_help_flag("--help", "print help");
        return c;
    };

    EnumCaps caps;
    int workers = 1;
    long long q = 0;
    int h = 0, k = 2, r0 = 1;
    std::optional<int> r1, r2;
    std::string family, in_path, out_path, j_list, state_path;
    bool want_qmds = false, want_dually = false, want_faithful = false, want_system = false,
         dho = false;
    std::optional<int> packing_lambda;
    unsigned long long checkpoint_every = 1000000;
    std::string q_range, h_range, k_range = "2:2", r0_range = "1:1";

    auto add_common = [&](CLI::App* c) {
        c->add_option("--cap", caps.vector_cap, "exhaustive enumeration cap (q^r)");
        c->add_option("--subspace-cap", caps.subspace_cap, "subspace stream cap");
        c->add_option("--workers", workers, "worker threads for enumeration");
    };

    CLI::App* c_construct = sub("construct", "construct a verified family instance");
    c_construct->add_option("--family", family, "A|B|Bbar|spread")
        ->required()
        ->check(CLI::IsMember({"A", "B", "Bbar", "spread"}));
    c_construct->add_option("--q", q, "base field size (prime power)")->required();
    c_construct->add_option("--h", h, "extension degree")->required();
    c_construct->add_option("--k", k, "ceil(r/h)");
    c_construct->add_option("--r0", r0, "fractional part of the dimension")->required();
    c_construct->add_option("--r1", r1, "Y-subspace dimension (B/Bbar)");
    c_construct->add_option("--r2", r2, "S-subspace dimension (B/Bbar)");
    c_construct->add_option("-o,--out", out_path, "output .aqc path (a sibling .pkg is written)")
        ->required();
    add_common(c_construct);

    CLI::App* c_verify = sub("verify", "check properties of a stored code/packing");
    c_verify->add_flag("--qmds", want_qmds, "distance meets the generalized Singleton bound");
    c_verify->add_flag("--dually", want_dually, "code and trace dual both QMDS");
    c_verify->add_flag("--faithful", want_faithful, "every block has full column space");
    c_verify->add_flag("--system", want_system, "hyperplane counts match n - d");
    c_verify->add_option("--packing", packing_lambda, "verify as lambda-packing");
    c_verify->add_option("file", in_path, "input .aqc or .pkg")->required();
    add_common(c_verify);

    CLI::App* c_distance = sub("distance", "exhaustive minimum distance");
    c_distance->add_option("file", in_path, "input .aqc")->required();
    add_common(c_distance);

    CLI::App* c_dual = sub("dual", "write the trace dual");
    c_dual->add_option("file", in_path, "input .aqc")->required();
    c_dual->add_option("-o,--out", out_path, "output .aqc")->required();
    add_common(c_dual);

    CLI::App* c_quot = sub("quotient", "geometric quotient at coordinates J");
    c_quot->add_option("--j", j_list, "1-based coordinate list, comma separated")->required();
    c_quot->add_option("file", in_path, "input .aqc")->required();
    c_quot->add_option("-o,--out", out_path, "output .aqc")->required();
    add_common(c_quot);

    CLI::App* c_bounds = sub("bounds", "length and dual-dimension bounds");
    c_bounds->add_option("--q", q)->required();
    c_bounds->add_option("--h", h)->required();
    c_bounds->add_option("--k", k)->required();
    c_bounds->add_option("--r0", r0)->required();

    CLI::App* c_search = sub("search-dho", "exhaustive dual hyperoval search");
    c_search->add_option("--q", q)->required();
    c_search->add_option("--h", h)->required();
    c_search->add_option("-o,--out", out_path, "output .pkg for a found hyperoval");
    c_search->add_option("--state", state_path, "resumable search state file");
    c_search->add_option("--checkpoint-every", checkpoint_every,
                         "checkpoint interval in examined candidates");
    add_common(c_search);

    CLI::App* c_from = sub("from-packing", "build the code of a stored packing");
    c_from->add_option("file", in_path, "input .pkg with tower header")->required();
    c_from->add_option("-o,--out", out_path, "output .aqc")->required();
    c_from->add_flag("--dho", dho, "require the packing to be a dual hyperoval");
    add_common(c_from);

    CLI::App* c_table = sub("table", "verified parameter table for a family");
    c_table->add_option("--family", family, "A|B|Bbar|spread")
        ->required()
        ->check(CLI::IsMember({"A", "B", "Bbar", "spread"}));
    c_table->add_option("--q", q_range, "range lo[:hi]")->required();
    c_table->add_option("--h", h_range, "range lo[:hi]")->required();
    c_table->add_option("--k", k_range, "range lo[:hi]");
    c_table->add_option("--r0", r0_range, "range lo[:hi]");
    add_common(c_table);

    std::vector<std::string> argv = args;
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_construct->parsed())
            return cmd_construct(family, q, h, k, r0, r1, r2, out_path, caps, workers, out);
        if (c_verify->parsed()) {
            if (!want_qmds && !want_dually && !want_faithful && !want_system && !packing_lambda)
                throw std::invalid_argument("verify: select at least one predicate");
            return cmd_verify(in_path, want_qmds, want_dually, want_faithful, want_system,
                              packing_lambda, caps, workers, out);
        }
        if (c_distance->parsed()) return cmd_distance(in_path, caps, workers, out);
        if (c_dual->parsed()) return cmd_dual(in_path, out_path, caps, workers, out);
        if (c_quot->parsed()) return cmd_quotient(j_list, in_path, out_path, caps, workers, out);
        if (c_bounds->parsed()) return cmd_bounds(q, h, k, r0, out);
        if (c_search->parsed())
            return cmd_search_dho(q, h, out_path, state_path, checkpoint_every, caps, workers,
                                  out);
        if (c_from->parsed()) return cmd_from_packing(in_path, out_path, dho, caps, workers, out);
        if (c_table->parsed())
            return cmd_table(family, q_range, h_range, k_range, r0_range, caps, workers, out);
        err << "no subcommand\n";
        return kExitUsage;
    } catch (const cap_exceeded& ex) {
        err << "cap exceeded: " << ex.what() << "\n";
        out << "status=cap\n";
        return kExitCap;
    } catch (const verification_error& ex) {
        err << "verification failed: " << ex.what() << "\n";
        out << "status=fail\n";
        return kExitPropertyFails;
    } catch (const parse_error& ex) {
        err << "parse error: " << ex.what() << "\n";
        out << "status=parse-error\n";
        return kExitUsage;
    } catch (const std::invalid_argument& ex) {
        err << "invalid arguments: " << ex.what() << "\n";
        out << "status=usage-error\n";
        return kExitUsage;
    }
}

}  // namespace aqc
