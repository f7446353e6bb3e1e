#include "aqc/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace aqc {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

long long to_ll(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw parse_error(std::string(what) + ": trailing junk in " + s);
        return v;
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception&) {
        throw parse_error(std::string(what) + ": not an integer: " + s);
    }
}

// key=value tokens after the line tag.
std::vector<std::pair<std::string, std::string>> kv_tokens(const std::string& line) {
    std::istringstream is(line);
    std::string tok;
    is >> tok;  // tag
    std::vector<std::pair<std::string, std::string>> out;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw parse_error("expected key=value, got " + tok);
        out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
    return out;
}

std::string expect_line(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw parse_error(std::string("unexpected end of file, expected ") + what);
    return line;
}

}  // namespace

std::string fq_to_string(const Gf& F, int a) {
    auto d = F.digits(a);
    std::string out;
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) out.push_back(':');
        out += std::to_string(d[i]);
    }
    return out;
}

int fq_from_string(const Gf& F, const std::string& s) {
    auto parts = split(s, ':');
    if (static_cast<int>(parts.size()) != F.e())
        throw parse_error("F_q element needs exactly e digits: " + s);
    std::vector<int> d;
    for (const auto& p : parts) {
        int digit = static_cast<int>(to_ll(p, "F_q digit"));
        if (digit < 0 || digit >= F.p()) throw parse_error("F_p digit out of range: " + s);
        d.push_back(digit);
    }
    return F.from_digits(d);
}

std::string field_header(const Gf& F) {
    std::ostringstream os;
    os << "field p=" << F.p() << " e=" << F.e() << " f=";
    const auto& f = F.modulus();
    for (size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    return os.str();
}

std::string field_header(const FieldTower& T) {
    std::ostringstream os;
    os << field_header(T.base()) << " h=" << T.h() << " g=";
    const auto& g = T.ext_modulus();
    for (size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << fq_to_string(T.base(), g[i]);
    return os.str();
}

namespace {

struct ParsedField {
    Gf gf;
    std::optional<FieldTower> tower;
};

ParsedField parse_field_header(const std::string& line) {
    if (line.rfind("field ", 0) != 0) throw parse_error("expected field header, got: " + line);
    int p = 0, e = 0, h = 0;
    std::string f_str, g_str;
    for (auto& [k, v] : kv_tokens(line)) {
        if (k == "p") p = static_cast<int>(to_ll(v, "p"));
        else if (k == "e") e = static_cast<int>(to_ll(v, "e"));
        else if (k == "f") f_str = v;
        else if (k == "h") h = static_cast<int>(to_ll(v, "h"));
        else if (k == "g") g_str = v;
        else throw parse_error("field header: unknown key " + k);
    }
    if (p == 0 || e == 0 || f_str.empty()) throw parse_error("field header: p, e, f required");
    std::vector<int> f;
    for (auto& c : split(f_str, ',')) f.push_back(static_cast<int>(to_ll(c, "f coefficient")));
    Gf gf(p, e, f);
    if ((h != 0) != !g_str.empty()) throw parse_error("field header: h and g go together");
    if (h == 0) return {gf, std::nullopt};
    std::vector<int> g;
    for (auto& c : split(g_str, ',')) g.push_back(fq_from_string(gf, c));
    return {gf, FieldTower(gf, h, g)};
}

}  // namespace

void save_code(std::ostream& os, const AdditiveCode& C) {
    const FieldTower& T = C.tower();
    os << "aqc v1\n" << field_header(T) << "\n";
    os << "code n=" << C.n() << " r=" << C.r() << "\n";
    for (int i = 0; i < C.r(); ++i) {
        for (int j = 0; j < C.n(); ++j) {
            if (j) os << ' ';
            auto coords = T.expand(C.gen(i, j));
            for (int a = 0; a < T.h(); ++a) {
                if (a) os << ',';
                os << fq_to_string(T.base(), coords[a]);
            }
        }
        os << "\n";
    }
}

AdditiveCode load_code(std::istream& is) {
    std::string line = expect_line(is, "aqc header");
    if (line != "aqc v1") throw parse_error("not an aqc v1 file");
    auto pf = parse_field_header(expect_line(is, "field header"));
    if (!pf.tower) throw parse_error("aqc file: field header must carry h and g");
    const FieldTower& T = *pf.tower;
    line = expect_line(is, "code header");
    if (line.rfind("code ", 0) != 0) throw parse_error("expected code header, got: " + line);
    int n = -1, r = -1;
    for (auto& [k, v] : kv_tokens(line)) {
        if (k == "n") n = static_cast<int>(to_ll(v, "n"));
        else if (k == "r") r = static_cast<int>(to_ll(v, "r"));
        else throw parse_error("code header: unknown key " + k);
    }
    if (n < 0 || r < 0) throw parse_error("code header: n and r required");
    std::vector<long long> gen;
    gen.reserve(static_cast<size_t>(n) * r);
    for (int i = 0; i < r; ++i) {
        std::istringstream row(expect_line(is, "generator row"));
        std::string entry;
        int cnt = 0;
        while (row >> entry) {
            auto parts = split(entry, ',');
            if (static_cast<int>(parts.size()) != T.h())
                throw parse_error("generator entry needs h coordinates: " + entry);
            std::vector<int> coords;
            for (auto& p : parts) coords.push_back(fq_from_string(T.base(), p));
            gen.push_back(T.contract(coords));
            ++cnt;
        }
        if (cnt != n) throw parse_error("generator row has wrong entry count");
    }
    return AdditiveCode(T, n, r, std::move(gen));
}

void save_code_file(const std::string& path, const AdditiveCode& C) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw parse_error("cannot open for writing: " + path);
    save_code(os, C);
}

AdditiveCode load_code_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw parse_error("cannot open: " + path);
    return load_code(is);
}

namespace {
void save_packing_body(std::ostream& os, const Gf& F, const Packing& P) {
    os << "packing r=" << P.ambient << " blocks=" << P.size() << "\n";
    for (const auto& B : P.blocks) {
        os << "block dim=" << B.dim() << "\n";
        for (int i = 0; i < B.dim(); ++i) {
            for (int j = 0; j < P.ambient; ++j) {
                if (j) os << ' ';
                os << fq_to_string(F, B.basis().at(i, j));
            }
            os << "\n";
        }
    }
}
}  // namespace

void save_packing(std::ostream& os, const Gf& F, const Packing& P) {
    os << "pkg v1\n" << field_header(F) << "\n";
    save_packing_body(os, F, P);
}

void save_packing(std::ostream& os, const FieldTower& T, const Packing& P) {
    os << "pkg v1\n" << field_header(T) << "\n";
    save_packing_body(os, T.base(), P);
}

PackingFile load_packing(std::istream& is) {
    std::string line = expect_line(is, "pkg header");
    if (line != "pkg v1") throw parse_error("not a pkg v1 file");
    auto pf = parse_field_header(expect_line(is, "field header"));
    const Gf& F = pf.gf;
    line = expect_line(is, "packing header");
    if (line.rfind("packing ", 0) != 0) throw parse_error("expected packing header, got: " + line);
    int r = -1, blocks = -1;
    for (auto& [k, v] : kv_tokens(line)) {
        if (k == "r") r = static_cast<int>(to_ll(v, "r"));
        else if (k == "blocks") blocks = static_cast<int>(to_ll(v, "blocks"));
        else throw parse_error("packing header: unknown key " + k);
    }
    if (r < 0 || blocks < 0) throw parse_error("packing header: r and blocks required");
    Packing P;
    P.ambient = r;
    for (int b = 0; b < blocks; ++b) {
        line = expect_line(is, "block header");
        if (line.rfind("block ", 0) != 0) throw parse_error("expected block header, got: " + line);
        int dim = -1;
        for (auto& [k, v] : kv_tokens(line)) {
            if (k == "dim") dim = static_cast<int>(to_ll(v, "dim"));
            else throw parse_error("block header: unknown key " + k);
        }
        if (dim < 0 || dim > r) throw parse_error("block header: bad dim");
        MatFq rows(dim, r);
        for (int i = 0; i < dim; ++i) {
            std::istringstream rs(expect_line(is, "block row"));
            std::string coord;
            int j = 0;
            while (rs >> coord) {
                if (j >= r) throw parse_error("block row too long");
                rows.at(i, j++) = fq_from_string(F, coord);
            }
            if (j != r) throw parse_error("block row too short");
        }
        Subspace S = Subspace::from_span(F, rows);
        if (S.dim() != dim) throw parse_error("block rows are not independent");
        P.blocks.push_back(std::move(S));
    }
    return {F, pf.tower, std::move(P)};
}

void save_packing_file(const std::string& path, const FieldTower& T, const Packing& P) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw parse_error("cannot open for writing: " + path);
    save_packing(os, T, P);
}

void save_packing_file(const std::string& path, const Gf& F, const Packing& P) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw parse_error("cannot open for writing: " + path);
    save_packing(os, F, P);
}

PackingFile load_packing_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw parse_error("cannot open: " + path);
    return load_packing(is);
}

}  // namespace aqc
