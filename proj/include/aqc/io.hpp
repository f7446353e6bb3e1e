#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "aqc/code.hpp"
#include "aqc/common.hpp"
#include "aqc/field.hpp"
#include "aqc/packing.hpp"

namespace aqc {

// Text formats. Both start with a version line and a field header:
//
//   field p=<p> e=<e> f=<c0,c1,...,1> [h=<h> g=<d0,d1,...,1>]
//
// f coefficients are F_p integers, ascending. g coefficients are F_q
// elements, ascending; an F_q element is written as its e F_p digits joined
// by ':' (a bare digit when e = 1). Lists are comma-joined. The writers are
// canonical: write(read(x)) reproduces x byte for byte.
//
// .aqc: "aqc v1" / field header with tower / "code n=<n> r=<r>" / r rows of
// n generator entries, each entry the h F_q coordinates of the element
// joined by ','.
//
// .pkg: "pkg v1" / field header (tower part optional) / "packing r=<r>
// blocks=<b>" / per block "block dim=<d>" followed by d rows of r F_q
// coordinates.

std::string fq_to_string(const Gf& F, int a);
int fq_from_string(const Gf& F, const std::string& s);

std::string field_header(const Gf& F);
std::string field_header(const FieldTower& T);

void save_code(std::ostream& os, const AdditiveCode& C);
AdditiveCode load_code(std::istream& is);
void save_code_file(const std::string& path, const AdditiveCode& C);
AdditiveCode load_code_file(const std::string& path);

struct PackingFile {
    Gf gf;
    std::optional<FieldTower> tower;
    Packing packing;
};

void save_packing(std::ostream& os, const Gf& F, const Packing& P);
void save_packing(std::ostream& os, const FieldTower& T, const Packing& P);
PackingFile load_packing(std::istream& is);
void save_packing_file(const std::string& path, const FieldTower& T, const Packing& P);
void save_packing_file(const std::string& path, const Gf& F, const Packing& P);
PackingFile load_packing_file(const std::string& path);

}  // namespace aqc
