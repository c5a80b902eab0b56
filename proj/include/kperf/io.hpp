#pragma once

#include "kperf/lambda.hpp"
#include "kperf/perfection.hpp"

#include <json.hpp>

#include <string>

namespace kperf {

// Ordered JSON keeps report serialization byte-deterministic.
using Json = nlohmann::ordered_json;

// Integers travel as decimal strings so arbitrary precision survives JSON.
Json int_to_json(const Int& v);
Int json_to_int(const Json& j);  // accepts a decimal string or a JSON integer

Json vec_to_json(const IntVec& v);
IntVec json_to_vec(const Json& j);
Json mat_to_json_rows(const IntMat& m);          // list of rows
IntMat json_to_mat_rows(const Json& j, Index cols_hint = -1);

// {"generators": k, "relations": [[...], ...]}
AbelianGroup parse_group(const Json& j);
Json group_to_json(const AbelianGroup& g);

// {"source": <group>, "target": <group>, "matrix": [[...], ...]} with one
// inner list per source generator (column). parse_endo also accepts a bare
// {"matrix": ...} against a supplied group.
GroupHom parse_hom(const Json& j);
GroupHom parse_endo(const Json& j, const AbelianGroup& g);
Json hom_to_json(const GroupHom& h);

// {"basis": [...], "mult": {"u*u": [...]}, "lambda": {"u": {"1": [...],
//  "nilpotent_above": 1, "line": true, "rational": {"num": [...], "den":
//  [...]}}}, "augmentation": {"u": [...]}, "additive_relations": [[...]],
//  "degree_cap": 12}
LambdaRing parse_lambda_ring(const Json& j);
Json lambda_ring_to_json(const LambdaRing& r);

// {"label": ..., "group": {...}, "frobenius": {"matrix": ...},
//  "degree": -1, "source": ...}
KGroupDatum parse_k_datum(const Json& j);
Json k_datum_to_json(const KGroupDatum& d);

// report fragments
Json lemell_to_json(const LemEllReport& r);
Json prop_lambda_to_json(const PropLambdaReport& r);
Json filtration_to_json(const GammaFiltration& f);
Json graded_adams_to_json(const GradedAdamsReport& r);
Json k1_to_json(const K1Report& r);
Json ptorsion_to_json(const PTorsionReport& r);
Json k0_split_to_json(const K0SplitReport& r);
Json negk_to_json(const NegKReport& r);

// file I/O with location diagnostics on parse failures
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace kperf
