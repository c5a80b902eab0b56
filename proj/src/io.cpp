#include "kperf/io.hpp"

#include <fstream>

namespace kperf {

Json int_to_json(const Int& v) { return v.get_str(); }

Int json_to_int(const Json& j) {
  if (j.is_string()) return parse_int(j.get<std::string>());
  if (j.is_number_integer()) return parse_int(j.dump());
  throw LoadError("expected an integer (decimal string or number), got " + j.dump());
}

Json vec_to_json(const IntVec& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(int_to_json(v(i)));
  return a;
}

IntVec json_to_vec(const Json& j) {
  if (!j.is_array()) throw LoadError("expected an array of integers, got " + j.dump());
  IntVec v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = json_to_int(j[static_cast<size_t>(i)]);
  return v;
}

Json mat_to_json_rows(const IntMat& m) {
  Json a = Json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(vec_to_json(m.row(i).transpose()));
  return a;
}

IntMat json_to_mat_rows(const Json& j, Index cols_hint) {
  if (!j.is_array()) throw LoadError("expected an array of rows, got " + j.dump());
  if (j.empty()) return IntMat(0, std::max<Index>(cols_hint, 0));
  std::vector<IntVec> rows;
  for (const auto& r : j) rows.push_back(json_to_vec(r));
  Index cols = rows[0].size();
  IntMat m(static_cast<Index>(rows.size()), cols);
  for (Index i = 0; i < m.rows(); ++i) {
    if (rows[static_cast<size_t>(i)].size() != cols)
      throw LoadError("ragged matrix rows in JSON input");
    m.row(i) = rows[static_cast<size_t>(i)].transpose();
  }
  return m;
}

AbelianGroup parse_group(const Json& j) {
  if (!j.is_object() || !j.contains("generators"))
    throw LoadError("group JSON needs a \"generators\" field");
  Index k = static_cast<Index>(json_to_int(j.at("generators")).get_si());
  IntMat rel(0, k);
  if (j.contains("relations")) rel = json_to_mat_rows(j.at("relations"), k);
  if (rel.cols() != k)
    throw LoadError("relations must have one entry per generator");
  return AbelianGroup::from_relations(k, std::move(rel));
}

Json group_to_json(const AbelianGroup& g) {
  Json j;
  j["generators"] = int_to_json(g.generators());
  j["relations"] = mat_to_json_rows(g.relations());
  return j;
}

namespace {

// columns arrive as the outer JSON list: one inner list per source generator
IntMat json_to_hom_matrix(const Json& j, Index target_gens, Index source_gens) {
  if (!j.is_array()) throw LoadError("hom matrix must be a list of columns");
  if (static_cast<Index>(j.size()) != source_gens)
    throw LoadError("hom matrix needs one column per source generator");
  IntMat m(target_gens, source_gens);
  for (Index c = 0; c < source_gens; ++c) {
    IntVec col = json_to_vec(j[static_cast<size_t>(c)]);
    if (col.size() != target_gens)
      throw LoadError("hom matrix column has wrong length");
    m.col(c) = col;
  }
  return m;
}

}  // namespace

GroupHom parse_hom(const Json& j) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("matrix"))
    throw LoadError("hom JSON needs source, target, and matrix");
  AbelianGroup src = parse_group(j.at("source"));
  AbelianGroup tgt = parse_group(j.at("target"));
  return GroupHom(src, tgt, json_to_hom_matrix(j.at("matrix"), tgt.generators(), src.generators()));
}

GroupHom parse_endo(const Json& j, const AbelianGroup& g) {
  if (j.is_object() && j.contains("source")) {
    GroupHom h = parse_hom(j);
    if (h.source().generators() != g.generators())
      throw LoadError("endomorphism source does not match the supplied group");
    return GroupHom(g, g, h.matrix());
  }
  const Json& m = j.is_object() && j.contains("matrix") ? j.at("matrix") : j;
  return GroupHom(g, g, json_to_hom_matrix(m, g.generators(), g.generators()));
}

Json hom_to_json(const GroupHom& h) {
  Json j;
  j["source"] = group_to_json(h.source());
  j["target"] = group_to_json(h.target());
  Json cols = Json::array();
  for (Index c = 0; c < h.matrix().cols(); ++c)
    cols.push_back(vec_to_json(h.matrix().col(c)));
  j["matrix"] = cols;
  return j;
}

LambdaRing parse_lambda_ring(const Json& j) {
  if (!j.is_object() || !j.contains("basis")) throw LoadError("ring JSON needs a basis list");
  LambdaRing::Description d;
  for (const auto& b : j.at("basis")) d.basis.push_back(b.get<std::string>());
  const Index n = static_cast<Index>(d.basis.size());
  auto index_of = [&](const std::string& name) -> Index {
    for (Index i = 0; i < n; ++i)
      if (d.basis[static_cast<size_t>(i)] == name) return i;
    throw LoadError("unknown basis name " + name);
  };

  // multiplication: products with "1" are implied, everything else explicit
  d.mult.assign(static_cast<size_t>(n), std::vector<IntVec>(static_cast<size_t>(n)));
  for (Index i = 0; i < n; ++i) {
    d.mult[0][static_cast<size_t>(i)] = IntVec::Zero(n);
    d.mult[0][static_cast<size_t>(i)](i) = 1;
    d.mult[static_cast<size_t>(i)][0] = d.mult[0][static_cast<size_t>(i)];
  }
  if (n > 1 && !j.contains("mult")) throw LoadError("ring JSON needs a mult table");
  if (j.contains("mult")) {
    for (const auto& [key, val] : j.at("mult").items()) {
      auto star = key.find('*');
      if (star == std::string::npos) throw LoadError("mult keys look like \"u*u\"");
      Index a = index_of(key.substr(0, star));
      Index b = index_of(key.substr(star + 1));
      IntVec v = json_to_vec(val);
      if (v.size() != n) throw LoadError("mult entry " + key + " has wrong length");
      d.mult[static_cast<size_t>(a)][static_cast<size_t>(b)] = v;
      d.mult[static_cast<size_t>(b)][static_cast<size_t>(a)] = v;
    }
  }
  for (Index i = 1; i < n; ++i)
    for (Index k = i; k < n; ++k)
      if (d.mult[static_cast<size_t>(i)][static_cast<size_t>(k)].size() == 0)
        throw LoadError("missing mult entry " + d.basis[static_cast<size_t>(i)] + "*" +
                        d.basis[static_cast<size_t>(k)]);

  if (j.contains("additive_relations"))
    d.additive_relations = json_to_mat_rows(j.at("additive_relations"), n);

  d.degree_cap = j.contains("degree_cap") ? static_cast<Index>(json_to_int(j.at("degree_cap")).get_si()) : 12;

  d.lambda.resize(static_cast<size_t>(n));
  const Json lam = j.contains("lambda") ? j.at("lambda") : Json::object();
  for (Index i = 1; i < n; ++i) {
    const std::string& name = d.basis[static_cast<size_t>(i)];
    if (!lam.contains(name))
      throw LoadError("lambda table missing for basis element " + name);
    const Json& e = lam.at(name);
    LambdaRing::BasisLambda bl;
    if (e.contains("line") && e.at("line").get<bool>()) {
      bl.table = {IntVec(IntVec::Zero(n))};
      bl.table[0](i) = 1;
      bl.nilpotent = true;
    } else {
      long max_degree = 0;
      for (const auto& [key, val] : e.items()) {
        if (key == "nilpotent_above" || key == "rational" || key == "line") continue;
        max_degree = std::max(max_degree, std::stol(key));
      }
      long nilp = e.contains("nilpotent_above")
                      ? static_cast<long>(json_to_int(e.at("nilpotent_above")).get_si())
                      : -1;
      long len = std::max(max_degree, nilp);
      bl.table.assign(static_cast<size_t>(std::max(len, 0L)), IntVec(IntVec::Zero(n)));
      for (const auto& [key, val] : e.items()) {
        if (key == "nilpotent_above" || key == "rational" || key == "line") continue;
        long dgr = std::stol(key);
        if (dgr < 1) throw LoadError("lambda degrees start at 1");
        IntVec v = json_to_vec(val);
        if (v.size() != n) throw LoadError("lambda entry has wrong length");
        bl.table[static_cast<size_t>(dgr - 1)] = v;
      }
      bl.nilpotent = nilp >= 0;
      if (e.contains("rational")) {
        LambdaRing::RationalLambda rat;
        for (const auto& c : e.at("rational").at("num")) rat.num.push_back(json_to_vec(c));
        for (const auto& c : e.at("rational").at("den")) rat.den.push_back(json_to_vec(c));
        bl.rational = std::move(rat);
      }
    }
    d.lambda[static_cast<size_t>(i)] = std::move(bl);
  }

  if (!j.contains("augmentation")) throw LoadError("ring JSON needs an augmentation");
  const Json& aug = j.at("augmentation");
  Index c = -1;
  std::vector<IntVec> cols(static_cast<size_t>(n));
  for (Index i = 1; i < n; ++i) {
    const std::string& name = d.basis[static_cast<size_t>(i)];
    if (!aug.contains(name)) throw LoadError("augmentation missing for " + name);
    IntVec v = json_to_vec(aug.at(name));
    if (c < 0) c = v.size();
    if (v.size() != c) throw LoadError("augmentation components disagree in length");
    cols[static_cast<size_t>(i)] = v;
  }
  if (c < 0) c = 1;  // only the basis element 1
  d.augmentation = IntMat(c, n);
  d.augmentation.col(0).setConstant(1);
  for (Index i = 1; i < n; ++i) d.augmentation.col(i) = cols[static_cast<size_t>(i)];

  return LambdaRing::load(std::move(d));
}

Json lambda_ring_to_json(const LambdaRing& r) {
  const auto& d = r.description();
  const Index n = r.basis_size();
  Json j;
  j["basis"] = d.basis;
  Json mult = Json::object();
  for (Index i = 1; i < n; ++i)
    for (Index k = i; k < n; ++k)
      mult[d.basis[static_cast<size_t>(i)] + "*" + d.basis[static_cast<size_t>(k)]] =
          vec_to_json(d.mult[static_cast<size_t>(i)][static_cast<size_t>(k)]);
  j["mult"] = mult;
  Json lam = Json::object();
  for (Index i = 1; i < n; ++i) {
    const auto& bl = d.lambda[static_cast<size_t>(i)];
    Json e = Json::object();
    for (size_t dgr = 1; dgr <= bl.table.size(); ++dgr)
      if (!bl.table[dgr - 1].isZero(0)) e[std::to_string(dgr)] = vec_to_json(bl.table[dgr - 1]);
    if (bl.nilpotent) e["nilpotent_above"] = static_cast<long>(bl.table.size());
    if (bl.rational) {
      Json rat;
      Json num = Json::array(), den = Json::array();
      for (const auto& v : bl.rational->num) num.push_back(vec_to_json(v));
      for (const auto& v : bl.rational->den) den.push_back(vec_to_json(v));
      rat["num"] = num;
      rat["den"] = den;
      e["rational"] = rat;
    }
    lam[d.basis[static_cast<size_t>(i)]] = e;
  }
  j["lambda"] = lam;
  Json aug = Json::object();
  for (Index i = 1; i < n; ++i)
    aug[d.basis[static_cast<size_t>(i)]] = vec_to_json(d.augmentation.col(i));
  j["augmentation"] = aug;
  if (d.additive_relations.rows() > 0)
    j["additive_relations"] = mat_to_json_rows(d.additive_relations);
  j["degree_cap"] = d.degree_cap;
  return j;
}

KGroupDatum parse_k_datum(const Json& j) {
  if (!j.is_object() || !j.contains("group") || !j.contains("degree"))
    throw LoadError("K-group datum needs group and degree");
  AbelianGroup group = parse_group(j.at("group"));
  GroupHom frobenius = j.contains("frobenius") ? parse_endo(j.at("frobenius"), group)
                                               : GroupHom::identity(group);
  return KGroupDatum{j.value("label", std::string("unnamed")), std::move(group),
                     std::move(frobenius),
                     static_cast<long>(json_to_int(j.at("degree")).get_si()),
                     j.value("source", std::string("user"))};
}

Json k_datum_to_json(const KGroupDatum& d) {
  Json j;
  j["label"] = d.label;
  j["group"] = group_to_json(d.group);
  Json fr;
  Json cols = Json::array();
  for (Index c = 0; c < d.frobenius.matrix().cols(); ++c)
    cols.push_back(vec_to_json(d.frobenius.matrix().col(c)));
  fr["matrix"] = cols;
  j["frobenius"] = fr;
  j["degree"] = d.degree;
  j["source"] = d.source;
  return j;
}

namespace {

Json condition_to_json(const ConditionReport& c) {
  Json j;
  j["ok"] = c.ok;
  j["detail"] = c.detail;
  if (c.witness) j["witness"] = vec_to_json(*c.witness);
  if (!c.generator_exponents.empty()) j["generator_exponents"] = c.generator_exponents;
  if (c.exponent >= 0) j["exponent"] = c.exponent;
  return j;
}

}  // namespace

Json lemell_to_json(const LemEllReport& r) {
  Json j;
  j["ell"] = int_to_json(r.ell);
  j["cond_a"] = condition_to_json(r.cond_a);
  j["cond_b"] = condition_to_json(r.cond_b);
  j["cond_c"] = condition_to_json(r.cond_c);
  j["overall"] = r.overall;
  if (r.overall) {
    j["conclusion_spot_checked"] = r.conclusion_spot_checked;
    j["conclusion"] = r.conclusion_detail;
  }
  return j;
}

Json filtration_to_json(const GammaFiltration& f) {
  Json j;
  j["cap"] = f.cap;
  j["verdict"] = f.finite ? "FINITE(" + std::to_string(f.finite_at) + ")"
                          : "INCONCLUSIVE(" + std::to_string(f.cap) + ")";
  j["finite"] = f.finite;
  if (f.finite) j["vanishing_degree"] = f.finite_at;
  j["tail_bounds"] = f.tail_bounds;
  Json steps = Json::array();
  for (size_t nn = 0; nn < f.step_gens.size(); ++nn) {
    Json s;
    s["n"] = nn;
    s["generators"] = f.step_gens[nn].cols();
    steps.push_back(s);
  }
  j["steps"] = steps;
  j["detail"] = f.detail;
  return j;
}

Json graded_adams_to_json(const GradedAdamsReport& r) {
  Json j;
  j["ell"] = int_to_json(r.ell);
  j["ok"] = r.ok;
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    Json e;
    e["n"] = l.n;
    e["ok"] = l.ok;
    if (!l.ok) e["failing_generator"] = l.failing_generator;
    levels.push_back(e);
  }
  j["levels"] = levels;
  j["detail"] = r.detail;
  return j;
}

Json prop_lambda_to_json(const PropLambdaReport& r) {
  Json j;
  j["ell"] = int_to_json(r.ell);
  j["preserves_kernel"] = r.preserves_kernel;
  j["kernel_group"] = r.kernel_group.structure_string();
  Json cols = Json::array();
  for (Index c = 0; c < r.restricted_matrix.cols(); ++c)
    cols.push_back(vec_to_json(r.restricted_matrix.col(c)));
  j["restricted_matrix_columns"] = cols;
  j["lemell"] = lemell_to_json(r.lemell);
  j["localization"] = r.localization;
  j["overall"] = r.overall;
  if (r.filtration_finite) j["filtration_finite"] = *r.filtration_finite;
  j["consistent_with_filtration"] = r.consistent_with_filtration;
  if (!r.overall) j["colimit_trivial"] = r.colimit_trivial;
  j["detail"] = r.detail;
  return j;
}

Json k1_to_json(const K1Report& r) {
  auto fac = [](const std::vector<Int>& f) {
    Json a = Json::array();
    for (const Int& d : f) a.push_back(int_to_json(d));
    return a;
  };
  Json j;
  j["p"] = r.p;
  j["m"] = r.m;
  j["model"] = "K_1 modeled by the unit group of F_p[t]/(t^m)";
  j["colim_factors"] = fac(r.colim_factors);
  j["localized_factors"] = fac(r.localized_factors);
  j["perf_units_factors"] = fac(r.perf_units_factors);
  j["perfection_is_constants"] = r.perfection_is_constants;
  j["colim_order_coprime_p"] = r.colim_order_coprime_p;
  j["agree"] = r.agree;
  j["detail"] = r.detail;
  return j;
}

Json ptorsion_to_json(const PTorsionReport& r) {
  Json j;
  j["p"] = r.p;
  j["m"] = r.m;
  j["ok"] = r.ok;
  Json nil = Json::array();
  for (int32_t c : r.witness_nilpotent) nil.push_back(c);
  j["nilpotent"] = nil;
  j["unit"] = r.witness_unit;
  j["unit_order"] = int_to_json(r.unit_order);
  j["detail"] = r.detail;
  return j;
}

Json k0_split_to_json(const K0SplitReport& r) {
  Json j;
  j["h0_rank"] = r.h0_rank;
  j["p"] = int_to_json(r.p);
  j["lemell"] = lemell_to_json(r.lemell);
  j["computed"] = r.computed;
  if (r.computed) {
    j["predicted"] = r.predicted;
    Json tors = Json::array();
    for (const Int& d : r.predicted_torsion) tors.push_back(int_to_json(d));
    j["predicted_torsion"] = tors;
  }
  j["detail"] = r.detail;
  return j;
}

Json negk_to_json(const NegKReport& r) {
  Json j;
  j["label"] = r.label;
  j["degree"] = r.degree;
  j["p"] = int_to_json(r.p);
  Json cols = Json::array();
  for (Index c = 0; c < r.scaled_matrix.cols(); ++c)
    cols.push_back(vec_to_json(r.scaled_matrix.col(c)));
  j["scaled_matrix_columns"] = cols;
  j["lemell"] = lemell_to_json(r.lemell);
  j["ok"] = r.ok;
  j["localization"] = r.localization;
  j["detail"] = r.detail;
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace kperf
