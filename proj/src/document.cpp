#include "nvfix/document.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace nvfix {

namespace {

Rational rational_from(const Json &j, const std::string &where) {
  if (j.is_string())
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception &) {
      throw ParseError(where + ": '" + j.get<std::string>() +
                       "' is not a rational number");
    }
  if (j.is_number_integer())
    return Rational(Integer(std::to_string(j.get<long long>())));
  throw ParseError(where + ": expected a rational as a string or integer");
}

RatVector vector_from(const Json &j, std::size_t dim, const std::string &where) {
  if (!j.is_array() || j.size() != dim)
    throw ParseError(where + ": expected a vector of length " +
                     std::to_string(dim));
  RatVector v;
  for (std::size_t k = 0; k < dim; ++k)
    v.push_back(rational_from(j[k], where));
  return v;
}

RatMatrix matrix_from(const Json &j, std::size_t dim, const std::string &where) {
  if (!j.is_array() || j.size() != dim)
    throw ParseError(where + ": expected " + std::to_string(dim) + " rows");
  RatMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    auto row = vector_from(j[r], dim, where);
    for (std::size_t c = 0; c < dim; ++c)
      m(r, c) = row[c];
  }
  return m;
}

const Json &field(const Json &j, const char *key, const std::string &where) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::string text(const Json &j, const std::string &where) {
  if (!j.is_string())
    throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

std::size_t count(const Json &j, const std::string &where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

AffineElement element_from(const CrystGroup &g, const Json &j,
                           const std::string &where) {
  if (j.is_string())
    return g.evaluate(parse_word(g, j.get<std::string>()));
  if (j.is_object()) {
    const std::size_t m = g.dim();
    AffineElement e{vector_from(field(j, "translation", where), m, where),
                    matrix_from(field(j, "matrix", where), m, where)};
    if (det(e.linear) == 0)
      throw ParseError(where + ": element has a singular matrix");
    return e;
  }
  throw ParseError(where + ": expected a word string or {translation, matrix}");
}

CrystGroup group_from(const Json &j) {
  const std::string w = "group";
  const std::size_t m = count(field(j, "dimension", w), w + ".dimension");
  if (m == 0)
    throw ParseError("group.dimension must be positive");
  const Json &lat = field(j, "lattice", w);
  if (!lat.is_array() || lat.size() != m)
    throw ParseError("group.lattice: expected " + std::to_string(m) +
                     " basis vectors");
  std::vector<RatVector> basis;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < m; ++k) {
    const std::string wk = "group.lattice[" + std::to_string(k) + "]";
    names.push_back(text(field(lat[k], "name", wk), wk + ".name"));
    basis.push_back(vector_from(field(lat[k], "vector", wk), m, wk + ".vector"));
  }
  std::vector<HolonomyRep> reps;
  if (j.contains("holonomy")) {
    const Json &hol = j.at("holonomy");
    if (!hol.is_array())
      throw ParseError("group.holonomy: expected an array");
    for (std::size_t k = 0; k < hol.size(); ++k) {
      const std::string wk = "group.holonomy[" + std::to_string(k) + "]";
      AffineElement e{
          vector_from(field(hol[k], "translation", wk), m, wk + ".translation"),
          matrix_from(field(hol[k], "matrix", wk), m, wk + ".matrix")};
      reps.push_back({text(field(hol[k], "name", wk), wk + ".name"), std::move(e)});
    }
  }
  std::vector<std::string> all = names;
  for (const auto &r : reps)
    all.push_back(r.name);
  std::sort(all.begin(), all.end());
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (all[k].empty() || all[k] == "1" ||
        all[k].find_first_of("*^ ") != std::string::npos)
      throw ParseError("invalid generator name '" + all[k] + "'");
    if (k > 0 && all[k] == all[k - 1])
      throw ParseError("duplicate generator name '" + all[k] + "'");
  }
  try {
    return CrystGroup(m, std::move(basis), std::move(names), std::move(reps));
  } catch (const DimensionError &e) {
    throw ParseError(std::string("group: ") + e.what());
  } catch (const ValidationError &e) {
    throw ParseError(std::string("group: ") + e.what());
  }
}

} // namespace

Word parse_word(const CrystGroup &g, const std::string &str) {
  Word w;
  std::string s;
  for (char ch : str)
    if (ch != ' ')
      s.push_back(ch);
  if (s.empty())
    throw ParseError("empty word");
  if (s == "1")
    return w;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '*')) {
    if (tok == "1")
      continue;
    std::string name = tok;
    long exponent = 1;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      const std::string e = tok.substr(caret + 1);
      const char *first = e.data();
      if (!e.empty() && e[0] == '+')
        ++first;
      auto [ptr, ec] = std::from_chars(first, e.data() + e.size(), exponent);
      if (ec != std::errc() || ptr != e.data() + e.size() || first == ptr)
        throw ParseError("bad exponent in word '" + str + "'");
    }
    const std::size_t gen = g.find_generator(name);
    if (gen == g.generator_count())
      throw ParseError("unknown generator '" + name + "' in word '" + str + "'");
    if (exponent != 0)
      w.push_back({gen, exponent});
  }
  return w;
}

InputDocument parse_document(const Json &doc) {
  if (!doc.is_object())
    throw ParseError("input document must be a JSON object");
  InputDocument out;
  out.group = group_from(field(doc, "group", "document"));
  const auto &g = out.group;
  const std::size_t m = g.dim();

  const Json &mor = field(doc, "morphism", "document");
  out.n = count(field(mor, "n", "morphism"), "morphism.n");
  if (out.n == 0)
    throw ParseError("morphism.n must be at least 1");
  const Json &images = field(mor, "images", "morphism");
  if (!images.is_object())
    throw ParseError("morphism.images: expected an object keyed by generator");
  for (auto it = images.begin(); it != images.end(); ++it)
    if (g.find_generator(it.key()) == g.generator_count())
      throw ParseError("morphism.images: unknown generator '" + it.key() + "'");
  for (std::size_t gen = 0; gen < g.generator_count(); ++gen) {
    const std::string name = g.generator_name(gen);
    const std::string w = "morphism.images." + name;
    if (!images.contains(name))
      throw ParseError(w + ": missing image");
    const Json &img = images.at(name);
    const Json &comps = field(img, "components", w);
    if (!comps.is_array() || comps.size() != out.n)
      throw ParseError(w + ".components: expected " + std::to_string(out.n) +
                       " entries");
    PermutedTuple t;
    for (std::size_t k = 0; k < out.n; ++k)
      t.components.push_back(
          element_from(g, comps[k], w + ".components[" + std::to_string(k) + "]"));
    if (img.contains("permutation")) {
      const Json &p = img.at("permutation");
      if (!p.is_array() || p.size() != out.n)
        throw ParseError(w + ".permutation: expected " + std::to_string(out.n) +
                         " entries");
      for (const auto &x : p) {
        const std::size_t v = count(x, w + ".permutation");
        if (v < 1 || v > out.n)
          throw ParseError(w + ".permutation: entry out of range");
        t.perm.push_back(v - 1);
      }
      if (!is_permutation(t.perm))
        throw ParseError(w + ".permutation: not a permutation");
    } else {
      t.perm = identity_permutation(out.n);
    }
    out.images.push_back(std::move(t));
  }

  if (doc.contains("lift") && !doc.at("lift").is_null()) {
    const Json &br = field(doc.at("lift"), "branches", "lift");
    if (!br.is_array() || br.size() != out.n)
      throw ParseError("lift.branches: expected " + std::to_string(out.n) +
                       " branches");
    AffineLift lift;
    for (std::size_t k = 0; k < br.size(); ++k) {
      const std::string w = "lift.branches[" + std::to_string(k) + "]";
      lift.branches.push_back(
          {matrix_from(field(br[k], "matrix", w), m, w + ".matrix"),
           vector_from(field(br[k], "translation", w), m, w + ".translation")});
    }
    out.lift = std::move(lift);
  }

  if (doc.contains("options")) {
    const Json &o = doc.at("options");
    if (!o.is_object())
      throw ParseError("options: expected an object");
    if (o.contains("bound_scale"))
      out.options.bound_scale =
          static_cast<unsigned>(count(o.at("bound_scale"), "options.bound_scale"));
    if (o.contains("max_candidates"))
      out.options.max_candidates =
          count(o.at("max_candidates"), "options.max_candidates");
    if (o.contains("distinctness_grid"))
      out.options.distinctness_grid =
          count(o.at("distinctness_grid"), "options.distinctness_grid");
    if (o.contains("verify_witnesses")) {
      if (!o.at("verify_witnesses").is_boolean())
        throw ParseError("options.verify_witnesses: expected a boolean");
      out.options.verify_witnesses = o.at("verify_witnesses").get<bool>();
    }
    if (out.options.bound_scale == 0)
      throw ParseError("options.bound_scale must be at least 1");
  }
  return out;
}

InputDocument load_document(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception &e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_document(doc);
}

// ---------------------------------------------------------------------------

Json rational_json(const Rational &q) { return format_rational(q); }
Json integer_json(const Integer &z) { return format_integer(z); }

Json vector_json(const RatVector &v) {
  Json j = Json::array();
  for (const auto &x : v)
    j.push_back(rational_json(x));
  return j;
}

Json int_vector_json(const IntVector &v) {
  Json j = Json::array();
  for (const auto &x : v)
    j.push_back(integer_json(x));
  return j;
}

Json matrix_json(const RatMatrix &m) {
  Json j = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    j.push_back(vector_json(m.row(r)));
  return j;
}

Json element_json(const CrystGroup &g, const AffineElement &e) {
  const auto d = g.decompose(e);
  return {{"holonomy_rep", g.reps()[d.rep_index].name},
          {"lattice_coords", int_vector_json(d.lattice_coords)},
          {"translation", vector_json(e.translation)}};
}

Json trace_json(const CrystGroup &g, const TraceVector &t) {
  Json j = Json::array();
  for (const auto &[c, k] : t.terms())
    j.push_back({{"branch", c.branch + 1},
                 {"holonomy_rep", g.reps()[c.rep_index].name},
                 {"lattice_coords", int_vector_json(c.lattice_coords)},
                 {"coefficient", integer_json(k)}});
  return j;
}

Invariant parse_invariant(const std::string &name) {
  if (name == "lefschetz")
    return Invariant::lefschetz;
  if (name == "nielsen")
    return Invariant::nielsen;
  if (name == "trace")
    return Invariant::trace;
  if (name == "all")
    return Invariant::all;
  throw ParseError("unknown invariant '" + name + "'");
}

AlgebraicResult compute_algebraic(const NvMorphism &f, Invariant which,
                                  const DocumentOptions &options,
                                  Execution exec) {
  AlgebraicResult r{invariant_subgroup(f), 0, 0, std::nullopt};
  r.lefschetz = lefschetz(r.inv, exec);
  r.nielsen = nielsen(r.inv, exec);
  if (which == Invariant::trace || which == Invariant::all) {
    ReidemeisterContext ctx(f, r.inv);
    r.trace = reidemeister_trace(ctx, {exec, options.verify_witnesses});
  }
  return r;
}

Json algebraic_json(const NvMorphism &f, const AlgebraicResult &r,
                    Invariant which) {
  const auto &g = f.group();
  Json out = Json::object();
  if (which == Invariant::lefschetz || which == Invariant::all)
    out["lefschetz"] = integer_json(r.lefschetz);
  if (which == Invariant::nielsen || which == Invariant::all)
    out["nielsen"] = integer_json(r.nielsen);
  if (r.trace)
    out["trace"] = trace_json(g, *r.trace);

  Json dets = Json::array();
  for (const auto &t : determinant_table(r.inv, Execution::serial))
    dets.push_back({{"branch", t.branch + 1},
                    {"alpha", g.reps()[t.quotient_rep].name},
                    {"matrix", matrix_json(r.inv.matrices[t.branch][t.quotient_rep])},
                    {"det", rational_json(t.det)}});
  Json orbits = Json::array();
  for (const auto &o : orbit_partition(f)) {
    Json members = Json::array();
    for (auto i : o.members)
      members.push_back(i + 1);
    orbits.push_back(members);
  }
  out["diagnostics"] = {{"S", matrix_json(r.inv.S.basis())},
                        {"index_pi_S", integer_json(r.inv.index_pi_S)},
                        {"index_pi_Gamma", integer_json(r.inv.index_pi_gamma)},
                        {"index_Gamma_S", integer_json(r.inv.index_gamma_S)},
                        {"determinants", dets},
                        {"orbits", orbits}};
  return out;
}

Json oracle_json(const NvMorphism &f, const OracleResult &r,
                 const LiftReport &lift_report) {
  const auto &g = f.group();
  Json points = Json::array();
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const auto &rec = r.records[k];
    points.push_back({{"point", vector_json(rec.point)},
                      {"branch", rec.branch + 1},
                      {"deck", element_json(g, rec.deck)},
                      {"index", rec.index},
                      {"class", r.class_of_record[k] + 1}});
  }
  Json warnings = Json::array();
  for (const auto &v : lift_report.distinctness_violations)
    warnings.push_back({{"point", vector_json(v.point)},
                        {"branches", {v.first + 1, v.second + 1}}});
  return {{"lefschetz", integer_json(r.lefschetz)},
          {"nielsen", integer_json(r.nielsen)},
          {"trace", trace_json(g, r.trace)},
          {"fixed_points", points},
          {"distinctness_warnings", warnings}};
}

} // namespace nvfix
