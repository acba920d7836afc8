#include <doctest.h>

#include "support.hpp"

using namespace nvfix;
using namespace nvfix::testing;

namespace {

Json klein_json() {
  return Json::parse(R"({
    "group": {
      "dimension": 2,
      "lattice": [{"name": "a", "vector": ["1", "0"]},
                  {"name": "c", "vector": ["0", "1"]}],
      "holonomy": [{"name": "b", "translation": ["0", "1/2"],
                    "matrix": [["-1", "0"], ["0", "1"]]}]
    },
    "morphism": {
      "n": 2,
      "images": {
        "a": {"components": ["1", "1"], "permutation": [1, 2]},
        "c": {"components": ["b", "b"], "permutation": [1, 2]},
        "b": {"components": ["b", "1"], "permutation": [2, 1]}
      }
    }
  })");
}

void check_parse_error(const Json &doc, const std::string &needle) {
  try {
    parse_document(doc);
    FAIL("expected a parse error mentioning " << needle);
  } catch (const ParseError &e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

} // namespace

TEST_SUITE("document") {

TEST_CASE("a document parses into the same morphism as the fixture") {
  const auto doc = parse_document(klein_json());
  CHECK(doc.n == 2);
  CHECK_FALSE(doc.lift);
  const auto f = doc.morphism();
  const auto g = fixture("klein").morphism();
  CHECK(f.images() == g.images());
  CHECK(f.group().lattice() == g.group().lattice());
}

TEST_CASE("permutation defaults to the identity and integers are accepted") {
  Json j = klein_json();
  j["morphism"]["images"]["a"].erase("permutation");
  j["group"]["lattice"][0]["vector"] = {1, 0};
  const auto doc = parse_document(j);
  CHECK(doc.images[0].perm == Permutation{0, 1});
  CHECK(doc.group.lattice_basis()[0] == RatVector{1, 0});
}

TEST_CASE("parse errors") {
  Json j = klein_json();
  j["morphism"]["images"]["b"]["permutation"] = {1, 1};
  check_parse_error(j, "not a permutation");

  j = klein_json();
  j["morphism"]["images"]["b"]["permutation"] = {1, 3};
  check_parse_error(j, "out of range");

  j = klein_json();
  j["morphism"]["images"]["a"]["components"] = {"1"};
  check_parse_error(j, "components");

  j = klein_json();
  j["morphism"]["images"]["c"]["components"][0] = "d";
  check_parse_error(j, "unknown generator 'd'");

  j = klein_json();
  j["morphism"]["images"].erase("c");
  check_parse_error(j, "missing image");

  j = klein_json();
  j["group"]["lattice"][0]["vector"] = {"1"};
  check_parse_error(j, "vector of length");

  j = klein_json();
  j["group"]["lattice"][0]["vector"][0] = "0.5";
  check_parse_error(j, "group");

  j = klein_json();
  j["group"]["holonomy"][0]["name"] = "a";
  check_parse_error(j, "duplicate generator name");

  j = klein_json();
  j["group"]["dimension"] = 0;
  check_parse_error(j, "dimension");

  j = klein_json();
  j["lift"] = {{"branches", Json::array()}};
  check_parse_error(j, "lift.branches");

  j = klein_json();
  j["options"] = {{"bound_scale", 0}};
  check_parse_error(j, "bound_scale");

  check_parse_error(Json::array(), "JSON object");
  CHECK_THROWS_AS(load_document("/nonexistent/input.json"), ParseError);
}

TEST_CASE("options block") {
  Json j = klein_json();
  j["options"] = {{"bound_scale", 3},
                  {"max_candidates", 1000},
                  {"distinctness_grid", 4},
                  {"verify_witnesses", false}};
  const auto doc = parse_document(j);
  CHECK(doc.options.bound_scale == 3);
  CHECK(doc.options.max_candidates == 1000);
  CHECK(doc.options.distinctness_grid == 4);
  CHECK_FALSE(doc.options.verify_witnesses);
}

TEST_CASE("parse_word") {
  const CrystGroup g = fixture("klein").group;
  CHECK(parse_word(g, "1").empty());
  const Word w = parse_word(g, "a^2 * b^-1*c");
  REQUIRE(w.size() == 3);
  CHECK(w[0].generator == 0);
  CHECK(w[0].exponent == 2);
  CHECK(w[1].generator == 2);
  CHECK(w[1].exponent == -1);
  CHECK(g.format_word(w) == "a^2*b^-1*c");
  CHECK(parse_word(g, "a^0").empty());
  CHECK_THROWS_AS(parse_word(g, ""), ParseError);
  CHECK_THROWS_AS(parse_word(g, "a^x"), ParseError);
  CHECK_THROWS_AS(parse_word(g, "z"), ParseError);
}

TEST_CASE("format_word and parse_word round trip") {
  Rng rng(71);
  const CrystGroup g = fixture("hantzsche_wendt_triple").group;
  for (int trial = 0; trial < 50; ++trial) {
    const Word w = random_word(rng, g, 1 + rng.index(6));
    CHECK(g.evaluate(parse_word(g, g.format_word(w))) == g.evaluate(w));
  }
}

TEST_CASE("numbers serialize as exact strings") {
  Rng rng(72);
  for (int trial = 0; trial < 100; ++trial) {
    Rational q(rng.uniform(-1000, 1000), rng.uniform(1, 97));
    q.canonicalize();
    const Json j = rational_json(q);
    REQUIRE(j.is_string());
    CHECK(parse_rational(j.get<std::string>()) == q);
    CHECK(parse_rational(Json::parse(j.dump()).get<std::string>()) == q);
  }
  const Integer big("123456789012345678901234567890");
  CHECK(integer_json(big).get<std::string>() == "123456789012345678901234567890");
}

TEST_CASE("algebraic result document for the Klein bottle") {
  const NvMorphism f = fixture("klein").morphism();
  const auto r = compute_algebraic(f, Invariant::all, {}, Execution::serial);
  const Json j = algebraic_json(f, r, Invariant::all);
  CHECK(j["lefschetz"] == "1");
  CHECK(j["nielsen"] == "1");
  REQUIRE(j["trace"].size() == 1);
  CHECK(j["trace"][0]["coefficient"] == "1");
  CHECK(j["trace"][0]["branch"] == 1);
  CHECK(j["trace"][0]["holonomy_rep"] == "1");
  const Json &d = j["diagnostics"];
  CHECK(d["index_pi_Gamma"] == "2");
  CHECK(d["index_pi_S"] == "4");
  CHECK(d["S"] == Json::parse(R"([["1","0"],["0","2"]])"));
  REQUIRE(d["determinants"].size() == 4);
  for (const auto &t : d["determinants"])
    CHECK(t["det"] == "1/2");
  CHECK(d["orbits"] == Json::parse("[[1,2]]"));

  const auto only_l = compute_algebraic(f, Invariant::lefschetz, {});
  const Json jl = algebraic_json(f, only_l, Invariant::lefschetz);
  CHECK(jl.contains("lefschetz"));
  CHECK_FALSE(jl.contains("nielsen"));
  CHECK_FALSE(jl.contains("trace"));
}

TEST_CASE("serialized results are deterministic") {
  for (const auto &name : lift_fixtures()) {
    const auto doc = fixture(name);
    const NvMorphism f = doc.morphism();
    const auto a = compute_algebraic(f, Invariant::all, doc.options, Execution::serial);
    const auto b = compute_algebraic(f, Invariant::all, doc.options, Execution::parallel);
    CHECK(algebraic_json(f, a, Invariant::all).dump() ==
          algebraic_json(f, b, Invariant::all).dump());

    const ReidemeisterContext ctx(f, a.inv);
    const auto lr = verify_lift(f, *doc.lift);
    const auto o1 = oracle_invariants(*doc.lift, ctx, {Execution::serial, 1, 5'000'000});
    const auto o2 = oracle_invariants(*doc.lift, ctx, {Execution::parallel, 1, 5'000'000});
    CHECK(oracle_json(f, o1, lr).dump() == oracle_json(f, o2, lr).dump());
  }
}

TEST_CASE("trace coefficients read back to the Lefschetz number") {
  for (const auto &name : all_fixtures()) {
    const NvMorphism f = fixture(name).morphism();
    const auto r = compute_algebraic(f, Invariant::all, {});
    Integer sum = 0;
    const Json j = algebraic_json(f, r, Invariant::all);
    for (const auto &t : j["trace"])
      sum += Integer(t["coefficient"].get<std::string>());
    CHECK(sum == r.lefschetz);
  }
}

TEST_CASE("parse_invariant") {
  CHECK(parse_invariant("trace") == Invariant::trace);
  CHECK(parse_invariant("all") == Invariant::all);
  CHECK_THROWS_AS(parse_invariant("euler"), ParseError);
}

} // TEST_SUITE
