#include <doctest.h>

#include "support.hpp"

using namespace nvfix;
using namespace nvfix::testing;

namespace {

RatVector rv(std::initializer_list<long> xs) {
  RatVector v;
  for (long x : xs)
    v.emplace_back(x);
  return v;
}

bool unimodular(const IntMatrix &u) { return abs(det(u)) == 1; }

bool is_diagonal(const IntMatrix &d) {
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (i != j && d(i, j) != 0)
        return false;
  return true;
}

} // namespace

TEST_SUITE("exact") {

TEST_CASE("rationals parse and print in lowest terms") {
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(format_rational(Rational(6, -4)) == "-3/2");
  CHECK(format_rational(Rational(4, 2)) == "2");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational("0.5"));
}

TEST_CASE("determinants") {
  const RatMatrix m = RatMatrix::from_rows({{0, 0}, {0, Rational(1, 2)}});
  CHECK(det(RatMatrix::identity(2) - m) == Rational(1, 2));
  CHECK(det(RatMatrix::identity(3)) == 1);
  CHECK(det(RatMatrix::from_rows({{-1, 0}, {0, -2}})) == 2);
  CHECK_THROWS_AS(det(RatMatrix(2, 3)), DimensionError);
}

TEST_CASE("hnf reproduces the input through a unimodular transform") {
  const IntMatrix m = IntMatrix::from_rows({{2, 4}, {6, 8}});
  const auto h = hnf(m);
  CHECK(h.U * m == h.H);
  CHECK(unimodular(h.U));
  CHECK(abs(det(h.H)) == 8);
  CHECK(h.rank == 2);

  const auto id = hnf(IntMatrix::identity(3));
  CHECK(id.H == IntMatrix::identity(3));
  CHECK(id.U == IntMatrix::identity(3));

  const auto z = hnf(IntMatrix(2, 2));
  CHECK(z.H.is_zero());
  CHECK(z.U == IntMatrix::identity(2));
  CHECK(z.rank == 0);
}

TEST_CASE("snf invariant factors") {
  auto s = snf(IntMatrix::from_rows({{-1, 0}, {0, -2}}));
  CHECK(s.factors == std::vector<Integer>{1, 2});

  const IntMatrix m = IntMatrix::from_rows({{2, 4}, {6, 8}});
  s = snf(m);
  CHECK(s.factors == std::vector<Integer>{2, 4});
  const IntMatrix d = s.U * m * s.V;
  CHECK(is_diagonal(d));
  CHECK(abs(d(0, 0) * d(1, 1)) == 8);

  CHECK(snf(IntMatrix::identity(3)).factors == std::vector<Integer>{1, 1, 1});
}

TEST_CASE("hnf and snf on random matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng.index(4), c = 1 + rng.index(4);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        m(i, j) = rng.uniform(-5, 5);
    const auto h = hnf(m);
    CHECK(unimodular(h.U));
    CHECK(h.U * m == h.H);
    const auto s = snf(m);
    CHECK(unimodular(s.U));
    CHECK(unimodular(s.V));
    const IntMatrix d = s.U * m * s.V;
    CHECK(is_diagonal(d));
    for (std::size_t k = 0; k < s.factors.size(); ++k) {
      CHECK(d(k, k) == s.factors[k]);
      if (k + 1 < s.factors.size() && s.factors[k] != 0)
        CHECK(s.factors[k + 1] % s.factors[k] == 0);
    }
  }
}

TEST_CASE("cokernel order equals |det| for random square matrices") {
  Rng rng(12);
  int nonsingular = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.index(4);
    const IntMatrix a = random_int_matrix(rng, m, 5);
    const Integer d = det(a);
    const auto cok = cokernel_of_relations(a, m);
    if (d == 0) {
      CHECK_FALSE(cok.finite());
      continue;
    }
    ++nonsingular;
    REQUIRE(cok.finite());
    CHECK(cok.order() == abs(d));
    if (abs(d) <= 200)
      CHECK(cok.representatives().size() == Integer(abs(d)).get_ui());
  }
  CHECK(nonsingular > 200);
}

TEST_CASE("lattice membership") {
  const Lattice L(2, {rv({2, 0}), rv({1, 1})});
  auto c = L.coordinates(rv({3, 1}));
  REQUIRE(c);
  CHECK(to_rational(*c) * L.basis() == rv({3, 1}));
  CHECK_FALSE(L.contains(rv({1, 0})));
  auto z = L.coordinates(rv({0, 0}));
  REQUIRE(z);
  CHECK(*z == IntVector{0, 0});
  CHECK_THROWS_AS(L.coordinates(rv({1, 0, 0})), DimensionError);
}

TEST_CASE("lattice membership coordinates are exact for the given basis") {
  // the canonical basis differs from the generators, coordinates refer to it
  const Lattice L(2, {rv({2, 0}), rv({1, 1})});
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const long x = rng.uniform(-10, 10), y = rng.uniform(-10, 10);
    const RatVector v = add(scale(rv({2, 0}), x), scale(rv({1, 1}), y));
    auto c = L.coordinates(v);
    REQUIRE(c);
    CHECK(to_rational(*c) * L.basis() == v);
  }
}

TEST_CASE("lattice intersection") {
  const Lattice two = Lattice::standard(2).scaled(2);
  const Lattice three = Lattice::standard(2).scaled(3);
  CHECK(lattice_intersect(two, three) == Lattice::standard(2).scaled(6));
  CHECK(lattice_intersect(two, two) == two);

  const Lattice a(2, {rv({1, 0}), rv({0, 2})});
  const Lattice b(2, {rv({2, 0}), rv({0, 1})});
  const Lattice ab = lattice_intersect(a, b);
  CHECK(ab == Lattice(2, {rv({2, 0}), rv({0, 2})}));
  for (long x = -4; x <= 4; ++x)
    for (long y = -4; y <= 4; ++y) {
      const RatVector v = rv({x, y});
      CHECK(ab.contains(v) == (a.contains(v) && b.contains(v)));
    }
}

TEST_CASE("lattice intersection is commutative, associative and contained") {
  Rng rng(14);
  auto random_lattice = [&](std::size_t m) {
    while (true) {
      IntMatrix a = random_int_matrix(rng, m, 4);
      if (det(a) == 0)
        continue;
      std::vector<RatVector> g;
      for (std::size_t i = 0; i < m; ++i)
        g.push_back(scale(to_rational(a.row(i)), Rational(1, rng.uniform(1, 3))));
      return Lattice(m, g);
    }
  };
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng.index(3);
    const Lattice a = random_lattice(m), b = random_lattice(m),
                  c = random_lattice(m);
    const Lattice ab = lattice_intersect(a, b);
    CHECK(ab == lattice_intersect(b, a));
    CHECK(lattice_intersect(ab, c) ==
          lattice_intersect(a, lattice_intersect(b, c)));
    for (const auto &v : ab.basis_vectors()) {
      CHECK(a.contains(v));
      CHECK(b.contains(v));
    }
    CHECK(a.contains(ab));
    CHECK(a.index_of(ab) * ab.covolume().get_den() > 0);
  }
}

TEST_CASE("equal lattices compare equal whatever the generators") {
  const Lattice a(2, {rv({1, 0}), rv({0, 1})});
  const Lattice b(2, {rv({1, 1}), rv({1, 2}), rv({3, 5})});
  CHECK(a == b);
  CHECK(Lattice(1, {RatVector{Rational(1, 2)}, RatVector{Rational(1, 3)}}) ==
        Lattice(1, {RatVector{Rational(1, 6)}}));
}

TEST_CASE("solve_affine_lattice") {
  const Lattice Z2 = Lattice::standard(2);
  auto s = solve_affine_lattice(RatMatrix::identity(2), rv({1, 0}), Z2);
  REQUIRE(s.single_point());
  CHECK(s.point == rv({1, 0}));

  s = solve_affine_lattice(RatMatrix(2, 2), rv({1, 0}), Z2);
  CHECK(s.empty);

  const RatMatrix a = RatMatrix::from_rows({{1, 0}, {0, 0}});
  s = solve_affine_lattice(a, rv({2, 0}), Z2);
  REQUIRE_FALSE(s.empty);
  REQUIRE(s.directions.size() == 1);
  for (long k = -3; k <= 3; ++k) {
    const RatVector p = add(s.point, scale(s.directions[0], k));
    CHECK(a * p == rv({2, 0}));
    CHECK(p[0] == 2);
  }
  CHECK(abs(s.directions[0][1]) == 1);

  // no integral solution although a rational one exists
  s = solve_affine_lattice(RatMatrix::identity(2).scaled(2), rv({1, 0}), Z2);
  CHECK(s.empty);
}

TEST_CASE("solve_affine_lattice agrees with brute force") {
  Rng rng(15);
  const Lattice Z2 = Lattice::standard(2);
  for (int trial = 0; trial < 100; ++trial) {
    const RatMatrix a = to_rational(random_int_matrix(rng, 2, 3));
    const RatVector b = rv({rng.uniform(-4, 4), rng.uniform(-4, 4)});
    const auto s = solve_affine_lattice(a, b, Z2);
    bool brute = false;
    for (long x = -12; x <= 12 && !brute; ++x)
      for (long y = -12; y <= 12 && !brute; ++y)
        brute = a * rv({x, y}) == b;
    if (brute)
      CHECK_FALSE(s.empty);
    if (!s.empty) {
      CHECK(a * s.point == b);
      CHECK(Z2.contains(s.point));
      for (const auto &d : s.directions)
        CHECK(is_zero(a * d));
    }
  }
}

TEST_CASE("cokernel examples") {
  const Lattice Z2 = Lattice::standard(2);
  std::vector<RatVector> images = {rv({1, 0}), rv({0, 1})};
  auto cok = cokernel(images, Z2);
  CHECK(cok.finite());
  CHECK(cok.order() == 1);

  images = {rv({-1, 0}), rv({0, -2})};
  cok = cokernel(images, Z2);
  CHECK(cok.invariant_factors == std::vector<Integer>{1, 2});
  CHECK(cok.representatives().size() == 2);

  images = {RatVector{Rational(0)}};
  cok = cokernel(images, Lattice::standard(1));
  CHECK_FALSE(cok.finite());
  CHECK_THROWS_AS(cok.representatives(), std::logic_error);
}

TEST_CASE("cokernel normal forms are class invariants") {
  Rng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const IntMatrix a = random_int_matrix(rng, 2, 4);
    if (det(a) == 0)
      continue;
    const auto cok = cokernel_of_relations(a, 2);
    const auto reps = cok.representatives();
    for (std::size_t i = 0; i < reps.size(); ++i) {
      CHECK(cok.canonical(reps[i]) == reps[i]);
      for (std::size_t j = i + 1; j < reps.size(); ++j)
        CHECK(cok.normal_form(reps[i]) != cok.normal_form(reps[j]));
    }
    IntVector x{rng.uniform(-9, 9), rng.uniform(-9, 9)};
    IntVector y = x;
    const long k0 = rng.uniform(-3, 3), k1 = rng.uniform(-3, 3);
    for (std::size_t j = 0; j < 2; ++j)
      y[j] += k0 * a(0, j) + k1 * a(1, j);
    CHECK(cok.normal_form(x) == cok.normal_form(y));
  }
}

} // TEST_SUITE
