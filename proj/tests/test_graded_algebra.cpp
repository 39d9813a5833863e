#include "support.hpp"

#include <doctest.h>

using namespace carnot;
using test::vq;

TEST_CASE("heisenberg bch matches the matrix group law")
{
  const test::UpperTriangular n3(3);
  const auto alg = osculating_algebra_at(test::bundled_chart("heisenberg3"), VectorQ::Zero(3));
  CHECK(alg == n3.algebra);
  CHECK(bch_product(alg, vq({1, 0, 0}), vq({0, 1, 0})) == vq({1, 1, Rational(1, 2)}));

  Sampler rng(11);
  for (int i = 0; i < 30; ++i) {
    const VectorQ u = rng.vector(3), v = rng.vector(3);
    REQUIRE(bch_product(alg, u, v) == n3.bch(u, v));
  }
}

TEST_CASE("engel bch matches the 4x4 representation")
{
  const auto alg = osculating_algebra_at(test::bundled_chart("engel4"), VectorQ::Zero(4));
  CHECK(bch_product(alg, vq({1, 0, 0, 0}), vq({0, 1, 0, 0})) == vq({1, 1, Rational(1, 2), Rational(1, 12)}));
  Sampler rng(12);
  for (int i = 0; i < 30; ++i) {
    const VectorQ u = rng.vector(4), v = rng.vector(4);
    REQUIRE(bch_product(alg, u, v) == test::EngelMatrices::bch(u, v));
  }
}

TEST_CASE("depth four bch against strictly upper triangular 5x5 matrices")
{
  const test::UpperTriangular n5(5);
  REQUIRE(n5.algebra.dim() == 10);
  REQUIRE(n5.algebra.depth() == 4);
  CHECK(verify_algebra(n5.algebra).passed());
  Sampler rng(13);
  for (int i = 0; i < 10; ++i) {
    const VectorQ u = rng.vector(10), v = rng.vector(10);
    REQUIRE(bch_product(n5.algebra, u, v) == n5.bch(u, v));
  }
}

TEST_CASE("dynkin series low-order coefficients")
{
  const auto& terms = dynkin_series(2);
  // right-nested words are not a basis, so only [u,v] = w01 - w10 is fixed
  Rational c0, c1, c01, c10;
  for (const auto& t : terms) {
    if (t.word == std::vector<std::uint8_t>{0})
      c0 = t.coefficient;
    if (t.word == std::vector<std::uint8_t>{1})
      c1 = t.coefficient;
    if (t.word == std::vector<std::uint8_t>{0, 1})
      c01 = t.coefficient;
    if (t.word == std::vector<std::uint8_t>{1, 0})
      c10 = t.coefficient;
  }
  CHECK(c0 == 1);
  CHECK(c1 == 1);
  CHECK(c01 - c10 == Rational(1, 2));
}

TEST_CASE("group axioms and dilations on random data")
{
  const test::UpperTriangular n4(4);
  const auto& alg = n4.algebra;
  Sampler rng(14);
  const VectorQ zero = VectorQ::Zero(alg.dim());
  for (int i = 0; i < 20; ++i) {
    const VectorQ a = rng.vector(6), b = rng.vector(6), c = rng.vector(6);
    CHECK(bch_product(alg, bch_product(alg, a, b), c) == bch_product(alg, a, bch_product(alg, b, c)));
    CHECK(bch_product(alg, a, zero) == a);
    CHECK(is_zero_vector(bch_product(alg, group_inverse(alg, a), a)));
    const Rational lambda = rng.nonzero_rational();
    CHECK(dilate(alg, lambda, bracket(alg, a, b)) == bracket(alg, dilate(alg, lambda, a), dilate(alg, lambda, b)));
    CHECK(dilate(alg, lambda, bch_product(alg, a, b)) ==
          bch_product(alg, dilate(alg, lambda, a), dilate(alg, lambda, b)));
  }
}

TEST_CASE("double bch agrees with exact bch")
{
  const auto alg = osculating_algebra_at(test::bundled_chart("engel4"), VectorQ::Zero(4));
  const auto algd = alg.cast<double>();
  Sampler rng(15);
  for (int i = 0; i < 10; ++i) {
    const VectorQ u = rng.vector(4), v = rng.vector(4);
    const VectorX<double> exact = vector_cast<double>(bch_product(alg, u, v));
    const VectorX<double> approx = bch_product(algd, vector_cast<double>(u), vector_cast<double>(v));
    CHECK(max_abs<double>(exact - approx) < 1e-14);
  }
}

TEST_CASE("corrupted algebras are rejected with witnesses")
{
  const Manifest m = load_manifest(test::fixture("corrupt-algebras.json"));

  const CheckReport jacobi = verify_algebra(m.algebras.at("jacobi"));
  REQUIRE(!jacobi.passed());
  CHECK(jacobi.find("antisymmetry")->passed);
  CHECK(jacobi.find("gradedness")->passed);
  CHECK(!jacobi.find("jacobi")->passed);
  CHECK(jacobi.find("jacobi")->witness == "(a,b,c)=(1,2,3) cyclic sum (0, 0, 0, 0, 0, 0, 1)");

  const CheckReport graded = verify_algebra(m.algebras.at("gradedness"));
  CHECK(graded.first_failure()->name == "gradedness");
  CHECK(graded.first_failure()->witness == "(a,b,k)=(1,2,3)");

  const CheckReport anti = verify_algebra(m.algebras.at("antisymmetry"));
  CHECK(anti.first_failure()->name == "antisymmetry");
  CHECK(anti.first_failure()->witness == "(a,b,k)=(1,2,3)");
}

TEST_CASE("constructor and shape errors")
{
  CHECK_THROWS_AS(GradedLieAlgebra<Rational>({2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(GradedLieAlgebra<Rational>({0}), std::invalid_argument);
  CHECK_THROWS_AS(GradedLieAlgebra<Rational>({1, 1}, std::vector<Rational>(3)), DimensionMismatch);
  const GradedLieAlgebra<Rational> alg({1, 1, 2});
  CHECK_THROWS_AS(bracket(alg, vq({1, 0}), vq({0, 1, 0})), DimensionMismatch);
  CHECK_THROWS_AS(bch_product(alg, vq({1, 0}), vq({0, 1, 0})), DimensionMismatch);
  CHECK_THROWS_AS(alg.with_bracket(0, 3, vq({0, 0, 1})), std::out_of_range);
}

TEST_CASE("rational parsing and canonical rendering")
{
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(to_string(parse_rational("-3/6")) == "-1/2");
  CHECK(to_string(parse_rational("4/2")) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("exact linear algebra")
{
  MatrixQ a(2, 2);
  a << 1, 2, 3, 4;
  CHECK(determinant_exact(a) == -2);
  const auto inv = inverse_exact(a);
  REQUIRE(inv);
  CHECK(MatrixQ(a * *inv) == MatrixQ::Identity(2, 2));
  MatrixQ s(2, 2);
  s << 1, 2, 2, 4;
  CHECK(!inverse_exact(s));
  CHECK(rank_exact(s) == 1);
}
