#include <doctest.h>

#include "tensordec/multipoly.hpp"

using namespace tensordec;

namespace {
uint64_t P = 32003;
Poly<Fp> X(int nvars, int i) { return Poly<Fp>::variable(P, nvars, i); }
}  // namespace

TEST_CASE("polynomial arithmetic") {
  auto x0 = X(2, 0), x1 = X(2, 1);
  CHECK((x0 + x1) * (x0 - x1) == x0 * x0 - x1 * x1);
  Poly<Fp> zero(P, 2);
  CHECK(((x0 + x1) * zero).is_zero());
  uint64_t q = 5;
  auto y0 = Poly<Fp>::variable(q, 2, 0), y1 = Poly<Fp>::variable(q, 2, 1);
  auto f = (y0 + y1.scaled(Fp(q, 2))).pow(2);
  auto expect = y0 * y0 + (y0 * y1).scaled(Fp(q, 4)) + (y1 * y1).scaled(Fp(q, 4));
  CHECK(f == expect);
  CHECK_THROWS_AS(X(2, 0) + X(3, 0), domain_error);
}

TEST_CASE("partial derivatives") {
  auto x0 = X(2, 0), x1 = X(2, 1);
  auto f = x0.pow(3);
  CHECK(f.derivative(0) == (x0 * x0).scaled(Fp(P, 3)));
  CHECK(f.derivative(1).is_zero());
  auto g = (x0 + x1).pow(4);
  CHECK(g.derivative(0, 2) == (x0 + x1).pow(2).scaled(Fp(P, 12)));
  CHECK(g.derivative(0).derivative(1) == g.derivative(1).derivative(0));
  // small characteristic rejected
  auto h = Poly<Fp>::variable(5, 1, 0).pow(6);
  CHECK_THROWS_AS(h.derivative(0), small_characteristic_error);
}

TEST_CASE("expand_power_linear") {
  SUBCASE("pure power") {
    Vec<Fp> L = zero_vector<Fp>(P, 3);
    L[0] = Fp(P, 1);
    CHECK(expand_power_linear(L, 5) == X(3, 0).pow(5));
  }
  SUBCASE("(x0 + x1)^2") {
    Vec<Fp> L = zero_vector<Fp>(P, 2);
    L[0] = Fp(P, 1);
    L[1] = Fp(P, 1);
    auto x0 = X(2, 0), x1 = X(2, 1);
    CHECK(expand_power_linear(L, 2) == x0 * x0 + (x0 * x1).scaled(Fp(P, 2)) + x1 * x1);
  }
  SUBCASE("multinomial coefficient of x0*x1*x2 in (x0+2x1+3x2)^3") {
    Vec<Fp> L = zero_vector<Fp>(P, 3);
    L[0] = Fp(P, 1);
    L[1] = Fp(P, 2);
    L[2] = Fp(P, 3);
    auto f = expand_power_linear(L, 3);
    MultiIndex m = {1, 1, 1};
    CHECK(f.coeff(m) == Fp(P, 36));  // 6 * 1 * 2 * 3
  }
  SUBCASE("zero form rejected") {
    Vec<Fp> L = zero_vector<Fp>(P, 2);
    CHECK_THROWS_AS(expand_power_linear(L, 2), domain_error);
  }
}

TEST_CASE("monomial bases") {
  auto b1 = monomial_basis(2, 1);
  REQUIRE(b1.size() == 2);
  CHECK(b1[0] == MultiIndex({1, 0}));
  CHECK(b1[1] == MultiIndex({0, 1}));
  CHECK(monomial_basis(3, 2).size() == 6);
  auto b3 = monomial_basis(3, 3);
  REQUIRE(b3.size() == 10);
  CHECK(b3[0] == MultiIndex({3, 0, 0}));  // first in lex
}

TEST_CASE("coefficient vectors") {
  auto x0 = X(2, 0);
  auto v = coeff_vector(x0 * x0, 2);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == Fp(P, 1));
  CHECK(v[1].is_zero());
  CHECK(v[2].is_zero());
  Poly<Fp> zero(P, 2);
  auto vz = coeff_vector(zero, 2);
  for (Index i = 0; i < vz.size(); ++i) CHECK(vz[i].is_zero());
  CHECK_THROWS_AS(coeff_vector(x0 + x0 * x0, 2), domain_error);

  // round trip and the expand_power_linear entry formula
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    Vec<Fp> L = zero_vector<Fp>(P, 3);
    for (Index i = 0; i < 3; ++i) L[i] = field_traits<Fp>::random(P, rng);
    if (L[0].is_zero()) L[0] = Fp(P, 1);
    auto f = expand_power_linear(L, 4);
    auto cv = coeff_vector(f, 4);
    CHECK(poly_from_coeff_vector<Fp>(P, 3, 4, cv) == f);
    auto basis = monomial_basis(3, 4);
    for (size_t b = 0; b < basis.size(); ++b) {
      Fp expect = field_traits<Fp>::from_bigint(P, multinomial(4, basis[b]));
      for (int i = 0; i < 3; ++i)
        for (int e = 0; e < basis[b][i]; ++e) expect *= L[i];
      CHECK(cv[static_cast<Index>(b)] == expect);
    }
  }
}

TEST_CASE("Euler identity on random homogeneous polynomials") {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    int n = 1 + static_cast<int>(rng_below(rng, 3));
    int d = 2 + static_cast<int>(rng_below(rng, 4));
    auto basis = monomial_basis(n + 1, d);
    std::vector<Poly<Fp>::Term> terms;
    for (const auto& m : basis) {
      Fp c = field_traits<Fp>::random(P, rng);
      if (!c.is_zero()) terms.push_back({m, c});
    }
    Poly<Fp> f = Poly<Fp>::from_terms(P, n + 1, MonomialOrder::grevlex(), std::move(terms));
    Poly<Fp> sum(P, n + 1);
    for (int i = 0; i <= n; ++i)
      sum = sum + Poly<Fp>::variable(P, n + 1, i) * f.derivative(i);
    CHECK(sum == f.scaled(Fp(P, d)));
  }
}

TEST_CASE("monomial orders are multiplicative total orders") {
  Rng rng(13);
  for (MonomialOrder ord : {MonomialOrder::grevlex(), MonomialOrder::lex(),
                            MonomialOrder::elimination(2)}) {
    for (int t = 0; t < 200; ++t) {
      MultiIndex a(4), b(4), c(4);
      for (int i = 0; i < 4; ++i) {
        a[i] = static_cast<uint16_t>(rng_below(rng, 4));
        b[i] = static_cast<uint16_t>(rng_below(rng, 4));
        c[i] = static_cast<uint16_t>(rng_below(rng, 4));
      }
      if (a != b) CHECK(ord.less(a, b) != ord.less(b, a));
      if (ord.less(a, b)) CHECK(ord.less(mi_add(a, c), mi_add(b, c)));
    }
  }
  // grevlex on two variables: x^2 > xy > y^2
  MonomialOrder g = MonomialOrder::grevlex();
  CHECK(g.greater(MultiIndex({2, 0}), MultiIndex({1, 1})));
  CHECK(g.greater(MultiIndex({1, 1}), MultiIndex({0, 2})));
}

TEST_CASE("substitution") {
  auto x0 = X(2, 0), x1 = X(2, 1);
  auto f = x0 * x0 + x1;
  // x0 -> x1 gives x1^2 + x1
  CHECK(f.substitute_var(0, x1) == x1 * x1 + x1);
  // full substitution into a 3-variable ring
  std::vector<Poly<Fp>> subs = {X(3, 1) + X(3, 2), X(3, 0)};
  auto g = f.substitute(subs);
  auto y0 = X(3, 0), y1 = X(3, 1), y2 = X(3, 2);
  CHECK(g == (y1 + y2) * (y1 + y2) + y0);
}
