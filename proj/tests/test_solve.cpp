#include <doctest.h>

#include "tensordec/solve.hpp"

using namespace tensordec;

namespace {
UPoly<Fp> upoly(uint64_t p, std::vector<long long> coeffs_low_to_high) {
  UPoly<Fp> f{p};
  for (auto c : coeffs_low_to_high) f.c.push_back(Fp(p, c));
  f.trim();
  return f;
}
}  // namespace

TEST_CASE("univariate factorization over prime fields") {
  SUBCASE("x^2 - 1 over F_7") {
    auto fac = univariate_factor(upoly(7, {-1, 0, 1}));
    REQUIRE(fac.factors.size() == 2);
    CHECK(fac.factors[0].first.deg() == 1);
    CHECK(fac.factors[1].first.deg() == 1);
    std::set<int64_t> roots;
    for (auto& [f, m] : fac.factors) {
      CHECK(m == 1);
      roots.insert((-f.c[0]).value());
    }
    CHECK(roots == std::set<int64_t>({1, 6}));
  }
  SUBCASE("x^2 + 1 over F_5 splits as (x+2)(x+3)") {
    auto fac = univariate_factor(upoly(5, {1, 0, 1}));
    REQUIRE(fac.factors.size() == 2);
    std::set<int64_t> consts;
    for (auto& [f, m] : fac.factors) consts.insert(f.c[0].value());
    CHECK(consts == std::set<int64_t>({2, 3}));
  }
  SUBCASE("x^2 + 1 irreducible over F_7") {
    // exhaustive check that no root exists mod 7
    for (int64_t a = 0; a < 7; ++a) CHECK((a * a + 1) % 7 != 0);
    auto fac = univariate_factor(upoly(7, {1, 0, 1}));
    REQUIRE(fac.factors.size() == 1);
    CHECK(fac.factors[0].first.deg() == 2);
  }
  SUBCASE("x^5 - x over F_5 is the product of all linear factors") {
    auto fac = univariate_factor(upoly(5, {0, -1, 0, 0, 0, 1}));
    REQUIRE(fac.factors.size() == 5);
    std::set<int64_t> roots;
    for (auto& [f, m] : fac.factors) {
      CHECK(f.deg() == 1);
      roots.insert((-f.c[0]).value());
    }
    CHECK(roots.size() == 5);
  }
  SUBCASE("multiplicities and leading coefficient") {
    // 3 (x-1)^2 (x^2+1) over F_7
    auto f = umul(uscale(umul(upoly(7, {-1, 1}), upoly(7, {-1, 1})), Fp(7, 3)),
                  upoly(7, {1, 0, 1}));
    auto fac = univariate_factor(f);
    CHECK(fac.lead == Fp(7, 3));
    UPoly<Fp> rebuilt = UPoly<Fp>::constant(7, fac.lead);
    for (auto& [g, m] : fac.factors)
      for (int i = 0; i < m; ++i) rebuilt = umul(rebuilt, g);
    CHECK(rebuilt.c == f.c);
    CHECK_THROWS_AS(univariate_factor(UPoly<Fp>{uint64_t(7)}), domain_error);
  }
  SUBCASE("factorization over an extension field") {
    auto ctx = FqCtx::from_modulus(7, {1, 0, 1});  // F_49, g^2 = -1
    // x^2 + 1 = (x - g)(x + g) over F_49
    UPoly<Fq> f{ctx};
    f.c = {Fq(ctx, Fp(7, 1)), Fq(ctx, Fp(7, 0)), Fq(ctx, Fp(7, 1))};
    auto fac = univariate_factor(f);
    REQUIRE(fac.factors.size() == 2);
    for (auto& [g, m] : fac.factors) CHECK(g.deg() == 1);
  }
}

TEST_CASE("solve_zero_dim over prime fields") {
  uint64_t p = 7;
  auto x = Poly<Fp>::variable(p, 1, 0);
  auto one = Poly<Fp>::constant(p, 1, Fp(p, 1));
  SUBCASE("x^2 - 1 over F_7") {
    auto G = buchberger<Fp>({x * x - one}, MonomialOrder::grevlex());
    auto pts = solve_zero_dim(G);
    REQUIRE(pts.size() == 2);
    std::set<std::string> vals;
    for (auto& pt : pts) {
      CHECK(pt.multiplicity == 1);
      vals.insert(pt.coords[0].str());
    }
    CHECK(vals == std::set<std::string>({"1", "6"}));
  }
  SUBCASE("x^2 + 1 over F_5 has the rational roots 2 and 3") {
    uint64_t q = 5;
    auto y = Poly<Fp>::variable(q, 1, 0);
    auto G = buchberger<Fp>({y * y + Poly<Fp>::constant(q, 1, Fp(q, 1))}, MonomialOrder::grevlex());
    auto pts = solve_zero_dim(G);
    REQUIRE(pts.size() == 2);
    std::set<std::string> vals;
    for (auto& pt : pts) vals.insert(pt.coords[0].str());
    CHECK(vals == std::set<std::string>({"2", "3"}));
  }
  SUBCASE("x^2 + 1 over F_7 is a conjugate pair over F_49") {
    auto G = buchberger<Fp>({x * x + one}, MonomialOrder::grevlex());
    auto pts = solve_zero_dim(G);
    REQUIRE(pts.size() == 2);
    for (auto& pt : pts) {
      CHECK(pt.coords[0].ctx()->k == 2);
      Fq sq = pt.coords[0] * pt.coords[0];
      CHECK(sq == Fq(pt.coords[0].ctx(), Fp(p, -1)));
    }
    CHECK(pts[0].coords[0].frobenius() == pts[1].coords[0]);
  }
}

TEST_CASE("solve_zero_dim recovers constructed point sets") {
  uint64_t p = 32003;
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    // distinct x-coordinates, arbitrary y-values: shape-position construction
    std::set<int64_t> xs;
    while (xs.size() < 4) xs.insert(static_cast<int64_t>(rng_below(rng, p)));
    std::vector<Fp> xv(4), yv(4);
    int i = 0;
    for (auto v : xs) xv[i++] = Fp::from_raw(p, static_cast<uint64_t>(v));
    for (auto& y : yv) y = field_traits<Fp>::random(p, rng);
    // e(x) = prod (x - x_i), and y - Lagrange(x)
    auto X = Poly<Fp>::variable(p, 2, 0);
    auto Y = Poly<Fp>::variable(p, 2, 1);
    Poly<Fp> e = Poly<Fp>::constant(p, 2, Fp(p, 1));
    for (auto& xc : xv) e = e * (X - Poly<Fp>::constant(p, 2, xc));
    Poly<Fp> lagr(p, 2);
    for (int j = 0; j < 4; ++j) {
      Poly<Fp> lj = Poly<Fp>::constant(p, 2, Fp(p, 1));
      Fp denom(p, 1);
      for (int k = 0; k < 4; ++k) {
        if (k == j) continue;
        lj = lj * (X - Poly<Fp>::constant(p, 2, xv[k]));
        denom *= xv[j] - xv[k];
      }
      lagr = lagr + lj.scaled(yv[j] / denom);
    }
    auto G = buchberger<Fp>({e, Y - lagr}, MonomialOrder::grevlex());
    auto qb = quotient_basis(G);
    REQUIRE(qb.finite);
    auto pts = solve_zero_dim(G);
    long total = 0;
    for (auto& pt : pts) total += pt.multiplicity;
    CHECK(total == qb.degree());
    REQUIRE(pts.size() == 4);
    std::set<std::pair<int64_t, int64_t>> got, want;
    for (auto& pt : pts)
      got.insert({pt.coords[0].as_prime().value(), pt.coords[1].as_prime().value()});
    for (int j = 0; j < 4; ++j) want.insert({xv[j].value(), yv[j].value()});
    CHECK(got == want);
  }
}

TEST_CASE("rational roots with exact reconstruction") {
  SUBCASE("mixed multiplicities") {
    // (2x - 1)^2 (x + 3) = 4x^3 + 8x^2 - 11x + 3
    UPoly<Rat> f{rat_ctx{}};
    f.c = {Rat(3), Rat(-11), Rat(8), Rat(4)};
    auto rr = rational_roots(f);
    CHECK(rr.split_completely);
    REQUIRE(rr.roots.size() == 2);
    CHECK(rr.roots[0].first == Rat(-3));
    CHECK(rr.roots[0].second == 1);
    CHECK(rr.roots[1].first == Rat(1, 2));
    CHECK(rr.roots[1].second == 2);
  }
  SUBCASE("irrational content detected") {
    // (x^2 - 2)(x - 5)
    UPoly<Rat> f{rat_ctx{}};
    f.c = {Rat(10), Rat(-2), Rat(-5), Rat(1)};
    auto rr = rational_roots(f);
    CHECK_FALSE(rr.split_completely);
    REQUIRE(rr.roots.size() == 1);
    CHECK(rr.roots[0].first == Rat(5));
  }
  SUBCASE("large coefficients") {
    // roots 123456/789 and -1/1000000
    Rat r1(123456, 789), r2(-1, 1000000);
    UPoly<Rat> f{rat_ctx{}};
    f.c = {r1 * r2, -(r1 + r2), Rat(1)};
    auto rr = rational_roots(f);
    CHECK(rr.split_completely);
    REQUIRE(rr.roots.size() == 2);
    CHECK(rr.roots[0].first == r2);
    CHECK(rr.roots[1].first == r1);
  }
}

TEST_CASE("solve_zero_dim over the rationals") {
  auto x = Poly<Rat>::variable({}, 2, 0);
  auto y = Poly<Rat>::variable({}, 2, 1);
  auto c = [&](long long n, long long d2 = 1) {
    return Poly<Rat>::constant({}, 2, Rat(n, d2));
  };
  SUBCASE("rational point set {(1/2, 3), (-2, 5)}") {
    auto g1 = (x - c(1, 2)) * (x + c(2));
    // line through the two points: y = 3 + (x - 1/2) * (5 - 3) / (-2 - 1/2)
    Rat slope = Rat(2) / Rat(-5, 2);
    auto g2 = y - c(3) - (x - c(1, 2)).scaled(slope);
    auto G = buchberger<Rat>({g1, g2}, MonomialOrder::grevlex());
    auto pts = solve_zero_dim(G);
    REQUIRE(pts.size() == 2);
    std::set<std::pair<std::string, std::string>> got;
    for (auto& pt : pts) got.insert({pt.coords[0].str(), pt.coords[1].str()});
    std::set<std::pair<std::string, std::string>> want = {{"1/2", "3"}, {"-2", "5"}};
    CHECK(got == want);
  }
  SUBCASE("irrational points are an explicit error") {
    auto G = buchberger<Rat>({x * x - c(2), y - x}, MonomialOrder::grevlex());
    CHECK_THROWS_AS(solve_zero_dim(G), domain_error);
  }
}

TEST_CASE("unify_points embeds mixed extension degrees into one field") {
  uint64_t p = 7;
  auto x = Poly<Fp>::variable(p, 1, 0);
  auto one = Poly<Fp>::constant(p, 1, Fp(p, 1));
  // (x^2 + 1)(x - 3): one rational point and a conjugate pair
  auto G = buchberger<Fp>({(x * x + one) * (x - one.scaled(Fp(p, 3)))}, MonomialOrder::grevlex());
  auto pts = solve_zero_dim(G);
  REQUIRE(pts.size() == 3);
  auto uni = unify_points(p, pts, 99);
  CHECK(uni.field->k == 2);
  REQUIRE(uni.points.size() == 3);
  // the polynomial still vanishes at every unified point
  for (auto& pt : uni.points) {
    Fq v = pt.coords[0];
    Fq val = (v * v + Fq(uni.field, Fp(p, 1))) * (v - Fq(uni.field, Fp(p, 3)));
    CHECK(val.is_zero());
  }
}
