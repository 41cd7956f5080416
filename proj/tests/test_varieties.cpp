#include <doctest.h>

#include "tensordec/generators.hpp"

using namespace tensordec;

namespace {
uint64_t P = 32003;

template <class K>
Vec<K> random_vec(typename field_traits<K>::ctx_t ctx, int len, Rng& rng) {
  Vec<K> v = zero_vector<K>(ctx, len);
  for (Index i = 0; i < len; ++i) v[i] = field_traits<K>::random(ctx, rng);
  return v;
}
}  // namespace

TEST_CASE("veronese equations") {
  SUBCASE("the conic in P^2") {
    auto model = veronese_equations<Fp>(P, 1, 2);
    auto gens = ambient_generators(model);
    REQUIRE(gens.size() == 1);  // the discriminant minor
    CHECK(gens[0].degree() == 2);
    CHECK_THROWS_AS(veronese_equations<Fp>(P, 1, 1), domain_error);
  }
  SUBCASE("twisted cubic: 3 independent quadrics vanishing on (1, t, t^2, t^3)-type points") {
    auto model = veronese_equations<Fp>(P, 1, 3);
    auto gens = interreduce_linear(ambient_generators(model));
    CHECK(gens.size() == 3);
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
      Vec<Fp> L = random_vec<Fp>(P, 2, rng);
      if (L[0].is_zero() && L[1].is_zero()) continue;
      Vec<Fp> pt = coeff_vector(expand_power_linear(L, 3), 3);
      for (const auto& g : gens) CHECK(g.evaluate(pt).is_zero());
    }
  }
  SUBCASE("generators vanish on random Veronese points in higher dimension") {
    auto model = veronese_equations<Fp>(P, 2, 3);
    const auto& gens = ambient_generators(model);
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
      Vec<Fp> L = random_vec<Fp>(P, 3, rng);
      if (L[0].is_zero()) L[0] = Fp(P, 1);
      Vec<Fp> pt = coeff_vector(expand_power_linear(L, 3), 3);
      for (const auto& g : gens) CHECK(g.evaluate(pt).is_zero());
    }
  }
}

TEST_CASE("symmetric secant equations") {
  SUBCASE("binary quadrics: one discriminant") {
    auto model = symmetric_secant_equations<Fp>(P, 1, 1);
    CHECK(ambient_generators(model).size() == 1);
  }
  SUBCASE("3-minors of the generic 4x4 symmetric matrix: 10 distinct cubics") {
    auto model = symmetric_secant_equations<Fp>(P, 3, 2);
    CHECK(ambient_generators(model).size() == 10);
  }
  SUBCASE("secant index out of range") {
    CHECK_THROWS_AS(symmetric_secant_equations<Fp>(P, 3, 4), domain_error);
  }
  SUBCASE("generators vanish on sums of r squares") {
    Rng rng(7);
    for (int r = 1; r <= 2; ++r) {
      auto model = symmetric_secant_equations<Fp>(P, 2, r);
      const auto& gens = ambient_generators(model);
      for (int t = 0; t < 50; ++t) {
        Poly<Fp> f(P, 3);
        for (int i = 0; i < r; ++i) {
          Vec<Fp> L = random_vec<Fp>(P, 3, rng);
          if (L[0].is_zero()) L[0] = Fp(P, 1);
          f = f + expand_power_linear(L, 2);
        }
        Vec<Fp> pt = coeff_vector(f, 2);
        for (const auto& g : gens) CHECK(g.evaluate(pt).is_zero());
      }
    }
  }
}

TEST_CASE("matrix secant equations") {
  SUBCASE("2x2 determinant") {
    auto model = matrix_secant_equations<Fp>(P, 2, 2, 1);
    auto gens = ambient_generators(model);
    REQUIRE(gens.size() == 1);
    // ad - bc up to sign; coordinates row-major a,b,c,d
    auto a = Poly<Fp>::variable(P, 4, 0), b = Poly<Fp>::variable(P, 4, 1);
    auto c = Poly<Fp>::variable(P, 4, 2), d = Poly<Fp>::variable(P, 4, 3);
    CHECK(gens[0] == (a * d - b * c).monic());
  }
  SUBCASE("3-minors of a generic 4x4: C(4,3)^2 = 16 of them") {
    auto model = matrix_secant_equations<Fp>(P, 4, 4, 2);
    CHECK(ambient_generators(model).size() == 16);
    CHECK_THROWS_AS(matrix_secant_equations<Fp>(P, 4, 4, 4), domain_error);
  }
  SUBCASE("vanish on random low-rank matrices") {
    Rng rng(9);
    auto model = matrix_secant_equations<Fp>(P, 3, 4, 2);
    const auto& gens = ambient_generators(model);
    for (int t = 0; t < 100; ++t) {
      // random rank-2 3x4 matrix, flattened row-major
      Vec<Fp> u1 = random_vec<Fp>(P, 3, rng), v1 = random_vec<Fp>(P, 4, rng);
      Vec<Fp> u2 = random_vec<Fp>(P, 3, rng), v2 = random_vec<Fp>(P, 4, rng);
      Vec<Fp> pt = zero_vector<Fp>(P, 12);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) pt[4 * i + j] = u1[i] * v1[j] + u2[i] * v2[j];
      for (const auto& g : gens) CHECK(g.evaluate(pt).is_zero());
    }
  }
}

TEST_CASE("restriction to linear subspaces") {
  SUBCASE("restricting to the full ambient space returns the generators") {
    auto model = veronese_equations<Fp>(P, 1, 2);
    int N = static_cast<int>(model.ambient_coords());
    LinearSubspace<Fp> H{N, identity_matrix<Fp>(P, N), "full"};
    auto restricted = restrict_equations(model, H);
    auto gens = ambient_generators(model);
    REQUIRE(restricted.size() == gens.size());
    for (size_t i = 0; i < gens.size(); ++i) CHECK(restricted[i] == gens[i].monic());
  }
  SUBCASE("a point on the variety restricts to the zero system") {
    auto model = veronese_equations<Fp>(P, 1, 3);
    Rng rng(11);
    Vec<Fp> L = random_vec<Fp>(P, 2, rng);
    L[0] = Fp(P, 1);
    Vec<Fp> pt = coeff_vector(expand_power_linear(L, 3), 3);
    LinearSubspace<Fp> H{4, mat_from_rows<Fp>({pt}, P, 4), "pt"};
    CHECK(restrict_equations(model, H).empty());
    // and intersect reports the single point
    auto sec = intersect_linear_section(model, H);
    CHECK(sec.zero_dimensional);
    CHECK(sec.degree == 1);
  }
  SUBCASE("dimension mismatch rejected") {
    auto model = veronese_equations<Fp>(P, 1, 2);
    LinearSubspace<Fp> H{5, identity_matrix<Fp>(P, 5), "wrong"};
    CHECK_THROWS_AS(restrict_equations(model, H), domain_error);
  }
}

TEST_CASE("linear sections of the Veronese surface") {
  // a generic P^3 inside P^5 meets the quadratic Veronese surface in 4 points
  Rng rng(13);
  auto model = veronese_equations<Fp>(P, 2, 2);
  Mat<Fp> span = zero_matrix<Fp>(P, 4, 6);
  for (Index i = 0; i < 4; ++i) span.row(i) = random_vec<Fp>(P, 6, rng).transpose();
  LinearSubspace<Fp> H = make_subspace(span, "generic P3");
  SectionOpts opts;
  opts.seed = 17;
  auto sec = intersect_linear_section(model, H, opts);
  CHECK(sec.zero_dimensional);
  CHECK(sec.degree == 4);
  long mult = 0;
  for (auto& pt : sec.points) mult += pt.multiplicity;
  CHECK(mult == 4);
  // cross-check the degree through the quotient basis of the restricted system
  auto restricted = restrict_equations(model, H);
  // dehomogenize on a fixed chart and recount
  Vec<Fp> ell = zero_vector<Fp>(P, 4);
  ell[0] = Fp(P, 1);
  auto affine = vardetail::chart_substitution(restricted, ell, 0);
  auto qb = quotient_basis(buchberger(affine, MonomialOrder::grevlex()));
  CHECK(qb.finite);
  CHECK(qb.degree() == 4);
}

TEST_CASE("sections spanned by points of the variety recover those points") {
  Rng rng(19);
  for (int t = 0; t < 5; ++t) {
    auto model = veronese_equations<Fp>(P, 2, 2);
    int h = 4;
    std::vector<Vec<Fp>> pts;
    Mat<Fp> span = zero_matrix<Fp>(P, h, 6);
    for (int i = 0; i < h; ++i) {
      Vec<Fp> L = random_vec<Fp>(P, 3, rng);
      if (L[0].is_zero()) L[0] = Fp(P, 1);
      Vec<Fp> pt = coeff_vector(expand_power_linear(L, 2), 2);
      span.row(i) = pt.transpose();
      pts.push_back(projective_normalize(pt));
    }
    LinearSubspace<Fp> H = make_subspace(span, "span of points");
    if (H.basis.rows() != h) continue;
    SectionOpts opts;
    opts.seed = 100 + t;
    auto sec = intersect_linear_section(model, H, opts);
    REQUIRE(sec.zero_dimensional);
    CHECK(sec.degree == h);
    // the returned xi-points map to the construction points in the ambient space
    auto pctx = FqCtx::prime(P);
    std::set<std::string> got, want;
    for (const auto& sp : sec.points) {
      Vec<Fq> xi(static_cast<Index>(sp.coords.size()));
      for (size_t i = 0; i < sp.coords.size(); ++i) xi[static_cast<Index>(i)] = sp.coords[i];
      Vec<Fq> amb = decdetail::to_ambient<Fp>(sp.coords[0].ctx(), H.basis, xi);
      amb = projective_normalize(amb);
      std::string s;
      for (Index i = 0; i < amb.size(); ++i) s += amb[i].str() + ",";
      got.insert(s);
    }
    for (const auto& p2 : pts) {
      std::string s;
      for (Index i = 0; i < p2.size(); ++i) s += std::to_string(p2[i].value()) + ",";
      want.insert(s);
    }
    CHECK(got == want);
  }
}

TEST_CASE("empty sections report (no points, degree 0, zero-dimensional)") {
  // a generic line in P^5 misses the Veronese surface
  Rng rng(23);
  auto model = veronese_equations<Fp>(P, 2, 2);
  Mat<Fp> span = zero_matrix<Fp>(P, 2, 6);
  for (Index i = 0; i < 2; ++i) span.row(i) = random_vec<Fp>(P, 6, rng).transpose();
  LinearSubspace<Fp> H = make_subspace(span, "generic line");
  auto sec = intersect_linear_section(model, H);
  CHECK(sec.zero_dimensional);
  CHECK(sec.degree == 0);
  CHECK(sec.points.empty());
}

TEST_CASE("positive-dimensional sections are detected") {
  // the Veronese surface itself: restrict to the full space
  auto model = veronese_equations<Fp>(P, 2, 2);
  int N = static_cast<int>(model.ambient_coords());
  LinearSubspace<Fp> H{N, identity_matrix<Fp>(P, N), "full"};
  auto sec = intersect_linear_section(model, H);
  CHECK_FALSE(sec.zero_dimensional);
}
