#ifndef TENSORDEC_VARIETIES_HPP
#define TENSORDEC_VARIETIES_HPP

#include "tensordec/flattenings.hpp"

namespace tensordec {

// Determinantal models for the three families with known secant equations:
//   - Veronese varieties (2-minors of the first catalecticant of a generic form),
//   - secants of degree-two Veroneses (minors of the generic symmetric matrix),
//   - secants of two-factor Segres (minors of the generic matrix).
enum class ModelKind { VeroneseCat1, SymmetricMinors, MatrixMinors };

template <class K>
struct SecantModel {
  using Ctx = typename field_traits<K>::ctx_t;
  ModelKind kind{};
  Ctx ctx{};
  int n = 0, d = 0;          // Veronese / symmetric parameters
  int mrows = 0, mcols = 0;  // matrix-space parameters
  int r = 1;                 // secant index; 1 is the variety itself
  mutable std::shared_ptr<std::vector<Poly<K>>> ambient_cache;

  int minor_size() const { return r + 1; }

  Index ambient_coords() const {
    switch (kind) {
      case ModelKind::VeroneseCat1:
        return static_cast<Index>(graded_dim(n + 1, d));
      case ModelKind::SymmetricMinors:
        return static_cast<Index>(graded_dim(n + 1, 2));
      case ModelKind::MatrixMinors:
        return static_cast<Index>(mrows) * mcols;
    }
    return 0;
  }
};

template <class K>
SecantModel<K> veronese_equations(typename field_traits<K>::ctx_t ctx, int n, int d) {
  if (d < 2) throw domain_error("veronese_equations: degree must be >= 2");
  SecantModel<K> m;
  m.kind = ModelKind::VeroneseCat1;
  m.ctx = ctx;
  m.n = n;
  m.d = d;
  m.r = 1;
  return m;
}

template <class K>
SecantModel<K> symmetric_secant_equations(typename field_traits<K>::ctx_t ctx, int n, int r) {
  if (r < 1) throw domain_error("symmetric_secant_equations: secant index must be >= 1");
  if (r > n) throw domain_error("symmetric_secant_equations: secant fills the space");
  SecantModel<K> m;
  m.kind = ModelKind::SymmetricMinors;
  m.ctx = ctx;
  m.n = n;
  m.d = 2;
  m.r = r;
  return m;
}

template <class K>
SecantModel<K> matrix_secant_equations(typename field_traits<K>::ctx_t ctx, int rows, int cols,
                                       int r) {
  if (r < 1) throw domain_error("matrix_secant_equations: secant index must be >= 1");
  if (r >= std::min(rows, cols))
    throw domain_error("matrix_secant_equations: secant fills the space");
  SecantModel<K> m;
  m.kind = ModelKind::MatrixMinors;
  m.ctx = ctx;
  m.mrows = rows;
  m.mcols = cols;
  m.r = r;
  return m;
}

namespace vardetail {

// The structured matrix of the model with the ambient coordinates replaced by
// arbitrary polynomials (coordinate variables or a linear parametrization).
template <class K>
Mat<Poly<K>> model_matrix(const SecantModel<K>& model, const std::vector<Poly<K>>& coords) {
  using PM = Mat<Poly<K>>;
  switch (model.kind) {
    case ModelKind::VeroneseCat1: {
      int n = model.n, d = model.d;
      auto rows_idx = monomial_basis(n + 1, 1);
      auto cols_idx = monomial_basis(n + 1, d - 1);
      auto amb_idx = monomial_basis(n + 1, d);
      PM M(static_cast<Index>(rows_idx.size()), static_cast<Index>(cols_idx.size()));
      for (size_t i = 0; i < rows_idx.size(); ++i) {
        int var = 0;
        for (size_t t = 0; t < rows_idx[i].size(); ++t)
          if (rows_idx[i][t]) var = static_cast<int>(t);
        for (size_t j = 0; j < cols_idx.size(); ++j) {
          MultiIndex w = mi_add(cols_idx[j], rows_idx[i]);
          long scale = cols_idx[j][var] + 1;
          Index wpos = basis_position(amb_idx, w, MonomialOrder::lex());
          M(static_cast<Index>(i), static_cast<Index>(j)) =
              coords[wpos].scaled(field_traits<K>::from_int(model.ctx, scale));
        }
      }
      return M;
    }
    case ModelKind::SymmetricMinors: {
      int n = model.n;
      auto amb_idx = monomial_basis(n + 1, 2);
      PM M(n + 1, n + 1);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
          MultiIndex w(n + 1, 0);
          w[i] = static_cast<uint16_t>(w[i] + 1);
          w[j] = static_cast<uint16_t>(w[j] + 1);
          Index wpos = basis_position(amb_idx, w, MonomialOrder::lex());
          long scale = (i == j) ? 2 : 1;
          M(i, j) = coords[wpos].scaled(field_traits<K>::from_int(model.ctx, scale));
        }
      return M;
    }
    case ModelKind::MatrixMinors: {
      PM M(model.mrows, model.mcols);
      for (int i = 0; i < model.mrows; ++i)
        for (int j = 0; j < model.mcols; ++j) M(i, j) = coords[i * model.mcols + j];
      return M;
    }
  }
  throw domain_error("model_matrix: unknown kind");
}

// All minor_size-minors, skipping the transposed duplicates of a symmetric
// matrix, normalized monic, deduplicated, zero minors dropped.
template <class K>
std::vector<Poly<K>> matrix_minor_system(const Mat<Poly<K>>& M, int k, bool symmetric,
                                         const typename field_traits<K>::ctx_t& ctx, int nvars,
                                         const Deadline& deadline = Deadline::never()) {
  Poly<K> one = Poly<K>::constant(ctx, nvars, field_traits<K>::one(ctx));
  std::vector<std::vector<int>> row_subsets;
  std::vector<int> s(k);
  auto enumerate = [&](Index limit) {
    std::vector<std::vector<int>> subs;
    for (int i = 0; i < k; ++i) s[i] = i;
    while (true) {
      subs.push_back(s);
      int i = k - 1;
      while (i >= 0 && s[i] == static_cast<int>(limit) - k + i) --i;
      if (i < 0) break;
      ++s[i];
      for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    }
    return subs;
  };
  auto rows = enumerate(M.rows());
  auto cols = enumerate(M.cols());
  std::vector<Poly<K>> out;
  std::set<std::string> seen;
  for (size_t a = 0; a < rows.size(); ++a) {
    deadline.check("matrix_minor_system");
    for (size_t b = 0; b < cols.size(); ++b) {
      if (symmetric && b < a) continue;  // minor(I,J) == minor(J,I)
      Mat<Poly<K>> sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = M(rows[a][i], cols[b][j]);
      Poly<K> det = det_ring(sub, one);
      if (det.is_zero()) continue;
      det = det.monic();
      if (seen.insert(to_string(det)).second) out.push_back(std::move(det));
    }
  }
  return out;
}

}  // namespace vardetail

// Generators in the ambient coordinates (the plain coefficient basis of the
// relevant space).  Computed on demand and cached.
template <class K>
const std::vector<Poly<K>>& ambient_generators(const SecantModel<K>& model) {
  if (model.ambient_cache) return *model.ambient_cache;
  int nv = static_cast<int>(model.ambient_coords());
  std::vector<Poly<K>> coords;
  coords.reserve(nv);
  for (int i = 0; i < nv; ++i) coords.push_back(Poly<K>::variable(model.ctx, nv, i));
  auto M = vardetail::model_matrix(model, coords);
  model.ambient_cache = std::make_shared<std::vector<Poly<K>>>(vardetail::matrix_minor_system(
      M, model.minor_size(), model.kind == ModelKind::SymmetricMinors, model.ctx, nv));
  return *model.ambient_cache;
}

// Substitutes the parametrization xi -> xi . basis(H) into the model: the
// resulting system lives in dim(H)+1 homogeneous variables.
template <class K>
std::vector<Poly<K>> restrict_equations(const SecantModel<K>& model, const LinearSubspace<K>& H,
                                        const Deadline& deadline = Deadline::never()) {
  if (H.ambient_dim != model.ambient_coords())
    throw domain_error("restrict_equations: ambient dimension mismatch");
  int m1 = static_cast<int>(H.basis.rows());  // number of xi coordinates
  std::vector<Poly<K>> coords;
  coords.reserve(H.ambient_dim);
  for (Index w = 0; w < H.ambient_dim; ++w) {
    std::vector<typename Poly<K>::Term> terms;
    for (Index t = 0; t < m1; ++t)
      if (!H.basis(t, w).is_zero()) {
        MultiIndex mi(m1, 0);
        mi[t] = 1;
        terms.push_back({std::move(mi), H.basis(t, w)});
      }
    coords.push_back(Poly<K>::from_terms(model.ctx, m1, MonomialOrder::grevlex(), std::move(terms)));
  }
  auto M = vardetail::model_matrix(model, coords);
  return vardetail::matrix_minor_system(M, model.minor_size(),
                                        model.kind == ModelKind::SymmetricMinors, model.ctx, m1,
                                        deadline);
}

// ---------------------------------------------------------------------------
// Groebner basis of a generating system, growing the generator subset until
// the remaining generators are confirmed members of the computed ideal.
// ---------------------------------------------------------------------------

template <class K>
GroebnerBasis<K> groebner_of_system(std::vector<Poly<K>> gens, MonomialOrder ord,
                                    const Deadline& deadline = Deadline::never()) {
  if (gens.size() > 8) gens = interreduce_linear(gens);
  BuchbergerOpts opts;
  opts.deadline = deadline;
  opts.verify_inputs = false;
  if (gens.size() <= 64) {
    opts.verify_inputs = true;
    return buchberger(gens, ord, opts);
  }
  std::sort(gens.begin(), gens.end(), [&](const Poly<K>& a, const Poly<K>& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    if (a.nterms() != b.nterms()) return a.nterms() < b.nterms();
    return ord.greater(b.leading_monomial(), a.leading_monomial());
  });
  std::vector<char> included(gens.size(), 0);
  std::vector<Poly<K>> cur;
  for (size_t i = 0; i < 64; ++i) {
    cur.push_back(gens[i]);
    included[i] = 1;
  }
  GroebnerBasis<K> G = buchberger(cur, ord, opts);
  while (true) {
    deadline.check("groebner_of_system");
    size_t added = 0;
    for (size_t i = 0; i < gens.size() && added < 64; ++i) {
      if (included[i]) continue;
      if (!normal_form(gens[i].with_order(ord), G.gens, deadline).is_zero()) {
        cur.push_back(gens[i]);
        included[i] = 1;
        ++added;
      }
    }
    if (!added) break;
    G = buchberger(cur, ord, opts);
  }
  return G;
}

// ---------------------------------------------------------------------------
// Intersection of a secant model with a linear subspace via random affine
// charts: solves on one chart and cross-checks the degree on a second.
// ---------------------------------------------------------------------------

template <class K>
struct SectionResult {
  using PK = typename solve_traits<K>::point_scalar;
  std::vector<SolutionPoint<PK>> points;  // projective, first nonzero coord = 1
  long degree = 0;
  bool zero_dimensional = false;
};

struct SectionOpts {
  uint64_t seed = 1;
  int chart_retries = 5;
  bool want_points = true;
  Deadline deadline = Deadline::never();
};

namespace vardetail {

// Dehomogenize on the chart ell(xi) = 1, eliminating the pivot variable.
template <class K>
std::vector<Poly<K>> chart_substitution(const std::vector<Poly<K>>& gens, const Vec<K>& ell,
                                        int pivot) {
  int m1 = static_cast<int>(ell.size());
  auto ctx = field_traits<K>::ctx_of(ell[pivot]);
  int mv = m1 - 1;  // affine variables
  std::vector<Poly<K>> subs(m1);
  K piv_inv = ell[pivot].inv();
  // xi_pivot = (1 - sum_{t != pivot} ell_t xi_t) / ell_pivot
  Poly<K> rep = Poly<K>::constant(ctx, mv, piv_inv);
  int pos = 0;
  for (int t = 0; t < m1; ++t) {
    if (t == pivot) continue;
    subs[t] = Poly<K>::variable(ctx, mv, pos);
    if (!ell[t].is_zero())
      rep = rep - Poly<K>::variable(ctx, mv, pos).scaled(ell[t] * piv_inv);
    ++pos;
  }
  subs[pivot] = rep;
  std::vector<Poly<K>> out;
  for (const auto& g : gens) {
    Poly<K> h = g.substitute(subs);
    if (!h.is_zero()) out.push_back(std::move(h));
  }
  return out;
}

template <class K>
Vec<K> random_functional(typename field_traits<K>::ctx_t ctx, int m1, Rng& rng) {
  Vec<K> ell = zero_vector<K>(ctx, m1);
  bool nz = false;
  while (!nz)
    for (Index i = 0; i < m1; ++i) {
      ell[i] = field_traits<K>::random(ctx, rng);
      if (!ell[i].is_zero()) nz = true;
    }
  return ell;
}

}  // namespace vardetail

// Solve a homogeneous system in m1 projective coordinates through two random
// affine charts: point extraction on the first, a degree cross-check on the
// second.
template <class K>
SectionResult<K> projective_solve(const std::vector<Poly<K>>& gens,
                                  typename field_traits<K>::ctx_t ctx, int m1,
                                  const SectionOpts& opts = {}) {
  using PK = typename solve_traits<K>::point_scalar;
  SectionResult<K> out;
  Rng rng(opts.seed ^ 0xc4a7ULL);
  auto one_chart = [&](long& deg, GroebnerBasis<K>& gb, Vec<K>& ell, int& pivot) {
    opts.deadline.check("intersect_linear_section");
    ell = vardetail::random_functional<K>(ctx, m1, rng);
    pivot = -1;
    for (Index i = 0; i < m1; ++i)
      if (!ell[i].is_zero()) pivot = static_cast<int>(i);
    auto affine = vardetail::chart_substitution(gens, ell, pivot);
    gb = groebner_of_system(affine, MonomialOrder::grevlex(), opts.deadline);
    QuotientBasis qb = quotient_basis(gb);
    if (!qb.finite) return false;
    deg = qb.degree();
    return true;
  };

  for (int attempt = 0; attempt < opts.chart_retries; ++attempt) {
    long degA = 0, degB = 0;
    GroebnerBasis<K> gbA, gbB;
    Vec<K> ellA, ellB;
    int pivA = 0, pivB = 0;
    if (!one_chart(degA, gbA, ellA, pivA) || !one_chart(degB, gbB, ellB, pivB)) {
      out.zero_dimensional = false;  // a positive-dimensional affine part is definitive
      return out;
    }
    if (degA != degB) continue;  // some chart missed points at its infinity
    out.degree = degA;
    out.zero_dimensional = true;
    if (opts.want_points && degA > 0) {
      SolveOpts sopts;
      sopts.seed = opts.seed + 97 * (attempt + 1);
      sopts.deadline = opts.deadline;
      auto affine_pts = solve_zero_dim(gbA, sopts);
      for (auto& ap : affine_pts) {
        SolutionPoint<PK> pt;
        pt.multiplicity = ap.multiplicity;
        std::vector<PK> xi(m1);
        PK acc = [&] {  // becomes xi_pivot via the chart relation
          if constexpr (std::is_same_v<K, Fp>)
            return Fq(ap.coords.empty() ? FqCtx::prime(ctx) : ap.coords[0].ctx(),
                      Fp::from_raw(ctx, 1));
          else
            return field_traits<PK>::one({});
        }();
        int pos = 0;
        for (int t = 0; t < m1; ++t) {
          if (t == pivA) continue;
          xi[t] = ap.coords[pos];
          if constexpr (std::is_same_v<K, Fp>) {
            acc -= Fq(ap.coords[pos].ctx(), ellA[t]) * ap.coords[pos];
          } else {
            acc -= ellA[t] * ap.coords[pos];
          }
          ++pos;
        }
        if constexpr (std::is_same_v<K, Fp>) {
          xi[pivA] = acc * Fq(acc.ctx(), ellA[pivA]).inv();
        } else {
          xi[pivA] = acc * ellA[pivA].inv();
        }
        Vec<PK> v(m1);
        for (int t = 0; t < m1; ++t) v[t] = xi[t];
        v = projective_normalize(v);
        pt.coords.assign(v.data(), v.data() + m1);
        out.points.push_back(std::move(pt));
      }
    }
    return out;
  }
  throw degenerate_error("projective_solve: unlucky chart (degree disagreement persists)");
}

template <class K>
SectionResult<K> intersect_linear_section(const SecantModel<K>& model, const LinearSubspace<K>& H,
                                          const SectionOpts& opts = {}) {
  using PK = typename solve_traits<K>::point_scalar;
  SectionResult<K> out;
  std::vector<Poly<K>> gens = restrict_equations(model, H, opts.deadline);
  int m1 = static_cast<int>(H.basis.rows());
  auto ctx = model.ctx;
  if (gens.empty()) {
    // the whole of H lies on the model
    if (m1 == 1) {
      SolutionPoint<PK> pt;
      pt.multiplicity = 1;
      if constexpr (std::is_same_v<K, Fp>) {
        auto fctx = FqCtx::prime(ctx);
        pt.coords = {Fq(fctx, Fp::from_raw(ctx, 1))};
      } else {
        pt.coords = {field_traits<PK>::one({})};
      }
      out.points.push_back(std::move(pt));
      out.degree = 1;
      out.zero_dimensional = true;
      return out;
    }
    out.zero_dimensional = false;
    return out;
  }
  if (m1 == 1) {  // H is a single point not on the model
    out.degree = 0;
    out.zero_dimensional = true;
    return out;
  }
  return projective_solve(gens, ctx, m1, opts);
}

}  // namespace tensordec

#endif
