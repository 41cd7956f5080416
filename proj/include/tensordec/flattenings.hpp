#ifndef TENSORDEC_FLATTENINGS_HPP
#define TENSORDEC_FLATTENINGS_HPP

#include "tensordec/solve.hpp"

namespace tensordec {

// ---------------------------------------------------------------------------
// Symmetric tensors: homogeneous forms with their ambient data.
// ---------------------------------------------------------------------------

template <class K>
struct SymTensor {
  Poly<K> poly;
  int n = 0;  // projective dimension: n+1 variables
  int d = 0;
};

template <class K>
SymTensor<K> make_sym_tensor(Poly<K> f, int d) {
  if (!f.is_homogeneous() || (!f.is_zero() && f.degree() != d))
    throw domain_error("SymTensor: polynomial must be homogeneous of the given degree");
  SymTensor<K> t;
  t.n = f.nvars() - 1;
  t.d = d;
  t.poly = std::move(f);
  return t;
}

template <class K>
void check_characteristic_exceeds(const typename field_traits<K>::ctx_t& ctx, long d,
                                  const char* who) {
  uint64_t ch = field_traits<K>::characteristic(ctx);
  if (ch != 0 && static_cast<long>(ch) <= d)
    throw small_characteristic_error(std::string(who) + ": characteristic <= degree");
}

// Catalecticant matrix: rows indexed by the order-s monomial derivatives (lex
// descending), columns by the degree-(d-s) monomial basis.
template <class K>
Mat<K> catalecticant_matrix(const SymTensor<K>& F, int s) {
  if (s < 0 || s > F.d) throw domain_error("catalecticant_matrix: order out of range");
  check_characteristic_exceeds<K>(F.poly.ctx(), F.d, "catalecticant_matrix");
  auto rows_idx = monomial_basis(F.n + 1, s);
  Index cols = static_cast<Index>(graded_dim(F.n + 1, F.d - s));
  Mat<K> M = zero_matrix<K>(F.poly.ctx(), static_cast<Index>(rows_idx.size()), cols);
  for (size_t r = 0; r < rows_idx.size(); ++r) {
    Poly<K> der = F.poly.derivative_multi(rows_idx[r]);
    if (der.is_zero()) continue;
    M.row(static_cast<Index>(r)) = coeff_vector(der, F.d - s).transpose();
  }
  return M;
}

// Projective span of the order-s partial derivatives.
template <class K>
LinearSubspace<K> derivative_space(const SymTensor<K>& F, int s) {
  if (F.poly.is_zero()) throw domain_error("derivative_space: zero polynomial");
  Mat<K> cat = catalecticant_matrix(F, s);
  return make_subspace(cat, "H^" + std::to_string(s) + "_dF");
}

// ---------------------------------------------------------------------------
// Mixed tensors in Sym^{d_1} V_1 x ... x Sym^{d_p} V_p.
// ---------------------------------------------------------------------------

using MKey = std::vector<MultiIndex>;

template <class K>
struct MixedTensor {
  using Ctx = typename field_traits<K>::ctx_t;
  Ctx ctx{};
  std::vector<int> dims;     // projective dimensions n_i (factor i has n_i+1 variables)
  std::vector<int> degrees;  // d_i
  std::map<MKey, K> entries;

  int factors() const { return static_cast<int>(dims.size()); }

  void add(const MKey& key, const K& c) {
    if (c.is_zero()) return;
    auto it = entries.find(key);
    if (it == entries.end()) {
      entries.emplace(key, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) entries.erase(it);
    }
  }

  void check_key(const MKey& k) const {
    if (static_cast<int>(k.size()) != factors()) throw domain_error("MixedTensor: bad key arity");
    for (int i = 0; i < factors(); ++i) {
      if (static_cast<int>(k[i].size()) != dims[i] + 1 || mi_deg(k[i]) != degrees[i])
        throw domain_error("MixedTensor: key does not match dims/degrees");
    }
  }

  friend bool operator==(const MixedTensor& a, const MixedTensor& b) {
    return a.dims == b.dims && a.degrees == b.degrees && a.entries == b.entries;
  }
};

template <class K>
MixedTensor<K> mixed_zero(typename field_traits<K>::ctx_t ctx, std::vector<int> dims,
                          std::vector<int> degrees) {
  MixedTensor<K> t;
  t.ctx = ctx;
  t.dims = std::move(dims);
  t.degrees = std::move(degrees);
  return t;
}

// Rank-one tensor  c * L_1^{d_1} (x) ... (x) L_p^{d_p}.
template <class K>
MixedTensor<K> rank_one_tensor(const std::vector<Vec<K>>& forms, const std::vector<int>& degrees,
                               const K& c) {
  std::vector<int> dims;
  for (const auto& f : forms) dims.push_back(static_cast<int>(f.size()) - 1);
  auto ctx = field_traits<K>::ctx_of(c);
  MixedTensor<K> t = mixed_zero<K>(ctx, dims, degrees);
  int p = t.factors();
  std::vector<std::vector<std::pair<MultiIndex, K>>> per_factor(p);
  for (int i = 0; i < p; ++i) {
    Poly<K> e = expand_power_linear(forms[i], degrees[i]);
    for (const auto& term : e.terms()) per_factor[i].push_back({term.m, term.c});
  }
  MKey key(p);
  std::function<void(int, K)> rec = [&](int i, K acc) {
    if (i == p) {
      t.add(key, acc);
      return;
    }
    for (const auto& [m, cc] : per_factor[i]) {
      key[i] = m;
      rec(i + 1, acc * cc);
    }
  };
  rec(0, c);
  return t;
}

template <class K>
MixedTensor<K> mixed_add(const MixedTensor<K>& a, const MixedTensor<K>& b) {
  if (a.dims != b.dims || a.degrees != b.degrees)
    throw domain_error("mixed_add: shape mismatch");
  MixedTensor<K> r = a;
  for (const auto& [k, c] : b.entries) r.add(k, c);
  return r;
}

template <class K>
MixedTensor<K> mixed_sub(const MixedTensor<K>& a, const MixedTensor<K>& b) {
  if (a.dims != b.dims || a.degrees != b.degrees)
    throw domain_error("mixed_sub: shape mismatch");
  MixedTensor<K> r = a;
  for (const auto& [k, c] : b.entries) r.add(k, -c);
  return r;
}

// p = 1 bridge: a one-factor mixed tensor is a homogeneous polynomial.
template <class K>
MixedTensor<K> tensor_from_sym(const SymTensor<K>& F) {
  MixedTensor<K> t = mixed_zero<K>(F.poly.ctx(), {F.n}, {F.d});
  for (const auto& term : F.poly.terms()) t.add({term.m}, term.c);
  return t;
}

template <class K>
SymTensor<K> sym_from_tensor(const MixedTensor<K>& T) {
  if (T.factors() != 1) throw domain_error("sym_from_tensor: not a one-factor tensor");
  std::vector<typename Poly<K>::Term> terms;
  for (const auto& [k, c] : T.entries) terms.push_back({k[0], c});
  SymTensor<K> F;
  F.n = T.dims[0];
  F.d = T.degrees[0];
  F.poly = Poly<K>::from_terms(T.ctx, T.dims[0] + 1, MonomialOrder::grevlex(), std::move(terms));
  return F;
}

struct FlatteningSpec {
  std::vector<int> a, b;

  static FlatteningSpec from_a(const std::vector<int>& a_part, const std::vector<int>& degrees) {
    FlatteningSpec s;
    s.a = a_part;
    s.b.resize(a_part.size());
    for (size_t i = 0; i < a_part.size(); ++i) {
      if (a_part[i] < 0 || a_part[i] > degrees[i])
        throw domain_error("FlatteningSpec: a-part out of range");
      s.b[i] = degrees[i] - a_part[i];
    }
    return s;
  }

  void validate(const std::vector<int>& degrees) const {
    if (a.size() != degrees.size() || b.size() != degrees.size())
      throw domain_error("FlatteningSpec: arity mismatch");
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] < 0 || b[i] < 0 || a[i] + b[i] != degrees[i])
        throw domain_error("FlatteningSpec: a_i + b_i must equal d_i");
  }
};

// Basis tuples of V_A: one degree-a_i multi-index per factor, lexicographic in
// the factor-wise (descending) bases.
inline std::vector<MKey> tuple_basis(const std::vector<int>& dims, const std::vector<int>& degs) {
  std::vector<std::vector<MultiIndex>> per(dims.size());
  for (size_t i = 0; i < dims.size(); ++i) per[i] = monomial_basis(dims[i] + 1, degs[i]);
  std::vector<MKey> out;
  MKey cur(dims.size());
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == dims.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& m : per[i]) {
      cur[i] = m;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline long tuple_basis_size(const std::vector<int>& dims, const std::vector<int>& degs) {
  long r = 1;
  for (size_t i = 0; i < dims.size(); ++i) r *= graded_dim(dims[i] + 1, degs[i]);
  return r;
}

// The (A,B)-flattening of T as a matrix V_A^* -> V_B.  Blocks are
// catalecticants of the symmetric parts; the one-factor case reproduces
// catalecticant_matrix exactly.
template <class K>
Mat<K> mixed_flattening(const MixedTensor<K>& T, const FlatteningSpec& spec) {
  spec.validate(T.degrees);
  int maxdeg = 0;
  for (int d : T.degrees) maxdeg = std::max(maxdeg, d);
  check_characteristic_exceeds<K>(T.ctx, maxdeg, "mixed_flattening");
  auto rows = tuple_basis(T.dims, spec.a);
  auto cols = tuple_basis(T.dims, spec.b);
  std::map<MKey, Index> colpos;
  for (size_t j = 0; j < cols.size(); ++j) colpos[cols[j]] = static_cast<Index>(j);
  Mat<K> M = zero_matrix<K>(T.ctx, static_cast<Index>(rows.size()),
                            static_cast<Index>(cols.size()));
  int p = T.factors();
  for (size_t r = 0; r < rows.size(); ++r) {
    const MKey& u = rows[r];
    for (const auto& [w, c] : T.entries) {
      // needs w = u + v componentwise
      MKey v(p);
      bool ok = true;
      bigint scale = 1;
      for (int i = 0; i < p && ok; ++i) {
        if (!mi_divides(u[i], w[i])) {
          ok = false;
          break;
        }
        v[i] = mi_sub(w[i], u[i]);
        for (size_t j = 0; j < u[i].size(); ++j)
          scale *= falling_factorial(w[i][j], u[i][j]);
      }
      if (!ok) continue;
      M(static_cast<Index>(r), colpos.at(v)) += c * field_traits<K>::from_bigint(T.ctx, scale);
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// The middle-catalecticant bilinear form of an even-degree form.
// ---------------------------------------------------------------------------

// Plain power profile (alpha^u)_{|u| = s}, the coordinates of L^s in the
// multinomially weighted basis.
template <class K>
Vec<K> power_profile(const Vec<K>& alpha, int s) {
  auto basis = monomial_basis(static_cast<int>(alpha.size()), s);
  auto ctx = field_traits<K>::ctx_of(alpha[0]);
  for (Index i = 0; i < alpha.size(); ++i) {
    auto c = field_traits<K>::ctx_of(alpha[i]);
    if (detail::ctx_bound(c)) ctx = c;
  }
  Vec<K> v = zero_vector<K>(ctx, static_cast<Index>(basis.size()));
  for (size_t i = 0; i < basis.size(); ++i) {
    K c = field_traits<K>::one(ctx);
    for (size_t j = 0; j < basis[i].size(); ++j)
      for (int e = 0; e < basis[i][j]; ++e) c = c * alpha[static_cast<Index>(j)];
    v[static_cast<Index>(i)] = c;
  }
  return v;
}

// Gram matrix of Omega_F in the weighted degree-m basis: the middle
// catalecticant with columns rescaled by inverse multinomial coefficients.
template <class K>
Mat<K> omega_form(const SymTensor<K>& F) {
  if (F.d % 2) throw domain_error("omega_form: degree must be even");
  int m = F.d / 2;
  check_characteristic_exceeds<K>(F.poly.ctx(), F.d, "omega_form");
  Mat<K> M = catalecticant_matrix(F, m);
  auto basis = monomial_basis(F.n + 1, m);
  for (size_t j = 0; j < basis.size(); ++j) {
    K w = field_traits<K>::from_bigint(F.poly.ctx(), multinomial(m, basis[j]));
    K winv = w.inv();
    for (Index i = 0; i < M.rows(); ++i)
      M(i, static_cast<Index>(j)) = M(i, static_cast<Index>(j)) * winv;
  }
  return M;
}

// Adjugate matrix (det-scaled inverse, defined for singular input as well).
template <class K>
Mat<K> adjugate(const Mat<K>& M) {
  Index n = M.rows();
  if (n != M.cols()) throw domain_error("adjugate: square matrix required");
  auto ctx = uniform_ctx(M);
  Mat<K> adj = zero_matrix<K>(ctx, n, n);
  if (n == 1) {
    adj(0, 0) = field_traits<K>::one(ctx);
    return adj;
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      Mat<K> sub = zero_matrix<K>(ctx, n - 1, n - 1);
      for (Index r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Index c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          sub(rr, cc) = M(r, c);
          ++cc;
        }
        ++rr;
      }
      K d = det_ring(sub, field_traits<K>::one(ctx));
      adj(j, i) = ((i + j) % 2) ? -d : d;  // transpose of the cofactor matrix
    }
  return adj;
}

// The pairing in which pairwise powers of a length-(N+1) decomposition are
// orthogonal: v^T adj(Gram) w.
template <class K>
K omega_pair(const Mat<K>& gram_adjugate, const Vec<K>& v, const Vec<K>& w) {
  if (gram_adjugate.rows() != v.size() || gram_adjugate.cols() != w.size())
    throw domain_error("omega_pair: dimension mismatch");
  return (v.transpose() * gram_adjugate * w)(0, 0);
}

}  // namespace tensordec

#endif
