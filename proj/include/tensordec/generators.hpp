#ifndef TENSORDEC_GENERATORS_HPP
#define TENSORDEC_GENERATORS_HPP

#include "tensordec/decompose.hpp"

namespace tensordec {

template <class K>
struct GeneratedPoly {
  SymTensor<K> F;
  std::vector<Vec<K>> forms;  // the drawn linear forms, as sampled
  std::vector<K> lambda;      // nonzero coefficients
};

template <class K>
struct GeneratedTensor {
  MixedTensor<K> T;
  std::vector<std::vector<Vec<K>>> forms;  // [summand][factor]
  std::vector<K> lambda;
};

namespace gendetail {

template <class K>
Vec<K> random_nonzero_vector(typename field_traits<K>::ctx_t ctx, int len, Rng& rng) {
  Vec<K> v = zero_vector<K>(ctx, len);
  for (int tries = 0; tries < 200; ++tries) {
    bool nz = false;
    for (Index i = 0; i < len; ++i) {
      v[i] = field_traits<K>::random(ctx, rng);
      if (!v[i].is_zero()) nz = true;
    }
    if (nz) return v;
  }
  throw domain_error("generator: cannot draw a nonzero vector");
}

template <class K>
K random_nonzero_scalar(typename field_traits<K>::ctx_t ctx, Rng& rng) {
  for (int tries = 0; tries < 200; ++tries) {
    K c = field_traits<K>::random(ctx, rng);
    if (!c.is_zero()) return c;
  }
  throw domain_error("generator: cannot draw a nonzero scalar");
}

}  // namespace gendetail

// Seeded random polynomial of prescribed rank: h linear forms with pairwise
// distinct projectivizations and nonzero coefficients.
template <class K>
GeneratedPoly<K> gen_polynomial_of_rank(typename field_traits<K>::ctx_t ctx, int n, int d, int h,
                                        uint64_t seed) {
  if (h < 1 || n < 0 || d < 1) throw domain_error("gen_polynomial_of_rank: bad parameters");
  Rng rng(seed ^ 0x6e0c0de5ULL);
  GeneratedPoly<K> out;
  std::vector<Vec<K>> seen_normalized;
  for (int i = 0; i < h; ++i) {
    Vec<K> L;
    bool fresh = false;
    for (int tries = 0; tries < 400 && !fresh; ++tries) {
      L = gendetail::random_nonzero_vector<K>(ctx, n + 1, rng);
      Vec<K> norm = projective_normalize(L);
      fresh = true;
      for (const auto& seen : seen_normalized)
        if (vec_equal(seen, norm)) fresh = false;
      if (fresh) seen_normalized.push_back(norm);
    }
    if (!fresh)
      throw domain_error("gen_polynomial_of_rank: cannot draw distinct forms (field too small)");
    out.forms.push_back(L);
    out.lambda.push_back(gendetail::random_nonzero_scalar<K>(ctx, rng));
  }
  Poly<K> F(ctx, n + 1);
  for (int i = 0; i < h; ++i)
    F = F + expand_power_linear(out.forms[i], d).scaled(out.lambda[i]);
  out.F = make_sym_tensor(std::move(F), d);
  return out;
}

// Seeded random mixed tensor of prescribed rank.
template <class K>
GeneratedTensor<K> gen_tensor_of_rank(typename field_traits<K>::ctx_t ctx,
                                      const std::vector<int>& dims,
                                      const std::vector<int>& degrees, int h, uint64_t seed) {
  if (dims.size() != degrees.size() || dims.empty() || h < 1)
    throw domain_error("gen_tensor_of_rank: bad parameters");
  Rng rng(seed ^ 0x6e0c0de6ULL);
  GeneratedTensor<K> out;
  out.T = mixed_zero<K>(ctx, dims, degrees);
  std::vector<std::vector<Vec<K>>> seen;
  int p = static_cast<int>(dims.size());
  for (int i = 0; i < h; ++i) {
    std::vector<Vec<K>> tuple(p);
    bool fresh = false;
    for (int tries = 0; tries < 400 && !fresh; ++tries) {
      for (int f = 0; f < p; ++f)
        tuple[f] = gendetail::random_nonzero_vector<K>(ctx, dims[f] + 1, rng);
      fresh = true;
      for (const auto& old : seen) {
        bool same = true;
        for (int f = 0; f < p; ++f)
          same = same && vec_equal(projective_normalize(old[f]), projective_normalize(tuple[f]));
        if (same) fresh = false;
      }
    }
    if (!fresh)
      throw domain_error("gen_tensor_of_rank: cannot draw distinct summands (field too small)");
    seen.push_back(tuple);
    K lam = gendetail::random_nonzero_scalar<K>(ctx, rng);
    out.T = mixed_add(out.T, rank_one_tensor(tuple, degrees, lam));
    out.forms.push_back(std::move(tuple));
    out.lambda.push_back(lam);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Round-trip comparison: canonical signatures of decompositions.
// ---------------------------------------------------------------------------

// Monic-normalize a summand (lambda, per-factor forms); the coefficient
// absorbs the normalization factors.
template <class PK>
std::string summand_signature(const std::vector<Vec<PK>>& factors,
                              const std::vector<int>& degrees, const PK& lambda) {
  PK lam = lambda;
  std::string s;
  for (size_t f = 0; f < factors.size(); ++f) {
    Vec<PK> v = factors[f];
    Index piv = -1;
    for (Index i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) throw domain_error("summand_signature: zero form");
    PK c = v[piv];
    PK cinv = c.inv();
    for (Index i = 0; i < v.size(); ++i) v[i] = v[i] * cinv;
    for (int e = 0; e < degrees[f]; ++e) lam *= c;
    s += "[";
    for (Index i = 0; i < v.size(); ++i)
      s += (i ? "," : "") + field_traits<PK>::to_string(v[i]);
    s += "]";
  }
  return s + " * " + field_traits<PK>::to_string(lam);
}

template <class K>
std::vector<std::string> decomposition_signature(const Decomposition<K>& dec) {
  using PK = typename solve_traits<K>::point_scalar;
  std::vector<std::string> sigs;
  for (size_t i = 0; i < dec.forms.size(); ++i)
    sigs.push_back(summand_signature<PK>(dec.forms[i].factors, dec.degrees, dec.lambda[i]));
  std::sort(sigs.begin(), sigs.end());
  return sigs;
}

template <class K>
std::vector<std::string> generated_signature(const typename point_field<K>::PCtx& pctx,
                                             const std::vector<int>& degrees,
                                             const std::vector<std::vector<Vec<K>>>& forms,
                                             const std::vector<K>& lambda) {
  using PK = typename solve_traits<K>::point_scalar;
  std::vector<std::string> sigs;
  for (size_t i = 0; i < forms.size(); ++i) {
    std::vector<Vec<PK>> emb(forms[i].size());
    for (size_t f = 0; f < forms[i].size(); ++f) {
      emb[f] = zero_vector<PK>(pctx, forms[i][f].size());
      for (Index t = 0; t < forms[i][f].size(); ++t)
        emb[f][t] = point_field<K>::embed(pctx, forms[i][f][t]);
    }
    sigs.push_back(summand_signature<PK>(emb, degrees, point_field<K>::embed(pctx, lambda[i])));
  }
  std::sort(sigs.begin(), sigs.end());
  return sigs;
}

// Exact round-trip: the recovered summand set equals the generated one.
template <class K>
bool round_trip_matches(const GeneratedPoly<K>& gen, const Decomposition<K>& dec) {
  std::vector<std::vector<Vec<K>>> forms;
  for (const auto& L : gen.forms) forms.push_back({L});
  return decomposition_signature(dec) ==
         generated_signature<K>(dec.point_ctx, {gen.F.d}, forms, gen.lambda);
}

template <class K>
bool round_trip_matches(const GeneratedTensor<K>& gen, const Decomposition<K>& dec) {
  return decomposition_signature(dec) ==
         generated_signature<K>(dec.point_ctx, gen.T.degrees, gen.forms, gen.lambda);
}

}  // namespace tensordec

#endif
