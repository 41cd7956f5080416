#ifndef TENSORDEC_GROEBNER_HPP
#define TENSORDEC_GROEBNER_HPP

#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <set>

#include "tensordec/multipoly.hpp"

namespace tensordec {

struct Deadline {
  std::chrono::steady_clock::time_point tp{};
  bool active = false;

  static Deadline never() { return {}; }
  static Deadline after_seconds(double s) {
    Deadline d;
    d.active = true;
    d.tp = std::chrono::steady_clock::now() +
           std::chrono::microseconds(static_cast<int64_t>(s * 1e6));
    return d;
  }
  bool expired() const { return active && std::chrono::steady_clock::now() > tp; }
  void check(const char* where) const {
    if (expired()) throw timeout_error(std::string("deadline exceeded in ") + where);
  }
};

template <class K>
struct GroebnerBasis {
  std::vector<Poly<K>> gens;  // monic; sorted by decreasing leading monomial when reduced
  MonomialOrder ord;
  bool reduced = false;
};

// Remainder of f on division by the list G; no term of the result is divisible
// by any leading term of G.  Divisor choice is "first in list", so the result
// is deterministic for a fixed G.
template <class K>
Poly<K> normal_form(Poly<K> f, const std::vector<Poly<K>>& G,
                    const Deadline& deadline = Deadline::never()) {
  using Term = typename Poly<K>::Term;
  std::vector<Term> rem;
  int steps = 0;
  while (!f.is_zero()) {
    if (++steps % 256 == 0) deadline.check("normal_form");
    const MultiIndex& lm = f.leading_monomial();
    const Poly<K>* red = nullptr;
    for (const auto& g : G)
      if (!g.is_zero() && mi_divides(g.leading_monomial(), lm)) {
        red = &g;
        break;
      }
    if (red) {
      K c = f.leading_coeff() / red->leading_coeff();
      f = f.sub_mul(c, mi_sub(lm, red->leading_monomial()), *red);
    } else {
      rem.push_back(f.terms().front());
      f = f + Poly<K>::monomial(f.ctx(), f.nvars(), lm, -f.leading_coeff(), f.order());
    }
  }
  return Poly<K>::from_terms(f.ctx(), f.nvars(), f.order(), std::move(rem));
}

template <class K>
Poly<K> normal_form(const Poly<K>& f, const GroebnerBasis<K>& G,
                    const Deadline& deadline = Deadline::never()) {
  return normal_form(f.with_order(G.ord), G.gens, deadline);
}

enum class PairStrategy { NormalSugar, Fifo };

struct BuchbergerOpts {
  PairStrategy strategy = PairStrategy::NormalSugar;
  Deadline deadline = Deadline::never();
  bool verify_inputs = true;  // check each input reduces to 0 modulo the result
};

namespace gbdetail {

struct SPair {
  int i, j;
  MultiIndex lcm;
  long lcm_deg;
  long sugar;
  uint64_t stamp;  // insertion order, final tie-break
};

template <class K>
Poly<K> s_poly(const Poly<K>& f, const Poly<K>& g) {
  MultiIndex l = mi_lcm(f.leading_monomial(), g.leading_monomial());
  Poly<K> a = f.mul_monomial(mi_sub(l, f.leading_monomial())).scaled(f.leading_coeff().inv());
  Poly<K> b = g.mul_monomial(mi_sub(l, g.leading_monomial())).scaled(g.leading_coeff().inv());
  return a - b;
}

// Gebauer-Moeller pair update: adds generator index t, prunes old and new pairs.
template <class K>
void update_pairs(const std::vector<Poly<K>>& G, const std::vector<long>& sugars,
                  std::deque<SPair>& pairs, int t, uint64_t& stamp,
                  const MonomialOrder& ord) {
  const MultiIndex& lt = G[t].leading_monomial();
  struct Cand {
    int i;
    MultiIndex lcm;
    bool coprime;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < t; ++i) {
    if (G[i].is_zero()) continue;
    cands.push_back({i, mi_lcm(G[i].leading_monomial(), lt),
                     mi_coprime(G[i].leading_monomial(), lt)});
  }
  // first Gebauer-Moeller filter on the new pairs
  std::vector<Cand> kept;
  std::vector<bool> removed(cands.size(), false);
  for (size_t a = 0; a < cands.size(); ++a) {
    if (removed[a]) continue;
    bool drop = false;
    if (!cands[a].coprime) {
      for (size_t b = 0; b < cands.size() && !drop; ++b) {
        if (a == b || removed[b]) continue;
        if (cands[b].lcm == cands[a].lcm) {
          // equal lcm: keep the earlier one only
          if (b < a) drop = true;
        } else if (mi_divides(cands[b].lcm, cands[a].lcm)) {
          drop = true;
        }
      }
    }
    if (!drop) kept.push_back(cands[a]);
  }
  // old-pair criterion
  std::deque<SPair> surviving;
  for (auto& pr : pairs) {
    MultiIndex l_it = mi_lcm(G[pr.i].leading_monomial(), lt);
    MultiIndex l_jt = mi_lcm(G[pr.j].leading_monomial(), lt);
    if (mi_divides(lt, pr.lcm) && l_it != pr.lcm && l_jt != pr.lcm) continue;
    surviving.push_back(std::move(pr));
  }
  pairs = std::move(surviving);
  for (auto& c : kept) {
    if (c.coprime) continue;  // Buchberger's first criterion
    long sug = std::max(sugars[c.i] + mi_deg(c.lcm) - mi_deg(G[c.i].leading_monomial()),
                        sugars[t] + mi_deg(c.lcm) - mi_deg(lt));
    pairs.push_back({c.i, t, c.lcm, mi_deg(c.lcm), sug, stamp++});
  }
  (void)ord;
}

}  // namespace gbdetail

// Buchberger's algorithm with normal selection (sugar tie-break) producing the
// unique reduced basis for the given order.
template <class K>
GroebnerBasis<K> buchberger(const std::vector<Poly<K>>& inputs, MonomialOrder ord,
                            BuchbergerOpts opts = {}) {
  using gbdetail::SPair;
  std::vector<Poly<K>> G;
  std::vector<long> sugars;
  std::deque<SPair> pairs;
  uint64_t stamp = 0;

  auto push_gen = [&](Poly<K> h, long sugar) {
    h = h.monic();
    G.push_back(std::move(h));
    sugars.push_back(sugar);
    gbdetail::update_pairs(G, sugars, pairs, static_cast<int>(G.size()) - 1, stamp, ord);
  };

  for (const auto& f : inputs) {
    Poly<K> g = f.with_order(ord);
    if (g.is_zero()) continue;
    g = normal_form(g, G, opts.deadline);
    if (!g.is_zero()) push_gen(std::move(g), g.degree());
  }

  while (!pairs.empty()) {
    opts.deadline.check("buchberger");
    size_t best = 0;
    if (opts.strategy == PairStrategy::NormalSugar) {
      for (size_t i = 1; i < pairs.size(); ++i) {
        const auto& a = pairs[i];
        const auto& b = pairs[best];
        bool better;
        if (a.lcm_deg != b.lcm_deg) {
          better = a.lcm_deg < b.lcm_deg;
        } else if (a.sugar != b.sugar) {
          better = a.sugar < b.sugar;
        } else if (a.lcm != b.lcm) {
          better = ord.less(a.lcm, b.lcm);
        } else {
          better = a.stamp < b.stamp;
        }
        if (better) best = i;
      }
    } else {
      for (size_t i = 1; i < pairs.size(); ++i)
        if (pairs[i].stamp < pairs[best].stamp) best = i;
    }
    SPair pr = pairs[best];
    pairs.erase(pairs.begin() + static_cast<long>(best));
    Poly<K> s = gbdetail::s_poly(G[pr.i], G[pr.j]);
    Poly<K> h = normal_form(std::move(s), G, opts.deadline);
    if (!h.is_zero()) push_gen(std::move(h), pr.sugar);
  }

  // minimalize: drop generators whose leading term is divisible by another's
  std::vector<char> keep(G.size(), 1);
  for (size_t i = 0; i < G.size(); ++i)
    for (size_t j = 0; j < G.size() && keep[i]; ++j) {
      if (i == j || !keep[j]) continue;
      if (G[j].leading_monomial() == G[i].leading_monomial()) {
        if (j < i) keep[i] = 0;
      } else if (mi_divides(G[j].leading_monomial(), G[i].leading_monomial())) {
        keep[i] = 0;
      }
    }
  std::vector<Poly<K>> M;
  for (size_t i = 0; i < G.size(); ++i)
    if (keep[i]) M.push_back(G[i]);
  // tail-reduce to the unique reduced basis
  std::vector<Poly<K>> R = M;
  for (size_t i = 0; i < M.size(); ++i) {
    std::vector<Poly<K>> others;
    for (size_t j = 0; j < M.size(); ++j)
      if (j != i) others.push_back(M[j]);
    R[i] = normal_form(M[i], others, opts.deadline).monic();
  }
  std::sort(R.begin(), R.end(), [&](const Poly<K>& a, const Poly<K>& b) {
    return ord.greater(a.leading_monomial(), b.leading_monomial());
  });
  GroebnerBasis<K> out{std::move(R), ord, true};
  if (opts.verify_inputs) {
    for (const auto& f : inputs)
      if (!normal_form(f.with_order(ord), out.gens, opts.deadline).is_zero())
        throw domain_error("buchberger: input does not reduce to zero (internal)");
  }
  return out;
}

template <class K>
bool is_unit_ideal(const GroebnerBasis<K>& G) {
  for (const auto& g : G.gens)
    if (!g.is_zero() && mi_deg(g.leading_monomial()) == 0) return true;
  return false;
}

// Monomials outside the leading-term ideal.  finite <=> zero-dimensional.
struct QuotientBasis {
  std::vector<MultiIndex> monomials;
  bool finite = false;
  long degree() const { return static_cast<long>(monomials.size()); }
};

template <class K>
QuotientBasis quotient_basis(const GroebnerBasis<K>& G) {
  if (!G.reduced) throw domain_error("quotient_basis: reduced basis required");
  QuotientBasis out;
  if (G.gens.empty()) {
    out.finite = false;  // zero ideal of a polynomial ring in >= 1 variables
    return out;
  }
  if (is_unit_ideal(G)) {
    out.finite = true;
    return out;
  }
  int n = G.gens[0].nvars();
  std::vector<MultiIndex> lts;
  for (const auto& g : G.gens) lts.push_back(g.leading_monomial());
  // finiteness: every variable must appear as a pure power among the LTs
  std::vector<long> bound(n, -1);
  for (const auto& m : lts) {
    int nz = -1;
    bool pure = true;
    for (int i = 0; i < n; ++i)
      if (m[i]) {
        if (nz >= 0) pure = false;
        nz = i;
      }
    if (pure && nz >= 0)
      bound[nz] = bound[nz] < 0 ? m[nz] : std::min<long>(bound[nz], m[nz]);
  }
  for (int i = 0; i < n; ++i)
    if (bound[i] < 0) {
      out.finite = false;
      return out;
    }
  out.finite = true;
  MultiIndex cur(n, 0);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == n) {
      for (const auto& m : lts)
        if (mi_divides(m, cur)) return;
      out.monomials.push_back(cur);
      return;
    }
    for (long e = 0; e < bound[pos]; ++e) {
      cur[pos] = static_cast<uint16_t>(e);
      rec(pos + 1);
    }
    cur[pos] = 0;
  };
  rec(0);
  std::sort(out.monomials.begin(), out.monomials.end(),
            [&](const MultiIndex& a, const MultiIndex& b) { return G.ord.less(a, b); });
  return out;
}

// ---------------------------------------------------------------------------
// FGLM order change for zero-dimensional ideals.
// ---------------------------------------------------------------------------

namespace gbdetail {

// Incremental membership solver over K: insert vectors, test span membership,
// return coordinates in terms of the inserted family.
template <class K>
class SpanSolver {
 public:
  SpanSolver(typename field_traits<K>::ctx_t ctx, Index dim) : ctx_(ctx), dim_(dim) {}

  // Returns coordinates if v lies in the current span, nullopt otherwise.
  std::optional<std::vector<K>> coordinates(const Vec<K>& v) const {
    Vec<K> r = v;
    std::vector<K> coef(rows_.size(), field_traits<K>::zero(ctx_));
    for (size_t i = 0; i < rows_.size(); ++i) {
      const K& x = r[pivot_[i]];
      if (x.is_zero()) continue;
      K f = x;  // pivot entries are normalized to 1
      for (Index j = 0; j < dim_; ++j) r[j] = r[j] - f * rows_[i][j];
      for (size_t k = 0; k < combo_[i].size(); ++k)
        coef[k] = coef[k] + f * combo_[i][k];
    }
    for (Index j = 0; j < dim_; ++j)
      if (!r[j].is_zero()) return std::nullopt;
    coef.resize(count_);
    return coef;
  }

  // Insert v as a new independent element; returns false if dependent.
  bool insert(const Vec<K>& v) {
    Vec<K> r = v;
    std::vector<K> combo(count_ + 1, field_traits<K>::zero(ctx_));
    combo[count_] = field_traits<K>::one(ctx_);
    for (size_t i = 0; i < rows_.size(); ++i) {
      const K& x = r[pivot_[i]];
      if (x.is_zero()) continue;
      K f = x;
      for (Index j = 0; j < dim_; ++j) r[j] = r[j] - f * rows_[i][j];
      for (size_t k = 0; k < combo_[i].size(); ++k)
        combo[k] = combo[k] - f * combo_[i][k];
    }
    Index p = -1;
    for (Index j = 0; j < dim_; ++j)
      if (!r[j].is_zero()) {
        p = j;
        break;
      }
    if (p < 0) return false;
    K inv = r[p].inv();
    for (Index j = 0; j < dim_; ++j) r[j] = r[j] * inv;
    for (auto& c : combo) c = c * inv;  // invariant: rows_[i] == sum_k combo_[i][k] * family[k]
    rows_.push_back(std::move(r));
    combo.resize(count_ + 1);
    combo_.push_back(std::move(combo));
    pivot_.push_back(p);
    ++count_;
    return true;
  }

 private:
  typename field_traits<K>::ctx_t ctx_;
  Index dim_;
  size_t count_ = 0;
  std::vector<Vec<K>> rows_;
  std::vector<std::vector<K>> combo_;
  std::vector<Index> pivot_;
};

}  // namespace gbdetail

// Multiplication matrices of the quotient algebra: column j of M_v holds the
// normal-form coordinates of x_v * b_j.
template <class K>
std::vector<Mat<K>> multiplication_matrices(const GroebnerBasis<K>& G, const QuotientBasis& qb,
                                            const Deadline& deadline = Deadline::never()) {
  if (!qb.finite) throw domain_error("multiplication_matrices: ideal is not zero-dimensional");
  int n = G.gens.empty() ? 0 : G.gens[0].nvars();
  Index D = static_cast<Index>(qb.monomials.size());
  auto ctx = G.gens.at(0).ctx();
  std::map<MultiIndex, Index> pos;
  for (Index i = 0; i < D; ++i) pos[qb.monomials[i]] = i;
  std::vector<Mat<K>> M(n, zero_matrix<K>(ctx, D, D));
  for (int v = 0; v < n; ++v) {
    for (Index j = 0; j < D; ++j) {
      deadline.check("multiplication_matrices");
      MultiIndex m = qb.monomials[j];
      m[v] = static_cast<uint16_t>(m[v] + 1);
      auto it = pos.find(m);
      if (it != pos.end()) {
        M[v](it->second, j) = field_traits<K>::one(ctx);
        continue;
      }
      Poly<K> nf = normal_form(
          Poly<K>::monomial(ctx, n, m, field_traits<K>::one(ctx), G.ord), G.gens, deadline);
      for (const auto& t : nf.terms()) M[v](pos.at(t.m), j) = t.c;
    }
  }
  return M;
}

// FGLM main loop against externally supplied multiplication matrices.  The
// matrices may be linear combinations of coordinate ones, which realizes a
// linear change of variables without recomputing any Groebner basis.
template <class K>
GroebnerBasis<K> fglm_from_matrices(typename field_traits<K>::ctx_t ctx, int n,
                                    const std::vector<Mat<K>>& M, const QuotientBasis& qb,
                                    MonomialOrder target,
                                    const Deadline& deadline = Deadline::never()) {
  Index D = static_cast<Index>(qb.monomials.size());
  MonomialOrder lex = target;
  GroebnerBasis<K> out;
  out.ord = lex;
  out.reduced = true;
  if (D == 0) {  // unit ideal
    out.gens = {Poly<K>::constant(ctx, n, field_traits<K>::one(ctx))};
    return out;
  }
  std::map<MultiIndex, Index> pos;
  for (Index i = 0; i < D; ++i) pos[qb.monomials[i]] = i;

  struct QEntry {
    MultiIndex m;
    long parent;  // index into blex vectors
    int var;
  };
  auto cmp = [&](const QEntry& a, const QEntry& b) { return lex.less(b.m, a.m); };  // min-heap
  std::priority_queue<QEntry, std::vector<QEntry>, decltype(cmp)> heap(cmp);
  std::set<MultiIndex> seen;

  std::vector<MultiIndex> blex;
  std::vector<Vec<K>> bvec;
  std::vector<MultiIndex> gb_lts;
  std::vector<Poly<K>> gens;
  gbdetail::SpanSolver<K> span(ctx, D);

  MultiIndex one(n, 0);
  heap.push({one, -1, -1});
  seen.insert(one);

  while (!heap.empty()) {
    deadline.check("fglm");
    QEntry e = heap.top();
    heap.pop();
    bool skip = false;
    for (const auto& lt : gb_lts)
      if (mi_divides(lt, e.m)) {
        skip = true;
        break;
      }
    if (skip) continue;
    Vec<K> v;
    if (e.parent < 0) {
      v = zero_vector<K>(ctx, D);
      v[pos.at(one)] = field_traits<K>::one(ctx);
    } else {
      v = M[e.var] * bvec[e.parent];
    }
    auto coords = span.coordinates(v);
    if (coords) {
      // new lex basis element: m - sum coords_b * b
      std::vector<typename Poly<K>::Term> terms;
      terms.push_back({e.m, field_traits<K>::one(ctx)});
      for (size_t b = 0; b < coords->size(); ++b)
        if (!(*coords)[b].is_zero()) terms.push_back({blex[b], -(*coords)[b]});
      gens.push_back(Poly<K>::from_terms(ctx, n, lex, std::move(terms)));
      gb_lts.push_back(e.m);
    } else {
      span.insert(v);
      blex.push_back(e.m);
      bvec.push_back(std::move(v));
      long parent = static_cast<long>(blex.size()) - 1;
      for (int var = n - 1; var >= 0; --var) {
        MultiIndex c = e.m;
        c[var] = static_cast<uint16_t>(c[var] + 1);
        if (seen.insert(c).second) heap.push({std::move(c), parent, var});
      }
    }
  }
  if (static_cast<Index>(blex.size()) != D)
    throw domain_error("fglm: quotient dimension mismatch (internal)");
  std::sort(gens.begin(), gens.end(), [&](const Poly<K>& a, const Poly<K>& b) {
    return lex.greater(a.leading_monomial(), b.leading_monomial());
  });
  out.gens = std::move(gens);
  return out;
}

// Order change grevlex (or any) -> lex for a zero-dimensional ideal.
template <class K>
GroebnerBasis<K> fglm_to_lex(const GroebnerBasis<K>& G,
                             const Deadline& deadline = Deadline::never()) {
  QuotientBasis qb = quotient_basis(G);
  if (!qb.finite) throw domain_error("fglm_to_lex: ideal is not zero-dimensional");
  if (G.ord == MonomialOrder::lex()) return G;
  int n = G.gens.empty() ? 0 : G.gens[0].nvars();
  auto M = multiplication_matrices(G, qb, deadline);
  return fglm_from_matrices<K>(G.gens.at(0).ctx(), n, M, qb, MonomialOrder::lex(), deadline);
}

// ---------------------------------------------------------------------------
// Elimination ideals via a block order.
// ---------------------------------------------------------------------------

template <class K>
Poly<K> apply_var_permutation(const Poly<K>& f, const std::vector<int>& perm,
                              MonomialOrder new_ord) {
  // perm[old] = new position
  std::vector<typename Poly<K>::Term> terms;
  for (const auto& t : f.terms()) {
    MultiIndex m(f.nvars(), 0);
    for (int i = 0; i < f.nvars(); ++i) m[perm[i]] = t.m[i];
    terms.push_back({std::move(m), t.c});
  }
  return Poly<K>::from_terms(f.ctx(), f.nvars(), new_ord, std::move(terms));
}

// Generators of the elimination ideal: intersect with the subring of the kept
// variables.  Output polynomials live in the original ring (grevlex order).
template <class K>
std::vector<Poly<K>> eliminate(const std::vector<Poly<K>>& gens, const std::vector<bool>& keep,
                               const Deadline& deadline = Deadline::never()) {
  if (gens.empty()) return {};
  int n = gens[0].nvars();
  if (static_cast<int>(keep.size()) != n) throw domain_error("eliminate: keep mask arity");
  std::vector<int> perm(n);
  int drop_count = 0;
  for (int i = 0; i < n; ++i)
    if (!keep[i]) ++drop_count;
  int a = 0, b = drop_count;
  for (int i = 0; i < n; ++i) perm[i] = keep[i] ? b++ : a++;
  MonomialOrder elim = MonomialOrder::elimination(drop_count);
  std::vector<Poly<K>> moved;
  for (const auto& g : gens) moved.push_back(apply_var_permutation(g, perm, elim));
  BuchbergerOpts opts;
  opts.deadline = deadline;
  GroebnerBasis<K> G = buchberger(moved, elim, opts);
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) inv[perm[i]] = i;
  std::vector<Poly<K>> out;
  for (const auto& g : G.gens) {
    bool pure = true;
    for (const auto& t : g.terms())
      for (int i = 0; i < drop_count && pure; ++i)
        if (t.m[i]) pure = false;
    if (pure) out.push_back(apply_var_permutation(g, inv, MonomialOrder::grevlex()));
  }
  return out;
}

// Linear interreduction: rewrite the generator list by a row reduction of its
// coefficient matrix.  Same ideal, far fewer redundant generators.
template <class K>
std::vector<Poly<K>> interreduce_linear(const std::vector<Poly<K>>& gens) {
  if (gens.empty()) return {};
  auto ord = gens[0].order();
  std::set<MultiIndex, std::function<bool(const MultiIndex&, const MultiIndex&)>> monos(
      [ord](const MultiIndex& x, const MultiIndex& y) { return ord.greater(x, y); });
  for (const auto& g : gens)
    for (const auto& t : g.terms()) monos.insert(t.m);
  std::vector<MultiIndex> cols(monos.begin(), monos.end());
  std::map<MultiIndex, Index> pos;
  for (size_t i = 0; i < cols.size(); ++i) pos[cols[i]] = static_cast<Index>(i);
  auto ctx = gens[0].ctx();
  // guard against quadratic blow-up on very large systems
  double cost = static_cast<double>(gens.size()) * cols.size() *
                std::min(gens.size(), cols.size());
  if (cost > 2.5e10) {
    std::vector<Poly<K>> out;
    std::set<std::string> sigs;
    for (const auto& g : gens)
      if (!g.is_zero() && sigs.insert(to_string(g.monic())).second) out.push_back(g.monic());
    return out;
  }
  Mat<K> m = zero_matrix<K>(ctx, static_cast<Index>(gens.size()), static_cast<Index>(cols.size()));
  for (size_t i = 0; i < gens.size(); ++i)
    for (const auto& t : gens[i].terms()) m(static_cast<Index>(i), pos.at(t.m)) = t.c;
  RrefResult<K> rr = rref(m, ctx);
  std::vector<Poly<K>> out;
  int n = gens[0].nvars();
  for (Index r = 0; r < rr.rank; ++r) {
    std::vector<typename Poly<K>::Term> terms;
    for (size_t c = 0; c < cols.size(); ++c)
      if (!rr.R(r, static_cast<Index>(c)).is_zero())
        terms.push_back({cols[c], rr.R(r, static_cast<Index>(c))});
    out.push_back(Poly<K>::from_terms(ctx, n, ord, std::move(terms)));
  }
  return out;
}

}  // namespace tensordec

#endif
