#ifndef TENSORDEC_SOLVE_HPP
#define TENSORDEC_SOLVE_HPP

#include "tensordec/groebner.hpp"

namespace tensordec {

// ---------------------------------------------------------------------------
// Dense univariate arithmetic over an arbitrary field scalar.
// Coefficients low-to-high, trimmed.
// ---------------------------------------------------------------------------

template <class K>
struct UPoly {
  using Ctx = typename field_traits<K>::ctx_t;
  Ctx ctx{};
  std::vector<K> c;

  UPoly() = default;
  explicit UPoly(Ctx ctx_) : ctx(ctx_) {}
  UPoly(Ctx ctx_, std::vector<K> coeffs) : ctx(ctx_), c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  K lead() const { return c.empty() ? field_traits<K>::zero(ctx) : c.back(); }

  static UPoly x(Ctx ctx) {
    return UPoly(ctx, {field_traits<K>::zero(ctx), field_traits<K>::one(ctx)});
  }
  static UPoly constant(Ctx ctx, const K& v) { return UPoly(ctx, {v}); }

  K eval(const K& x0) const {
    K r = field_traits<K>::zero(ctx);
    for (size_t i = c.size(); i-- > 0;) r = r * x0 + c[i];
    return r;
  }
};

template <class K>
UPoly<K> uadd(const UPoly<K>& a, const UPoly<K>& b) {
  UPoly<K> r(a.ctx);
  r.c.assign(std::max(a.c.size(), b.c.size()), field_traits<K>::zero(a.ctx));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.trim();
  return r;
}

template <class K>
UPoly<K> usub(const UPoly<K>& a, const UPoly<K>& b) {
  UPoly<K> r(a.ctx);
  r.c.assign(std::max(a.c.size(), b.c.size()), field_traits<K>::zero(a.ctx));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  r.trim();
  return r;
}

template <class K>
UPoly<K> umul(const UPoly<K>& a, const UPoly<K>& b) {
  UPoly<K> r(a.ctx);
  if (a.is_zero() || b.is_zero()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, field_traits<K>::zero(a.ctx));
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  r.trim();
  return r;
}

template <class K>
UPoly<K> uscale(const UPoly<K>& a, const K& s) {
  UPoly<K> r = a;
  for (auto& x : r.c) x *= s;
  r.trim();
  return r;
}

template <class K>
std::pair<UPoly<K>, UPoly<K>> udivmod(UPoly<K> f, const UPoly<K>& g) {
  if (g.is_zero()) throw domain_error("upoly: division by zero");
  UPoly<K> q(f.ctx);
  if (f.deg() < g.deg()) return {q, f};
  K linv = g.lead().inv();
  q.c.assign(f.c.size() - g.c.size() + 1, field_traits<K>::zero(f.ctx));
  for (size_t off = q.c.size(); off-- > 0;) {
    K cc = f.c[off + g.c.size() - 1] * linv;
    if (cc.is_zero()) continue;
    q.c[off] = cc;
    for (size_t i = 0; i < g.c.size(); ++i) f.c[off + i] -= cc * g.c[i];
  }
  f.c.resize(g.c.size() - 1);
  f.trim();
  q.trim();
  return {q, f};
}

template <class K>
UPoly<K> umod(const UPoly<K>& f, const UPoly<K>& g) {
  return udivmod(f, g).second;
}
template <class K>
UPoly<K> udiv(const UPoly<K>& f, const UPoly<K>& g) {
  return udivmod(f, g).first;
}

template <class K>
UPoly<K> umonic(UPoly<K> f) {
  f.trim();
  if (f.is_zero()) return f;
  return uscale(f, f.lead().inv());
}

template <class K>
UPoly<K> ugcd(UPoly<K> a, UPoly<K> b) {
  a.trim();
  b.trim();
  while (!b.is_zero()) {
    UPoly<K> r = umod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return umonic(a);
}

template <class K>
UPoly<K> uderiv(const UPoly<K>& f) {
  UPoly<K> r(f.ctx);
  if (f.c.size() <= 1) return r;
  r.c.assign(f.c.size() - 1, field_traits<K>::zero(f.ctx));
  for (size_t i = 1; i < f.c.size(); ++i)
    r.c[i - 1] = f.c[i] * field_traits<K>::from_int(f.ctx, static_cast<long long>(i));
  r.trim();
  return r;
}

template <class K>
UPoly<K> upowmod(UPoly<K> base, bigint e, const UPoly<K>& m) {
  UPoly<K> r = UPoly<K>::constant(base.ctx, field_traits<K>::one(base.ctx));
  base = umod(base, m);
  while (e > 0) {
    if ((e & 1) != 0) r = umod(umul(r, base), m);
    base = umod(umul(base, base), m);
    e >>= 1;
  }
  return r;
}

// Poly <-> UPoly bridges for univariate content in variable `var`.
template <class K>
UPoly<K> to_upoly(const Poly<K>& f, int var) {
  UPoly<K> r(f.ctx());
  for (const auto& t : f.terms()) {
    for (int i = 0; i < f.nvars(); ++i)
      if (i != var && t.m[i]) throw domain_error("to_upoly: polynomial is not univariate");
    size_t e = t.m[var];
    if (r.c.size() <= e) r.c.resize(e + 1, field_traits<K>::zero(f.ctx()));
    r.c[e] = t.c;
  }
  r.trim();
  return r;
}

template <class K>
Poly<K> from_upoly(const UPoly<K>& f, int nvars, int var,
                   MonomialOrder ord = MonomialOrder::grevlex()) {
  std::vector<typename Poly<K>::Term> terms;
  for (size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    MultiIndex m(nvars, 0);
    m[var] = static_cast<uint16_t>(i);
    terms.push_back({std::move(m), f.c[i]});
  }
  return Poly<K>::from_terms(f.ctx, nvars, ord, std::move(terms));
}

// ---------------------------------------------------------------------------
// Univariate factorization over F_p / F_{p^k}:
// squarefree decomposition, then distinct-degree, then equal-degree splitting.
// ---------------------------------------------------------------------------

namespace facdetail {

template <class K>
bigint field_order(const typename field_traits<K>::ctx_t& ctx);
template <>
inline bigint field_order<Fp>(const uint64_t& p) {
  return bigint(p);
}
template <>
inline bigint field_order<Fq>(const FqCtxPtr& c) {
  return c->order();
}

template <class K>
K pth_root_coeff(const K& a, const typename field_traits<K>::ctx_t& ctx) {
  if constexpr (std::is_same_v<K, Fp>) {
    (void)ctx;
    return a;  // Frobenius is the identity on F_p
  } else if constexpr (std::is_same_v<K, Fq>) {
    // a^(p^(k-1)) is the inverse of Frobenius on F_{p^k}
    Fq r = a;
    for (uint32_t i = 0; i + 1 < ctx->k; ++i) r = r.frobenius();
    return r;
  } else {
    throw domain_error("pth_root: characteristic zero");
  }
}

template <class K>
UPoly<K> pth_root(const UPoly<K>& f, uint64_t p) {
  UPoly<K> r(f.ctx);
  r.c.assign(f.c.size() / p + 1, field_traits<K>::zero(f.ctx));
  for (size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    if (i % p) throw domain_error("pth_root: polynomial is not a p-th power");
    r.c[i / p] = pth_root_coeff<K>(f.c[i], f.ctx);
  }
  r.trim();
  return r;
}

}  // namespace facdetail

// (factor, multiplicity) pairs with monic squarefree factors.
template <class K>
std::vector<std::pair<UPoly<K>, int>> squarefree_decomposition(UPoly<K> f) {
  uint64_t p = field_traits<K>::characteristic(f.ctx);
  f = umonic(std::move(f));
  std::vector<std::pair<UPoly<K>, int>> out;
  if (f.deg() <= 0) return out;
  UPoly<K> df = uderiv(f);
  if (df.is_zero()) {
    UPoly<K> r = facdetail::pth_root(f, p);
    for (auto& [g, m] : squarefree_decomposition(std::move(r)))
      out.emplace_back(std::move(g), m * static_cast<int>(p));
    return out;
  }
  UPoly<K> rad = ugcd(f, df);
  UPoly<K> w = udiv(f, rad);
  int i = 1;
  while (w.deg() > 0) {
    UPoly<K> y = ugcd(w, rad);
    UPoly<K> z = udiv(w, y);
    if (z.deg() > 0) out.emplace_back(umonic(z), i);
    rad = udiv(rad, y);
    w = std::move(y);
    ++i;
  }
  if (rad.deg() > 0) {
    UPoly<K> r = facdetail::pth_root(rad, p);
    for (auto& [g, m] : squarefree_decomposition(std::move(r)))
      out.emplace_back(std::move(g), m * static_cast<int>(p));
  }
  return out;
}

// Distinct-degree decomposition of a monic squarefree polynomial:
// returns (product-of-irreducibles-of-degree-d, d) pairs.
template <class K>
std::vector<std::pair<UPoly<K>, int>> distinct_degree(UPoly<K> f) {
  bigint q = facdetail::field_order<K>(f.ctx);
  std::vector<std::pair<UPoly<K>, int>> out;
  UPoly<K> x = UPoly<K>::x(f.ctx);
  UPoly<K> h = x;
  int d = 0;
  while (f.deg() > 2 * (d + 1) - 1 && f.deg() > 0) {
    ++d;
    h = upowmod(h, q, f);
    UPoly<K> g = ugcd(usub(h, x), f);
    if (g.deg() > 0) {
      out.emplace_back(g, d);
      f = udiv(f, g);
      h = umod(h, f);
    }
  }
  if (f.deg() > 0) out.emplace_back(f, f.deg());
  return out;
}

// Cantor-Zassenhaus equal-degree splitting (odd field order).
template <class K>
void equal_degree_split(const UPoly<K>& f, int d, Rng& rng, std::vector<UPoly<K>>& out) {
  if (f.deg() == d) {
    out.push_back(umonic(f));
    return;
  }
  bigint q = facdetail::field_order<K>(f.ctx);
  if (q % 2 == 0) throw domain_error("equal_degree_split: characteristic 2 not supported");
  bigint e = 1;
  for (int i = 0; i < d; ++i) e *= q;
  e = (e - 1) / 2;
  for (int tries = 0; tries < 256; ++tries) {
    UPoly<K> a(f.ctx);
    a.c.resize(static_cast<size_t>(f.deg()), field_traits<K>::zero(f.ctx));
    for (auto& cc : a.c) cc = field_traits<K>::random(f.ctx, rng);
    a.trim();
    if (a.deg() < 1) continue;
    UPoly<K> g = ugcd(a, f);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      equal_degree_split(g, d, rng, out);
      equal_degree_split(udiv(f, g), d, rng, out);
      return;
    }
    UPoly<K> b = upowmod(a, e, f);
    b = usub(b, UPoly<K>::constant(f.ctx, field_traits<K>::one(f.ctx)));
    g = ugcd(b, f);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      equal_degree_split(g, d, rng, out);
      equal_degree_split(udiv(f, g), d, rng, out);
      return;
    }
  }
  throw domain_error("equal_degree_split: no split found (internal)");
}

template <class K>
struct Factorization {
  K lead;
  std::vector<std::pair<UPoly<K>, int>> factors;  // monic irreducible, multiplicity
};

template <class K>
Factorization<K> univariate_factor(const UPoly<K>& f, uint64_t seed = 12345) {
  if (f.is_zero()) throw domain_error("univariate_factor: zero polynomial");
  Factorization<K> out{f.lead(), {}};
  if (f.deg() < 1) return out;
  Rng rng(seed ^ 0xabcdef1234567890ULL);
  for (auto& [sf, mult] : squarefree_decomposition(f)) {
    for (auto& [prod, d] : distinct_degree(std::move(sf))) {
      std::vector<UPoly<K>> irr;
      equal_degree_split(prod, d, rng, irr);
      std::sort(irr.begin(), irr.end(), [](const UPoly<K>& a, const UPoly<K>& b) {
        if (a.deg() != b.deg()) return a.deg() < b.deg();
        for (size_t i = a.c.size(); i-- > 0;) {
          std::string sa = field_traits<K>::to_string(a.c[i]);
          std::string sb = field_traits<K>::to_string(b.c[i]);
          if (sa != sb) return sa.size() != sb.size() ? sa.size() < sb.size() : sa < sb;
        }
        return false;
      });
      for (auto& g : irr) out.factors.emplace_back(std::move(g), mult);
    }
  }
  std::stable_sort(out.factors.begin(), out.factors.end(),
                   [](const auto& a, const auto& b) { return a.first.deg() < b.first.deg(); });
  return out;
}

// All roots of f lying in the coefficient field, with multiplicities.
template <class K>
std::vector<std::pair<K, int>> roots_in_field(const UPoly<K>& f, uint64_t seed = 777) {
  std::vector<std::pair<K, int>> out;
  if (f.deg() < 1) return out;
  bigint q = facdetail::field_order<K>(f.ctx);
  Rng rng(seed ^ 0x5eed5eed5eedULL);
  for (auto& [sf, mult] : squarefree_decomposition(f)) {
    // roots live in gcd(x^q - x, sf)
    UPoly<K> x = UPoly<K>::x(sf.ctx);
    UPoly<K> xq = upowmod(x, q, sf);
    UPoly<K> g = ugcd(usub(xq, x), sf);
    if (g.deg() <= 0) continue;
    std::vector<UPoly<K>> lin;
    equal_degree_split(g, 1, rng, lin);
    for (auto& l : lin) out.emplace_back(-l.c[0], mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return field_traits<K>::to_string(a.first) < field_traits<K>::to_string(b.first);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Rational roots of a rational univariate polynomial: modular Hensel lifting
// plus rational reconstruction, exact verification of every reported root.
// Complete for the bounds |num| <= |trailing|, |den| <= |leading| given by the
// rational root theorem on the primitive integer model.
// ---------------------------------------------------------------------------

struct RationalRoots {
  std::vector<std::pair<Rat, int>> roots;
  bool split_completely = false;  // true when deg f = sum of multiplicities
};

namespace ratroot {

inline bigint mod_pos(const bigint& a, const bigint& m) {
  bigint r = a % m;
  if (r < 0) r += m;
  return r;
}

inline bigint mod_inv(const bigint& a, const bigint& m) {
  bigint t = 0, nt = 1, r = m, nr = mod_pos(a, m);
  while (nr != 0) {
    bigint q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw domain_error("mod_inv: not invertible");
  return mod_pos(t, m);
}

// rational reconstruction of x mod m with |num| <= nbound, 0 < den <= dbound
inline std::optional<std::pair<bigint, bigint>> reconstruct(const bigint& x, const bigint& m,
                                                            const bigint& nbound,
                                                            const bigint& dbound) {
  bigint r0 = m, r1 = mod_pos(x, m);
  bigint t0 = 0, t1 = 1;
  while (r1 > nbound) {
    bigint q = r0 / r1;
    bigint r2 = r0 - q * r1;
    bigint t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  bigint num = r1, den = t1;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (den == 0 || den > dbound) return std::nullopt;
  if (gcd(num, den) != 1) return std::nullopt;
  return std::make_pair(num, den);
}

}  // namespace ratroot

inline RationalRoots rational_roots(const UPoly<Rat>& f_in) {
  RationalRoots out;
  if (f_in.deg() < 0) throw domain_error("rational_roots: zero polynomial");
  if (f_in.deg() == 0) {
    out.split_completely = true;
    return out;
  }
  // primitive integer model
  bigint den_lcm = 1;
  for (const auto& c : f_in.c) den_lcm = lcm(den_lcm, c.den());
  std::vector<bigint> F(f_in.c.size());
  for (size_t i = 0; i < F.size(); ++i) F[i] = f_in.c[i].num() * (den_lcm / f_in.c[i].den());
  bigint content = 0;
  for (const auto& x : F) content = gcd(content, x);
  if (content > 1)
    for (auto& x : F) x /= content;
  // strip roots at zero
  int v0 = 0;
  while (F[v0] == 0) ++v0;
  if (v0 > 0) {
    out.roots.emplace_back(Rat(0), v0);
    F.erase(F.begin(), F.begin() + v0);
  }
  int total_mult = v0;
  int n = static_cast<int>(F.size()) - 1;
  if (n == 0) {
    out.split_completely = (total_mult == f_in.deg());
    return out;
  }
  auto feval = [&](const bigrat& x) {
    bigrat r = 0;
    for (int i = n; i >= 0; --i) r = r * x + bigrat(F[i]);
    return r;
  };
  // squarefree parts over Q
  UPoly<Rat> fz(rat_ctx{});
  for (auto& x : F) fz.c.push_back(Rat(bigrat(x)));
  fz.trim();
  bigint A0 = abs(F[0]), An = abs(F[n]);
  for (auto& [sf, mult] : squarefree_decomposition(fz)) {
    // integer model of the squarefree part
    bigint dl = 1;
    for (const auto& c : sf.c) dl = lcm(dl, c.den());
    std::vector<bigint> S(sf.c.size());
    for (size_t i = 0; i < S.size(); ++i) S[i] = sf.c[i].num() * (dl / sf.c[i].den());
    int m = static_cast<int>(S.size()) - 1;
    auto seval = [&](const bigint& x, const bigint& mod) {
      bigint r = 0;
      for (int i = m; i >= 0; --i) r = ratroot::mod_pos(r * x + S[i], mod);
      return r;
    };
    auto sdeval = [&](const bigint& x, const bigint& mod) {
      bigint r = 0;
      for (int i = m; i >= 1; --i) r = ratroot::mod_pos(r * x + S[i] * i, mod);
      return r;
    };
    // prime with invertible lead and squarefree reduction
    static const uint64_t primes[] = {1000003, 1000033, 1000037, 1000039, 1000081,
                                      1000099, 1000117, 1000121, 1000133, 1000151};
    uint64_t p0 = 0;
    std::vector<uint64_t> residues;
    for (uint64_t pc : primes) {
      if (S[m] % pc == 0) continue;
      fppoly::PV sp(S.size());
      for (size_t i = 0; i < S.size(); ++i)
        sp[i] = static_cast<uint64_t>(ratroot::mod_pos(S[i], bigint(pc)));
      fppoly::trim(sp);
      if (fppoly::deg(sp) != m) continue;
      if (fppoly::deg(fppoly::gcd(sp, fppoly::derivative(sp, pc), pc)) != 0) continue;
      // roots mod pc
      UPoly<Fp> fp_poly(pc);
      for (auto cc : sp) fp_poly.c.push_back(Fp::from_raw(pc, cc));
      fp_poly.trim();
      for (auto& [r, mu] : roots_in_field(fp_poly)) {
        (void)mu;
        residues.push_back(static_cast<uint64_t>(r.value()));
      }
      p0 = pc;
      break;
    }
    if (!p0) throw domain_error("rational_roots: no usable prime (degenerate input)");
    bigint bound = 2 * A0 * An + 1;
    for (uint64_t r0 : residues) {
      // Hensel lift the simple root to high modular precision
      bigint mod = p0, root = r0;
      while (mod < bound) {
        bigint mod2 = mod * mod;
        bigint fv = seval(root, mod2);
        bigint dv = sdeval(root, mod2);
        bigint inv = ratroot::mod_inv(dv, mod2);
        root = ratroot::mod_pos(root - fv * inv, mod2);
        mod = mod2;
      }
      auto rec = ratroot::reconstruct(root, mod, A0, An);
      if (!rec) {
        // the candidate may be negative mod m
        rec = ratroot::reconstruct(root - mod, mod, A0, An);
      }
      if (!rec) continue;
      bigrat cand(rec->first, rec->second);
      if (feval(cand) == 0) {
        out.roots.emplace_back(Rat(cand), mult);
        total_mult += mult;
      }
    }
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) {
    return a.first.value() < b.first.value();
  });
  out.split_completely = (total_mult == f_in.deg());
  return out;
}

// ---------------------------------------------------------------------------
// Zero-dimensional solving.
// ---------------------------------------------------------------------------

// point coordinate scalar for a given base field
template <class K>
struct solve_traits;
template <>
struct solve_traits<Fp> {
  using point_scalar = Fq;
};
template <>
struct solve_traits<Rat> {
  using point_scalar = Rat;
};

template <class PK>
struct SolutionPoint {
  std::vector<PK> coords;
  int multiplicity = 1;
};

struct SolveOpts {
  uint64_t seed = 1;
  int max_coordinate_retries = 5;
  Deadline deadline = Deadline::never();
  bool verify = true;
};

namespace solvedetail {

// shape position test on a lex basis: { x_i - g_i(x_last), g(x_last) }
template <class K>
bool extract_shape(const GroebnerBasis<K>& H, int n, long D, std::vector<UPoly<K>>& tails,
                   UPoly<K>& elim) {
  if (static_cast<int>(H.gens.size()) != n) return false;
  tails.assign(n - 1, UPoly<K>());
  bool have_elim = false;
  for (const auto& g : H.gens) {
    const MultiIndex& lt = g.leading_monomial();
    int v = -1;
    bool pure = true;
    for (int i = 0; i < n; ++i)
      if (lt[i]) {
        if (v >= 0) pure = false;
        v = i;
      }
    if (!pure || v < 0) return false;
    if (v == n - 1) {
      for (const auto& t : g.terms())
        for (int i = 0; i + 1 < n; ++i)
          if (t.m[i]) return false;
      elim = to_upoly(g, n - 1);
      if (elim.deg() != D) return false;
      have_elim = true;
    } else {
      if (lt[v] != 1) return false;
      Poly<K> tail = g - Poly<K>::variable(g.ctx(), n, v, H.ord);
      for (const auto& t : tail.terms())
        for (int i = 0; i + 1 < n; ++i)
          if (t.m[i]) return false;
      tails[v] = to_upoly(-tail, n - 1);
    }
  }
  return have_elim;
}

}  // namespace solvedetail

// Solve a zero-dimensional system over F_p.  Points are returned over minimal
// extensions F_{p^e}, one context per irreducible factor of the eliminant;
// conjugate points are listed individually.
inline std::vector<SolutionPoint<Fq>> solve_zero_dim(const GroebnerBasis<Fp>& G,
                                                     const SolveOpts& opts = {}) {
  QuotientBasis qb = quotient_basis(G);
  if (!qb.finite) throw domain_error("solve_zero_dim: ideal is not zero-dimensional");
  long D = qb.degree();
  std::vector<SolutionPoint<Fq>> out;
  if (D == 0) return out;
  uint64_t p = G.gens.at(0).ctx();
  int n = G.gens[0].nvars();
  auto Ms = multiplication_matrices(G, qb, opts.deadline);
  Rng rng(opts.seed ^ 0x517e0fULL);

  for (int attempt = 0; attempt <= opts.max_coordinate_retries; ++attempt) {
    opts.deadline.check("solve_zero_dim");
    // linear change of variables x' = A x, realized on multiplication matrices
    Mat<Fp> A = identity_matrix<Fp>(p, n);
    if (attempt > 0) {
      do {
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j) A(i, j) = field_traits<Fp>::random(p, rng);
      } while (rank_of(A) < n);
    }
    std::vector<Mat<Fp>> Mp(n, zero_matrix<Fp>(p, static_cast<Index>(D), static_cast<Index>(D)));
    if (attempt == 0) {
      Mp = Ms;
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!A(i, j).is_zero()) Mp[i] += Ms[j] * A(i, j);
    }
    GroebnerBasis<Fp> H;
    try {
      H = fglm_from_matrices<Fp>(p, n, Mp, qb, MonomialOrder::lex(), opts.deadline);
    } catch (const timeout_error&) {
      throw;
    }
    std::vector<UPoly<Fp>> tails;
    UPoly<Fp> elim((uint64_t(p)));
    if (n == 1) {
      if (H.gens.size() != 1) continue;
      elim = to_upoly(H.gens[0], 0);
      tails.clear();
      if (elim.deg() != D) continue;
    } else if (!solvedetail::extract_shape(H, n, D, tails, elim)) {
      continue;
    }
    // factor the eliminant and read points off each irreducible factor
    Factorization<Fp> fac = univariate_factor(elim, opts.seed + attempt);
    for (auto& [f, mult] : fac.factors) {
      int e = f.deg();
      FqCtxPtr ctx = e == 1 ? FqCtx::prime(p) : FqCtx::from_modulus(p, [&] {
        fppoly::PV v(f.c.size());
        for (size_t i = 0; i < f.c.size(); ++i) v[i] = static_cast<uint64_t>(f.c[i].value());
        return v;
      }());
      Fq root = e == 1 ? Fq(ctx, -f.c[0]) : Fq::generator(ctx);
      for (int conj = 0; conj < e; ++conj) {
        SolutionPoint<Fq> pt;
        pt.multiplicity = mult;
        std::vector<Fq> prime_coords(n);
        prime_coords[n - 1] = root;
        for (int i = 0; i + 1 < n; ++i) {
          // evaluate the tail at the root, coefficients embedded into F_{p^e}
          Fq acc = Fq(ctx, Fp::from_raw(p, 0));
          const UPoly<Fp>& t = tails[i];
          for (size_t c = t.c.size(); c-- > 0;) acc = acc * root + Fq(ctx, t.c[c]);
          prime_coords[i] = acc;
        }
        // transform back: x = A^{-1} x'
        if (attempt == 0) {
          pt.coords = std::move(prime_coords);
        } else {
          auto sol = solve_linear(
              [&] {
                Mat<Fq> Aq = zero_matrix<Fq>(ctx, n, n);
                for (Index i = 0; i < n; ++i)
                  for (Index j = 0; j < n; ++j) Aq(i, j) = Fq(ctx, A(i, j));
                return Aq;
              }(),
              [&] {
                Vec<Fq> b = zero_vector<Fq>(ctx, n);
                for (int i = 0; i < n; ++i) b[i] = prime_coords[i];
                return b;
              }());
          if (!sol.consistent) throw domain_error("solve_zero_dim: internal transform");
          pt.coords.assign(sol.particular.data(), sol.particular.data() + n);
        }
        out.push_back(std::move(pt));
        root = root.frobenius();
      }
    }
    long total = 0;
    for (const auto& s : out) total += s.multiplicity;
    if (total != D) throw domain_error("solve_zero_dim: multiplicity bookkeeping (internal)");
    if (opts.verify) {
      for (const auto& g : G.gens)
        for (const auto& s : out) {
          Vec<Fq> x = zero_vector<Fq>(s.coords[0].ctx(), n);
          for (int i = 0; i < n; ++i) x[i] = s.coords[i];
          Fq val = g.template evaluate_mapped<Fq>(
              x, [&](const Fp& c) { return Fq(s.coords[0].ctx(), c); });
          if (!val.is_zero()) throw domain_error("solve_zero_dim: point check failed (internal)");
        }
    }
    return out;
  }
  throw degenerate_error("solve_zero_dim: degenerate coordinates (no shape position found)");
}

// Solve over Q; only rational points are representable, anything else raises.
inline std::vector<SolutionPoint<Rat>> solve_zero_dim(const GroebnerBasis<Rat>& G,
                                                      const SolveOpts& opts = {}) {
  QuotientBasis qb = quotient_basis(G);
  if (!qb.finite) throw domain_error("solve_zero_dim: ideal is not zero-dimensional");
  long D = qb.degree();
  std::vector<SolutionPoint<Rat>> out;
  if (D == 0) return out;
  int n = G.gens[0].nvars();
  auto Ms = multiplication_matrices(G, qb, opts.deadline);
  Rng rng(opts.seed ^ 0x52a7ULL);
  for (int attempt = 0; attempt <= opts.max_coordinate_retries; ++attempt) {
    opts.deadline.check("solve_zero_dim");
    Mat<Rat> A = identity_matrix<Rat>(rat_ctx{}, n);
    if (attempt > 0) {
      do {
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j)
            A(i, j) = Rat(static_cast<long long>(rng_below(rng, 19)) - 9);
      } while (rank_of(A) < n);
    }
    std::vector<Mat<Rat>> Mp;
    if (attempt == 0) {
      Mp = Ms;
    } else {
      Mp.assign(n, zero_matrix<Rat>(rat_ctx{}, static_cast<Index>(D), static_cast<Index>(D)));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!A(i, j).is_zero()) Mp[i] += Ms[j] * A(i, j);
    }
    GroebnerBasis<Rat> H =
        fglm_from_matrices<Rat>(rat_ctx{}, n, Mp, qb, MonomialOrder::lex(), opts.deadline);
    std::vector<UPoly<Rat>> tails;
    UPoly<Rat> elim((rat_ctx{}));
    if (n == 1) {
      if (H.gens.size() != 1) continue;
      elim = to_upoly(H.gens[0], 0);
      if (elim.deg() != D) continue;
    } else if (!solvedetail::extract_shape(H, n, D, tails, elim)) {
      continue;
    }
    RationalRoots rr = rational_roots(elim);
    if (!rr.split_completely)
      throw domain_error("solve_zero_dim: points are not rational over Q");
    for (auto& [root, mult] : rr.roots) {
      SolutionPoint<Rat> pt;
      pt.multiplicity = mult;
      std::vector<Rat> prime_coords(n);
      prime_coords[n - 1] = root;
      for (int i = 0; i + 1 < n; ++i) prime_coords[i] = tails[i].eval(root);
      if (attempt == 0) {
        pt.coords = std::move(prime_coords);
      } else {
        Vec<Rat> b = zero_vector<Rat>(rat_ctx{}, n);
        for (int i = 0; i < n; ++i) b[i] = prime_coords[i];
        auto sol = solve_linear(A, b);
        if (!sol.consistent) throw domain_error("solve_zero_dim: internal transform");
        pt.coords.assign(sol.particular.data(), sol.particular.data() + n);
      }
      out.push_back(std::move(pt));
    }
    long total = 0;
    for (const auto& s : out) total += s.multiplicity;
    if (total != D) throw domain_error("solve_zero_dim: multiplicity bookkeeping (internal)");
    if (opts.verify) {
      for (const auto& g : G.gens)
        for (const auto& s : out) {
          Vec<Rat> x = zero_vector<Rat>(rat_ctx{}, n);
          for (int i = 0; i < n; ++i) x[i] = s.coords[i];
          if (!g.evaluate(x).is_zero())
            throw domain_error("solve_zero_dim: point check failed (internal)");
        }
    }
    return out;
  }
  throw degenerate_error("solve_zero_dim: degenerate coordinates (no shape position found)");
}

// ---------------------------------------------------------------------------
// Embedding all F_p solution points into one common extension field.
// ---------------------------------------------------------------------------

struct UnifiedPoints {
  FqCtxPtr field;
  std::vector<SolutionPoint<Fq>> points;
};

inline UnifiedPoints unify_points(uint64_t p, const std::vector<SolutionPoint<Fq>>& pts,
                                  uint64_t seed) {
  UnifiedPoints out;
  uint32_t K = 1;
  for (const auto& pt : pts) {
    uint32_t k = pt.coords.empty() ? 1 : pt.coords[0].ctx()->k;
    K = static_cast<uint32_t>(std::lcm(K, k));
  }
  // reuse an existing context when one already has the target degree
  FqCtxPtr target;
  for (const auto& pt : pts)
    if (!pt.coords.empty() && pt.coords[0].ctx()->k == K) {
      target = pt.coords[0].ctx();
      break;
    }
  if (!target) target = K == 1 ? FqCtx::prime(p) : FqCtx::make(p, K, seed);
  out.field = target;
  std::map<const FqCtx*, Fq> gen_image;  // image of each source generator in the target
  for (const auto& pt : pts) {
    SolutionPoint<Fq> q;
    q.multiplicity = pt.multiplicity;
    for (const auto& c : pt.coords) {
      const FqCtxPtr& src = c.ctx();
      if (src == target || src->k == 1) {
        q.coords.push_back(src == target ? c : Fq(target, c.as_prime()));
        continue;
      }
      auto it = gen_image.find(src.get());
      if (it == gen_image.end()) {
        // a root of the source modulus inside the target field
        UPoly<Fq> m(target);
        for (auto cc : src->modulus) m.c.push_back(Fq(target, Fp::from_raw(p, cc)));
        m.trim();
        auto roots = roots_in_field(m, seed ^ 0x700dULL);
        if (roots.empty()) throw domain_error("unify_points: no embedding root (internal)");
        it = gen_image.emplace(src.get(), roots.front().first).first;
      }
      // evaluate the coefficient polynomial at the generator image
      Fq acc = Fq(target, Fp::from_raw(p, 0));
      const auto& cv = c.coeffs();
      for (size_t i = cv.size(); i-- > 0;)
        acc = acc * it->second + Fq(target, Fp::from_raw(p, cv[i]));
      q.coords.push_back(acc);
    }
    out.points.push_back(std::move(q));
  }
  return out;
}

}  // namespace tensordec

#endif
