#ifndef TENSORDEC_MULTIPOLY_HPP
#define TENSORDEC_MULTIPOLY_HPP

#include <algorithm>
#include <boost/container/small_vector.hpp>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "tensordec/linalg.hpp"

namespace tensordec {

// Exponent vector of a monomial.
using MultiIndex = boost::container::small_vector<uint16_t, 12>;

inline long mi_deg(const MultiIndex& m) {
  long d = 0;
  for (auto e : m) d += e;
  return d;
}

inline MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] = static_cast<uint16_t>(r[i] + b[i]);
  return r;
}

inline bool mi_divides(const MultiIndex& a, const MultiIndex& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline MultiIndex mi_sub(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] = static_cast<uint16_t>(r[i] - b[i]);
  return r;
}

inline MultiIndex mi_lcm(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] = std::max(r[i], b[i]);
  return r;
}

inline bool mi_coprime(const MultiIndex& a, const MultiIndex& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

struct MonomialOrder {
  enum Kind : uint8_t { Grevlex, Lex, Block } kind = Grevlex;
  // Block: first `block` variables are eliminated (compared grevlex first).
  int block = 0;

  static MonomialOrder grevlex() { return {Grevlex, 0}; }
  static MonomialOrder lex() { return {Lex, 0}; }
  static MonomialOrder elimination(int first_block) { return {Block, first_block}; }

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) {
    return a.kind == b.kind && (a.kind != Block || a.block == b.block);
  }
  friend bool operator!=(const MonomialOrder& a, const MonomialOrder& b) { return !(a == b); }

  // strict "a comes before b" (a smaller than b)
  bool less(const MultiIndex& a, const MultiIndex& b) const {
    switch (kind) {
      case Grevlex:
        return grevlex_less(a.data(), b.data(), a.size());
      case Lex:
        return lex_less(a.data(), b.data(), a.size());
      case Block: {
        size_t k = static_cast<size_t>(block);
        long da = 0, db = 0;
        for (size_t i = 0; i < k; ++i) { da += a[i]; db += b[i]; }
        if (da != db) return da < db;
        // same block-1 degree: grevlex within the first block
        for (size_t i = k; i-- > 0;)
          if (a[i] != b[i]) return a[i] > b[i];
        return grevlex_less(a.data() + k, b.data() + k, a.size() - k);
      }
    }
    return false;
  }

  bool greater(const MultiIndex& a, const MultiIndex& b) const { return less(b, a); }

 private:
  static bool grevlex_less(const uint16_t* a, const uint16_t* b, size_t n) {
    long da = 0, db = 0;
    for (size_t i = 0; i < n; ++i) { da += a[i]; db += b[i]; }
    if (da != db) return da < db;
    for (size_t i = n; i-- > 0;)
      if (a[i] != b[i]) return a[i] > b[i];
    return false;
  }
  static bool lex_less(const uint16_t* a, const uint16_t* b, size_t n) {
    for (size_t i = 0; i < n; ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

// ---------------------------------------------------------------------------
// Sparse multivariate polynomial, terms kept sorted descending in the ring's
// active order.  Deterministic iteration order by construction.
// ---------------------------------------------------------------------------

template <class K>
class Poly {
 public:
  using Ctx = typename field_traits<K>::ctx_t;
  struct Term {
    MultiIndex m;
    K c;
  };

  Poly() = default;
  Poly(Ctx ctx, int nvars, MonomialOrder ord = MonomialOrder::grevlex())
      : ctx_(ctx), nvars_(nvars), ord_(ord) {}

  static Poly constant(Ctx ctx, int nvars, const K& value,
                       MonomialOrder ord = MonomialOrder::grevlex()) {
    Poly f(ctx, nvars, ord);
    if (!value.is_zero()) f.terms_.push_back({MultiIndex(nvars, 0), value});
    return f;
  }

  static Poly variable(Ctx ctx, int nvars, int i, MonomialOrder ord = MonomialOrder::grevlex()) {
    if (i < 0 || i >= nvars) throw domain_error("Poly: variable index out of range");
    Poly f(ctx, nvars, ord);
    MultiIndex m(nvars, 0);
    m[i] = 1;
    f.terms_.push_back({std::move(m), field_traits<K>::one(ctx)});
    return f;
  }

  static Poly monomial(Ctx ctx, int nvars, MultiIndex m, const K& c,
                       MonomialOrder ord = MonomialOrder::grevlex()) {
    Poly f(ctx, nvars, ord);
    if (static_cast<int>(m.size()) != nvars) throw domain_error("Poly: bad multi-index length");
    if (!c.is_zero()) f.terms_.push_back({std::move(m), c});
    return f;
  }

  int nvars() const { return nvars_; }
  const MonomialOrder& order() const { return ord_; }
  const Ctx& ctx() const { return ctx_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t nterms() const { return terms_.size(); }

  const MultiIndex& leading_monomial() const {
    if (terms_.empty()) throw domain_error("Poly: leading term of zero polynomial");
    return terms_.front().m;
  }
  const K& leading_coeff() const {
    if (terms_.empty()) throw domain_error("Poly: leading term of zero polynomial");
    return terms_.front().c;
  }

  long degree() const {
    long d = -1;
    for (const auto& t : terms_) d = std::max(d, mi_deg(t.m));
    return d;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    long d = mi_deg(terms_.front().m);
    for (const auto& t : terms_)
      if (mi_deg(t.m) != d) return false;
    return true;
  }

  K coeff(const MultiIndex& m) const {
    for (const auto& t : terms_)
      if (t.m == m) return t.c;
    return field_traits<K>::zero(ctx_);
  }

  Poly with_order(MonomialOrder ord) const {
    Poly r = *this;
    r.ord_ = ord;
    r.sort_terms();
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    a.check_compatible(b);
    Poly r(a.ctx_, a.nvars_, a.ord_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      const auto& ta = a.terms_[i];
      const auto& tb = b.terms_[j];
      if (ta.m == tb.m) {
        K c = ta.c + tb.c;
        if (!c.is_zero()) r.terms_.push_back({ta.m, std::move(c)});
        ++i;
        ++j;
      } else if (a.ord_.greater(ta.m, tb.m)) {
        r.terms_.push_back(ta);
        ++i;
      } else {
        r.terms_.push_back(tb);
        ++j;
      }
    }
    for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
    return r;
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  Poly scaled(const K& c) const {
    if (c.is_zero()) return Poly(ctx_, nvars_, ord_);
    Poly r = *this;
    for (auto& t : r.terms_) t.c = t.c * c;
    return r;
  }

  // this - c * x^m * g, the basic reduction step
  Poly sub_mul(const K& c, const MultiIndex& m, const Poly& g) const {
    check_compatible(g);
    Poly shifted(ctx_, nvars_, ord_);
    shifted.terms_.reserve(g.terms_.size());
    for (const auto& t : g.terms_) {
      K cc = t.c * c;
      if (!cc.is_zero()) shifted.terms_.push_back({mi_add(t.m, m), -cc});
    }
    // multiplying by a monomial preserves descending order
    return *this + shifted;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_compatible(b);
    Poly r(a.ctx_, a.nvars_, a.ord_);
    if (a.is_zero() || b.is_zero()) return r;
    r.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) {
        K c = ta.c * tb.c;
        if (!c.is_zero()) r.terms_.push_back({mi_add(ta.m, tb.m), std::move(c)});
      }
    r.sort_terms();
    return r;
  }

  Poly pow(long e) const {
    if (e < 0) throw domain_error("Poly: negative power");
    Poly r = constant(ctx_, nvars_, field_traits<K>::one(ctx_), ord_);
    Poly b = *this;
    while (e) {
      if (e & 1) r = r * b;
      if (e >>= 1) b = b * b;
    }
    return r;
  }

  // equality of the underlying polynomials, independent of the active order
  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) throw domain_error("Poly: variable-count mismatch");
    if (!detail::ctx_equal(a.ctx_, b.ctx_)) throw domain_error("Poly: mixed coefficient fields");
    if (a.terms_.size() != b.terms_.size()) return false;
    if (a.ord_ == b.ord_) {
      for (size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].m != b.terms_[i].m || a.terms_[i].c != b.terms_[i].c) return false;
      return true;
    }
    Poly bb = b.with_order(a.ord_);
    for (size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].m != bb.terms_[i].m || a.terms_[i].c != bb.terms_[i].c) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(leading_coeff().inv());
  }

  // s-fold partial derivative in one variable
  Poly derivative(int var, long s = 1) const {
    if (var < 0 || var >= nvars_) throw domain_error("Poly: variable index out of range");
    if (s < 0) throw domain_error("Poly: negative derivative order");
    if (s == 0) return *this;
    uint64_t ch = field_traits<K>::characteristic(ctx_);
    if (ch != 0 && static_cast<long>(ch) <= degree())
      throw small_characteristic_error("derivative: characteristic <= degree");
    Poly r(ctx_, nvars_, ord_);
    for (const auto& t : terms_) {
      if (t.m[var] < s) continue;
      bigint f = falling_factorial(t.m[var], s);
      K c = t.c * field_traits<K>::from_bigint(ctx_, f);
      if (c.is_zero()) continue;
      MultiIndex m = t.m;
      m[var] = static_cast<uint16_t>(m[var] - s);
      r.terms_.push_back({std::move(m), std::move(c)});
    }
    r.sort_terms();
    return r;
  }

  // mixed partial with one order per variable
  Poly derivative_multi(const MultiIndex& orders) const {
    Poly r = *this;
    for (int i = 0; i < nvars_; ++i)
      if (orders[i]) r = r.derivative(i, orders[i]);
    return r;
  }

  // substitute var -> g, other variables untouched; g in the same ring
  Poly substitute_var(int var, const Poly& g) const {
    check_compatible(g);
    std::vector<Poly> pows = {constant(ctx_, nvars_, field_traits<K>::one(ctx_), ord_)};
    Poly r(ctx_, nvars_, ord_);
    for (const auto& t : terms_) {
      int e = t.m[var];
      while (static_cast<int>(pows.size()) <= e) pows.push_back(pows.back() * g);
      MultiIndex m = t.m;
      m[var] = 0;
      r = r + pows[e].scaled(t.c).mul_monomial(m);
    }
    return r;
  }

  Poly mul_monomial(const MultiIndex& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.m = mi_add(t.m, m);
    r.sort_terms();
    return r;
  }

  // full substitution x_i -> subs[i]; the subs live in a possibly different ring
  Poly substitute(const std::vector<Poly>& subs) const {
    if (static_cast<int>(subs.size()) != nvars_) throw domain_error("Poly: substitution arity");
    if (subs.empty()) throw domain_error("Poly: empty substitution");
    const Poly& model = subs[0];
    Poly r(model.ctx_, model.nvars_, model.ord_);
    std::vector<std::vector<Poly>> pows(nvars_);
    for (int i = 0; i < nvars_; ++i)
      pows[i].push_back(constant(model.ctx_, model.nvars_, field_traits<K>::one(model.ctx_), model.ord_));
    for (const auto& t : terms_) {
      Poly term = constant(model.ctx_, model.nvars_, t.c, model.ord_);
      for (int i = 0; i < nvars_; ++i) {
        int e = t.m[i];
        if (!e) continue;
        while (static_cast<int>(pows[i].size()) <= e) pows[i].push_back(pows[i].back() * subs[i]);
        term = term * pows[i][e];
      }
      r = r + term;
    }
    return r;
  }

  // evaluation into a (possibly larger) field via an embedding map
  template <class K2, class EmbedFn>
  K2 evaluate_mapped(const Vec<K2>& x, EmbedFn embed) const {
    if (x.size() != nvars_) throw domain_error("Poly: evaluation arity");
    K2 acc = embed(field_traits<K>::zero(ctx_));
    for (const auto& t : terms_) {
      K2 v = embed(t.c);
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < t.m[i]; ++e) v *= x[i];
      acc += v;
    }
    return acc;
  }

  K evaluate(const Vec<K>& x) const {
    return evaluate_mapped<K>(x, [](const K& c) { return c; });
  }

  void check_compatible(const Poly& o) const {
    if (nvars_ != o.nvars_) throw domain_error("Poly: variable-count mismatch");
    if (!detail::ctx_equal(ctx_, o.ctx_)) throw domain_error("Poly: mixed coefficient fields");
    if (!(ord_ == o.ord_)) throw domain_error("Poly: mixed monomial orders");
  }

  // building block for algorithms that assemble terms directly
  static Poly from_terms(Ctx ctx, int nvars, MonomialOrder ord, std::vector<Term> terms) {
    Poly r(ctx, nvars, ord);
    r.terms_ = std::move(terms);
    r.sort_terms();
    return r;
  }

 private:
  void sort_terms() {
    std::sort(terms_.begin(), terms_.end(),
              [this](const Term& x, const Term& y) { return ord_.greater(x.m, y.m); });
    // combine equal monomials, drop zeros
    size_t w = 0;
    for (size_t i = 0; i < terms_.size();) {
      MultiIndex m = terms_[i].m;
      K c = terms_[i].c;
      size_t j = i + 1;
      while (j < terms_.size() && terms_[j].m == m) {
        c += terms_[j].c;
        ++j;
      }
      if (!c.is_zero()) terms_[w++] = {std::move(m), std::move(c)};
      i = j;
    }
    terms_.resize(w);
  }

  Ctx ctx_{};
  int nvars_ = 0;
  MonomialOrder ord_ = MonomialOrder::grevlex();
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Monomial bases of graded pieces and coefficient-space coordinates.
// ---------------------------------------------------------------------------

// All degree-d exponent vectors in nvars variables, sorted descending.
inline std::vector<MultiIndex> monomial_basis(int nvars, int d,
                                              MonomialOrder ord = MonomialOrder::lex()) {
  if (d < 0) throw domain_error("monomial_basis: negative degree");
  std::vector<MultiIndex> out;
  MultiIndex cur(nvars, 0);
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == nvars - 1) {
      cur[pos] = static_cast<uint16_t>(rem);
      out.push_back(cur);
      return;
    }
    for (int e = rem; e >= 0; --e) {
      cur[pos] = static_cast<uint16_t>(e);
      rec(pos + 1, rem - e);
    }
  };
  if (nvars <= 0) throw domain_error("monomial_basis: nvars must be positive");
  rec(0, d);
  std::sort(out.begin(), out.end(),
            [&](const MultiIndex& a, const MultiIndex& b) { return ord.greater(a, b); });
  return out;
}

inline long graded_dim(int nvars, int d) {
  return static_cast<long>(binomial(nvars - 1 + d, d));
}

// position of m in monomial_basis(nvars, deg(m), ord)
inline Index basis_position(const std::vector<MultiIndex>& basis, const MultiIndex& m,
                            const MonomialOrder& ord) {
  auto it = std::lower_bound(basis.begin(), basis.end(), m,
                             [&](const MultiIndex& a, const MultiIndex& b) { return ord.greater(a, b); });
  if (it == basis.end() || *it != m) throw domain_error("basis_position: monomial not in basis");
  return static_cast<Index>(it - basis.begin());
}

// Coordinates of a homogeneous degree-d polynomial in the plain monomial basis.
template <class K>
Vec<K> coeff_vector(const Poly<K>& f, int d, MonomialOrder basis_ord = MonomialOrder::lex()) {
  if (!f.is_homogeneous() || (!f.is_zero() && f.degree() != d))
    throw domain_error("coeff_vector: polynomial not homogeneous of the given degree");
  auto basis = monomial_basis(f.nvars(), d, basis_ord);
  Vec<K> v = zero_vector<K>(f.ctx(), static_cast<Index>(basis.size()));
  for (const auto& t : f.terms()) v[basis_position(basis, t.m, basis_ord)] = t.c;
  return v;
}

template <class K>
Poly<K> poly_from_coeff_vector(typename field_traits<K>::ctx_t ctx, int nvars, int d,
                               const Vec<K>& v, MonomialOrder basis_ord = MonomialOrder::lex(),
                               MonomialOrder poly_ord = MonomialOrder::grevlex()) {
  auto basis = monomial_basis(nvars, d, basis_ord);
  if (static_cast<Index>(basis.size()) != v.size())
    throw domain_error("poly_from_coeff_vector: length mismatch");
  std::vector<typename Poly<K>::Term> terms;
  for (size_t i = 0; i < basis.size(); ++i)
    if (!v[static_cast<Index>(i)].is_zero())
      terms.push_back({basis[i], v[static_cast<Index>(i)]});
  return Poly<K>::from_terms(ctx, nvars, poly_ord, std::move(terms));
}

inline bigint multinomial(int d, const MultiIndex& m) {
  bigint r = 1;
  int rest = d;
  for (auto e : m) {
    r *= binomial(rest, e);
    rest -= e;
  }
  return r;
}

// (a_0 x_0 + ... + a_n x_n)^d by multinomial expansion
template <class K>
Poly<K> expand_power_linear(const Vec<K>& a, int d,
                            MonomialOrder poly_ord = MonomialOrder::grevlex()) {
  if (d < 1) throw domain_error("expand_power_linear: degree must be >= 1");
  int nvars = static_cast<int>(a.size());
  bool all_zero = true;
  for (Index i = 0; i < a.size(); ++i)
    if (!a[i].is_zero()) all_zero = false;
  if (all_zero) throw domain_error("expand_power_linear: zero linear form");
  auto ctx = field_traits<K>::ctx_of(a[0]);
  for (Index i = 0; i < a.size(); ++i) {
    auto c = field_traits<K>::ctx_of(a[i]);
    if (detail::ctx_bound(c)) ctx = c;
  }
  std::vector<typename Poly<K>::Term> terms;
  for (const auto& m : monomial_basis(nvars, d)) {
    K c = field_traits<K>::from_bigint(ctx, multinomial(d, m));
    bool zero = false;
    for (int i = 0; i < nvars && !zero; ++i) {
      for (int e = 0; e < m[i]; ++e) c = c * a[i];
      if (c.is_zero()) zero = true;
    }
    if (!zero && !c.is_zero()) terms.push_back({m, std::move(c)});
  }
  return Poly<K>::from_terms(ctx, nvars, poly_ord, std::move(terms));
}

// ---------------------------------------------------------------------------
// Printing (the text grammar parser lives in io.hpp)
// ---------------------------------------------------------------------------

template <class K>
std::string to_string(const Poly<K>& f) {
  if (f.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : f.terms()) {
    std::string c = field_traits<K>::to_string(t.c);
    bool neg = !c.empty() && c[0] == '-';
    if (first) {
      first = false;
      if (neg) {
        s += "-";
        c = c.substr(1);
      }
    } else {
      s += neg ? " - " : " + ";
      if (neg) c = c.substr(1);
    }
    std::string mono;
    for (int i = 0; i < f.nvars(); ++i) {
      if (!t.m[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i);
      if (t.m[i] > 1) mono += "^" + std::to_string(t.m[i]);
    }
    if (mono.empty()) {
      s += c;
    } else if (c == "1") {
      s += mono;
    } else {
      s += c + "*" + mono;
    }
  }
  return s;
}

}  // namespace tensordec

namespace Eigen {
template <class K>
struct NumTraits<tensordec::Poly<K>> {
  using Real = tensordec::Poly<K>;
  using NonInteger = tensordec::Poly<K>;
  using Literal = tensordec::Poly<K>;
  using Nested = tensordec::Poly<K>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 100,
    MulCost = 1000
  };
  static inline Real epsilon() { return Real(); }
  static inline Real dummy_precision() { return Real(); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

#endif
