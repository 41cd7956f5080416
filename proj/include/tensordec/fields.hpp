#ifndef TENSORDEC_FIELDS_HPP
#define TENSORDEC_FIELDS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tensordec/errors.hpp"

namespace tensordec {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;
using Rng = std::mt19937_64;

inline uint64_t rng_below(Rng& rng, uint64_t n) { return n ? rng() % n : 0; }

// ---------------------------------------------------------------------------
// Prime field F_p, word-sized p.
//
// An element with p == 0 is an "unbound" integer literal; it binds to the
// field of the other operand on first contact.  Arithmetic between two
// elements bound to different primes is a domain error.
// ---------------------------------------------------------------------------

class Fp {
 public:
  Fp() : p_(0), v_(0) {}
  Fp(long long v) : p_(0), v_(v) {}  // NOLINT: implicit for Eigen literals
  Fp(uint64_t p, long long v) : p_(p) {
    check_prime_size(p);
    v_ = canon(v, p);
  }
  Fp(uint64_t p, const bigint& v) : p_(p) {
    check_prime_size(p);
    bigint r = v % bigint(p);
    if (r < 0) r += p;
    v_ = static_cast<int64_t>(static_cast<uint64_t>(r));
  }

  uint64_t characteristic() const { return p_; }
  bool bound() const { return p_ != 0; }
  // Canonical representative in 0..p-1 (bound), or the raw literal.
  int64_t value() const { return v_; }

  bool is_zero() const { return v_ == 0; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    auto [p, x, y] = align(a, b);
    if (!p) return Fp(x + y);
    uint64_t s = static_cast<uint64_t>(x) + static_cast<uint64_t>(y);
    if (s >= p) s -= p;
    return from_raw(p, s);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    auto [p, x, y] = align(a, b);
    if (!p) return Fp(x - y);
    uint64_t s = static_cast<uint64_t>(x) + p - static_cast<uint64_t>(y);
    if (s >= p) s -= p;
    return from_raw(p, s);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    auto [p, x, y] = align(a, b);
    if (!p) return Fp(x * y);
    return from_raw(p, (static_cast<uint64_t>(x) * static_cast<uint64_t>(y)) % p);
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }
  Fp operator-() const {
    if (!p_) return Fp(-v_);
    return from_raw(p_, v_ ? p_ - static_cast<uint64_t>(v_) : 0);
  }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  friend bool operator==(const Fp& a, const Fp& b) {
    auto [p, x, y] = align(a, b);
    (void)p;
    return x == y;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  Fp inv() const {
    if (!p_) {
      if (v_ == 1) return Fp(1);
      if (v_ == -1) return Fp(-1);
      throw domain_error("Fp: inverse of unbound literal");
    }
    if (v_ == 0) throw domain_error("Fp: division by zero");
    // extended Euclid
    int64_t t = 0, nt = 1;
    int64_t r = static_cast<int64_t>(p_), nr = v_;
    while (nr != 0) {
      int64_t q = r / nr;
      t -= q * nt;
      std::swap(t, nt);
      r -= q * nr;
      std::swap(r, nr);
    }
    if (t < 0) t += static_cast<int64_t>(p_);
    return from_raw(p_, static_cast<uint64_t>(t));
  }

  Fp pow(uint64_t e) const {
    Fp r = p_ ? from_raw(p_, 1 % p_) : Fp(1);
    Fp b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  std::string str() const { return std::to_string(v_); }

  static Fp from_raw(uint64_t p, uint64_t v) {
    Fp r;
    r.p_ = p;
    r.v_ = static_cast<int64_t>(v);
    return r;
  }

 private:
  static void check_prime_size(uint64_t p) {
    if (p == 0 || p >= (uint64_t(1) << 31))
      throw domain_error("Fp: characteristic must be a positive prime < 2^31");
  }
  static int64_t canon(long long v, uint64_t p) {
    int64_t r = static_cast<int64_t>(v % static_cast<long long>(p));
    if (r < 0) r += static_cast<int64_t>(p);
    return r;
  }
  // Returns (p, x, y) with both values canonical in the common field.
  static std::tuple<uint64_t, int64_t, int64_t> align(const Fp& a, const Fp& b) {
    if (a.p_ && b.p_) {
      if (a.p_ != b.p_) throw domain_error("Fp: mixed characteristics");
      return {a.p_, a.v_, b.v_};
    }
    uint64_t p = a.p_ ? a.p_ : b.p_;
    if (!p) return {0, a.v_, b.v_};
    return {p, a.p_ ? a.v_ : canon(a.v_, p), b.p_ ? b.v_ : canon(b.v_, p)};
  }

  uint64_t p_;
  int64_t v_;
};

// Tonelli-Shanks square root mod p; empty when not a square.
inline std::optional<Fp> sqrt_mod(const Fp& a) {
  uint64_t p = a.characteristic();
  if (!p) throw domain_error("sqrt_mod: unbound element");
  if (a.is_zero()) return Fp::from_raw(p, 0);
  if (p == 2) return a;
  if (a.pow((p - 1) / 2) != Fp::from_raw(p, 1)) return std::nullopt;
  if (p % 4 == 3) return a.pow((p + 1) / 4);
  // write p-1 = q 2^s with q odd
  uint64_t q = p - 1, s = 0;
  while (q % 2 == 0) { q /= 2; ++s; }
  Fp z = Fp::from_raw(p, 2);
  while (z.pow((p - 1) / 2) == Fp::from_raw(p, 1)) z += Fp(1);
  Fp m = Fp::from_raw(p, 0);
  uint64_t mm = s;
  Fp c = z.pow(q);
  Fp t = a.pow(q);
  Fp r = a.pow((q + 1) / 2);
  (void)m;
  while (t != Fp::from_raw(p, 1)) {
    uint64_t i = 0;
    Fp tt = t;
    while (tt != Fp::from_raw(p, 1)) { tt *= tt; ++i; }
    Fp b = c;
    for (uint64_t j = 0; j + i + 1 < mm; ++j) b *= b;
    mm = i;
    c = b * b;
    t *= c;
    r *= b;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Dense univariate arithmetic over F_p, used to build extension fields and to
// factor eliminants.  Coefficient vectors are low-to-high, trimmed.
// ---------------------------------------------------------------------------
namespace fppoly {

using PV = std::vector<uint64_t>;  // coefficients mod p, low to high

inline void trim(PV& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
inline int deg(const PV& f) { return static_cast<int>(f.size()) - 1; }

inline PV add(const PV& a, const PV& b, uint64_t p) {
  PV r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    uint64_t s = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    r[i] = s >= p ? s - p : s;
  }
  trim(r);
  return r;
}
inline PV sub(const PV& a, const PV& b, uint64_t p) {
  PV r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    uint64_t s = (i < a.size() ? a[i] : 0) + p - (i < b.size() ? b[i] : 0);
    r[i] = s >= p ? s - p : s;
  }
  trim(r);
  return r;
}
inline PV mul(const PV& a, const PV& b, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PV r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}
inline PV scale(const PV& a, uint64_t c, uint64_t p) {
  PV r = a;
  for (auto& x : r) x = x * c % p;
  trim(r);
  return r;
}

inline uint64_t inv_mod(uint64_t a, uint64_t p) {
  return static_cast<uint64_t>(Fp::from_raw(p, a).inv().value());
}

// Division with remainder; g must be nonzero.
inline std::pair<PV, PV> divmod(PV f, const PV& g, uint64_t p) {
  trim(f);
  if (g.empty()) throw domain_error("fppoly: division by zero polynomial");
  if (f.size() < g.size()) return {{}, f};
  uint64_t lg = inv_mod(g.back(), p);
  PV q(f.size() - g.size() + 1, 0);
  for (size_t off = q.size(); off-- > 0;) {
    uint64_t c = f[off + g.size() - 1] * lg % p;
    if (!c) continue;
    q[off] = c;
    for (size_t i = 0; i < g.size(); ++i) {
      uint64_t s = f[off + i] + p - c * g[i] % p;
      f[off + i] = s >= p ? s - p : s;
    }
  }
  f.resize(g.size() - 1);
  trim(f);
  trim(q);
  return {q, f};
}

inline PV mod(const PV& f, const PV& g, uint64_t p) { return divmod(f, g, p).second; }

inline PV monic(PV f, uint64_t p) {
  trim(f);
  if (f.empty()) return f;
  return scale(f, inv_mod(f.back(), p), p);
}

inline PV gcd(PV a, PV b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PV r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

inline PV derivative(const PV& f, uint64_t p) {
  if (f.size() <= 1) return {};
  PV r(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) r[i - 1] = f[i] * (i % p) % p;
  trim(r);
  return r;
}

inline PV powmod(PV base, bigint e, const PV& m, uint64_t p) {
  PV r = {1};
  base = mod(base, m, p);
  while (e > 0) {
    if ((e & 1) != 0) r = mod(mul(r, base, p), m, p);
    base = mod(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

// Extended Euclid: returns (g, s) with s*a = g mod m, g = gcd(a, m) monic.
inline std::pair<PV, PV> half_xgcd(PV a, PV m, uint64_t p) {
  PV s0 = {1}, s1 = {};
  PV r0 = std::move(a), r1 = std::move(m);
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, p);
    PV s2 = sub(s0, mul(q, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.empty()) return {r0, s0};
  uint64_t c = inv_mod(r0.back(), p);
  return {scale(r0, c, p), scale(s0, c, p)};
}

inline bool is_irreducible(const PV& f, uint64_t p) {
  int k = deg(f);
  if (k < 1) return false;
  if (k == 1) return true;
  PV x = {0, 1};
  // x^(p^k) == x mod f
  PV xp = x;
  for (int i = 0; i < k; ++i) xp = powmod(xp, bigint(p), f, p);
  if (!sub(xp, x, p).empty()) return false;
  // gcd(x^(p^(k/q)) - x, f) == 1 for every prime divisor q of k
  std::vector<int> primes;
  int kk = k;
  for (int q = 2; q * q <= kk; ++q)
    if (kk % q == 0) {
      primes.push_back(q);
      while (kk % q == 0) kk /= q;
    }
  if (kk > 1) primes.push_back(kk);
  for (int q : primes) {
    PV xe = x;
    for (int i = 0; i < k / q; ++i) xe = powmod(xe, bigint(p), f, p);
    if (deg(gcd(sub(xe, x, p), f, p)) != 0) return false;
  }
  return true;
}

}  // namespace fppoly

// ---------------------------------------------------------------------------
// Extension field F_{p^k} = F_p[g]/(modulus), modulus monic irreducible.
// ---------------------------------------------------------------------------

struct FqCtx {
  uint64_t p = 0;
  uint32_t k = 1;
  fppoly::PV modulus;  // monic, degree k, low-to-high including leading 1
  uint64_t seed = 0;   // seed used to draw the modulus (0 when fixed)

  bigint order() const {
    bigint q = 1;
    for (uint32_t i = 0; i < k; ++i) q *= p;
    return q;
  }

  static std::shared_ptr<const FqCtx> prime(uint64_t p) {
    auto c = std::make_shared<FqCtx>();
    c->p = p;
    c->k = 1;
    c->modulus = {0, 1};
    return c;
  }

  static std::shared_ptr<const FqCtx> from_modulus(uint64_t p, fppoly::PV monic_mod) {
    fppoly::trim(monic_mod);
    if (monic_mod.size() < 2 || monic_mod.back() != 1)
      throw domain_error("FqCtx: modulus must be monic of degree >= 1");
    if (!fppoly::is_irreducible(monic_mod, p))
      throw domain_error("FqCtx: modulus is reducible");
    auto c = std::make_shared<FqCtx>();
    c->p = p;
    c->k = static_cast<uint32_t>(monic_mod.size() - 1);
    c->modulus = std::move(monic_mod);
    return c;
  }

  // Random monic irreducible modulus of degree k, drawn from the given seed.
  static std::shared_ptr<const FqCtx> make(uint64_t p, uint32_t k, uint64_t seed) {
    if (k == 0) throw domain_error("FqCtx: extension degree must be positive");
    if (k == 1) {
      auto c = prime(p);
      return c;
    }
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int tries = 0; tries < 4000; ++tries) {
      fppoly::PV f(k + 1, 0);
      f[k] = 1;
      for (uint32_t i = 0; i < k; ++i) f[i] = rng_below(rng, p);
      if (fppoly::is_irreducible(f, p)) {
        auto c = std::make_shared<FqCtx>();
        c->p = p;
        c->k = k;
        c->modulus = std::move(f);
        c->seed = seed;
        return c;
      }
    }
    throw domain_error("FqCtx: failed to sample irreducible modulus");
  }
};

using FqCtxPtr = std::shared_ptr<const FqCtx>;

class Fq {
 public:
  Fq() : v_{0} {}
  Fq(long long v) : v_{} { lit_ = v; }  // NOLINT: implicit literal
  Fq(FqCtxPtr ctx, fppoly::PV coeffs) : ctx_(std::move(ctx)) {
    fppoly::trim(coeffs);
    v_ = fppoly::mod(coeffs, ctx_->modulus, ctx_->p);
  }
  Fq(FqCtxPtr ctx, const Fp& a) : ctx_(std::move(ctx)) {
    if (a.characteristic() && a.characteristic() != ctx_->p)
      throw domain_error("Fq: embedding from wrong prime field");
    uint64_t r = static_cast<uint64_t>(((a.value() % int64_t(ctx_->p)) + int64_t(ctx_->p)) % int64_t(ctx_->p));
    if (r) v_ = {r};
  }

  const FqCtxPtr& ctx() const { return ctx_; }
  bool bound() const { return ctx_ != nullptr; }
  bool is_zero() const { return ctx_ ? v_.empty() : lit_ == 0; }
  // Canonical coefficients, low to high, length <= k, trimmed.
  const fppoly::PV& coeffs() const { return v_; }

  // Constant-term view; only valid when the element lies in the prime field.
  Fp as_prime() const {
    if (!ctx_) return Fp(lit_);
    if (v_.size() > 1) throw domain_error("Fq: element not in prime field");
    return Fp::from_raw(ctx_->p, v_.empty() ? 0 : v_[0]);
  }
  bool in_prime_field() const { return !ctx_ || v_.size() <= 1; }

  friend Fq operator+(const Fq& a, const Fq& b) {
    auto [c, x, y] = align(a, b);
    if (!c) return Fq(a.lit_ + b.lit_);
    return from_raw(c, fppoly::add(x, y, c->p));
  }
  friend Fq operator-(const Fq& a, const Fq& b) {
    auto [c, x, y] = align(a, b);
    if (!c) return Fq(a.lit_ - b.lit_);
    return from_raw(c, fppoly::sub(x, y, c->p));
  }
  friend Fq operator*(const Fq& a, const Fq& b) {
    auto [c, x, y] = align(a, b);
    if (!c) return Fq(a.lit_ * b.lit_);
    return from_raw(c, fppoly::mod(fppoly::mul(x, y, c->p), c->modulus, c->p));
  }
  friend Fq operator/(const Fq& a, const Fq& b) { return a * b.inv(); }
  Fq operator-() const {
    if (!ctx_) return Fq(-lit_);
    return from_raw(ctx_, fppoly::sub({}, v_, ctx_->p));
  }
  Fq& operator+=(const Fq& o) { return *this = *this + o; }
  Fq& operator-=(const Fq& o) { return *this = *this - o; }
  Fq& operator*=(const Fq& o) { return *this = *this * o; }
  Fq& operator/=(const Fq& o) { return *this = *this / o; }

  friend bool operator==(const Fq& a, const Fq& b) {
    auto [c, x, y] = align(a, b);
    if (!c) return a.lit_ == b.lit_;
    return x == y;
  }
  friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }

  Fq inv() const {
    if (!ctx_) {
      if (lit_ == 1 || lit_ == -1) return *this;
      throw domain_error("Fq: inverse of unbound literal");
    }
    if (v_.empty()) throw domain_error("Fq: division by zero");
    auto [g, s] = fppoly::half_xgcd(v_, ctx_->modulus, ctx_->p);
    if (fppoly::deg(g) != 0) throw domain_error("Fq: non-invertible element");
    uint64_t c = fppoly::inv_mod(g[0], ctx_->p);
    return from_raw(ctx_, fppoly::scale(s, c, ctx_->p));
  }

  Fq pow(bigint e) const {
    if (e < 0) return inv().pow(-e);
    Fq r(1);
    Fq b = *this;
    while (e > 0) {
      if ((e & 1) != 0) r *= b;
      b *= b;
      e >>= 1;
    }
    if (!r.bound() && bound()) r = Fq(ctx_, fppoly::PV{1});
    return r;
  }

  Fq frobenius() const {
    if (!ctx_) return *this;
    return pow(bigint(ctx_->p));
  }

  std::string str() const {
    if (!ctx_) return std::to_string(lit_);
    if (v_.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < v_.size(); ++i) {
      if (!v_[i]) continue;
      if (!s.empty()) s += "+";
      if (i == 0) {
        s += std::to_string(v_[0]);
      } else {
        if (v_[i] != 1) s += std::to_string(v_[i]) + "*";
        s += "g";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

  static Fq from_raw(FqCtxPtr ctx, fppoly::PV canonical) {
    Fq r;
    r.ctx_ = std::move(ctx);
    r.v_ = std::move(canonical);
    return r;
  }

  // The class of g (the adjoined root).
  static Fq generator(const FqCtxPtr& ctx) {
    if (ctx->k < 2) throw domain_error("Fq: prime field has no generator element");
    return from_raw(ctx, fppoly::PV{0, 1});
  }

 private:
  static std::tuple<FqCtxPtr, fppoly::PV, fppoly::PV> align(const Fq& a, const Fq& b) {
    if (a.ctx_ && b.ctx_) {
      if (a.ctx_ != b.ctx_ && (a.ctx_->p != b.ctx_->p || a.ctx_->modulus != b.ctx_->modulus))
        throw domain_error("Fq: mixed extension fields");
      return {a.ctx_, a.v_, b.v_};
    }
    FqCtxPtr c = a.ctx_ ? a.ctx_ : b.ctx_;
    if (!c) return {nullptr, {}, {}};
    auto bind = [&](const Fq& x) -> fppoly::PV {
      if (x.ctx_) return x.v_;
      int64_t r = ((x.lit_ % int64_t(c->p)) + int64_t(c->p)) % int64_t(c->p);
      return r ? fppoly::PV{static_cast<uint64_t>(r)} : fppoly::PV{};
    };
    return {c, bind(a), bind(b)};
  }

  FqCtxPtr ctx_;
  fppoly::PV v_;
  int64_t lit_ = 0;  // literal value when ctx_ == nullptr
};

// ---------------------------------------------------------------------------
// Rationals with arbitrary-precision integer parts.  boost::cpp_rational keeps
// fractions reduced with positive denominator, which is exactly the canonical
// form required here.
// ---------------------------------------------------------------------------

class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long long v) : v_(v) {}  // NOLINT
  explicit Rat(bigrat v) : v_(std::move(v)) {}
  Rat(const bigint& num, const bigint& den) {
    if (den == 0) throw domain_error("Rat: zero denominator");
    v_ = den < 0 ? bigrat(-num, -den) : bigrat(num, den);
  }

  const bigrat& value() const { return v_; }
  bigint num() const { return numerator(v_); }
  bigint den() const { return denominator(v_); }
  bool is_zero() const { return v_ == 0; }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.v_ + b.v_); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.v_ - b.v_); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.v_ * b.v_); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw domain_error("Rat: division by zero");
    return Rat(a.v_ / b.v_);
  }
  Rat operator-() const { return Rat(-v_); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }

  Rat inv() const {
    if (is_zero()) throw domain_error("Rat: division by zero");
    return Rat(bigrat(1) / v_);
  }

  Rat pow(uint64_t e) const {
    Rat r(1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  std::string str() const {
    bigint n = num(), d = den();
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
  }

 private:
  bigrat v_;
};

// ---------------------------------------------------------------------------
// field_traits: the uniform interface generic code programs against.
// ---------------------------------------------------------------------------

struct rat_ctx {};  // rationals need no runtime descriptor
inline bool operator==(const rat_ctx&, const rat_ctx&) { return true; }

template <class K>
struct field_traits;

template <>
struct field_traits<Fp> {
  using ctx_t = uint64_t;  // the prime
  static Fp zero(ctx_t p) { return Fp::from_raw(p, 0); }
  static Fp one(ctx_t p) { return Fp::from_raw(p, 1 % p); }
  static Fp from_int(ctx_t p, long long v) { return Fp(p, v); }
  static Fp from_bigint(ctx_t p, const bigint& v) { return Fp(p, v); }
  static ctx_t ctx_of(const Fp& a) { return a.characteristic(); }
  static uint64_t characteristic(ctx_t p) { return p; }
  static Fp random(ctx_t p, Rng& rng) { return Fp::from_raw(p, rng_below(rng, p)); }
  static std::string to_string(const Fp& a) { return a.str(); }
  static std::string name(ctx_t p) { return "GF(" + std::to_string(p) + ")"; }
};

template <>
struct field_traits<Fq> {
  using ctx_t = FqCtxPtr;
  static Fq zero(const ctx_t& c) { return Fq::from_raw(c, {}); }
  static Fq one(const ctx_t& c) { return Fq::from_raw(c, {1}); }
  static Fq from_int(const ctx_t& c, long long v) { return Fq(c, Fp(c->p, v)); }
  static Fq from_bigint(const ctx_t& c, const bigint& v) { return Fq(c, Fp(c->p, v)); }
  static ctx_t ctx_of(const Fq& a) { return a.ctx(); }
  static uint64_t characteristic(const ctx_t& c) { return c->p; }
  static Fq random(const ctx_t& c, Rng& rng) {
    fppoly::PV v(c->k);
    for (auto& x : v) x = rng_below(rng, c->p);
    fppoly::trim(v);
    return Fq::from_raw(c, std::move(v));
  }
  static std::string to_string(const Fq& a) { return a.str(); }
  static std::string name(const ctx_t& c) {
    return "GF(" + std::to_string(c->p) + "^" + std::to_string(c->k) + ")";
  }
};

template <>
struct field_traits<Rat> {
  using ctx_t = rat_ctx;
  static Rat zero(ctx_t) { return Rat(0); }
  static Rat one(ctx_t) { return Rat(1); }
  static Rat from_int(ctx_t, long long v) { return Rat(v); }
  static Rat from_bigint(ctx_t, const bigint& v) { return Rat(bigrat(v)); }
  static ctx_t ctx_of(const Rat&) { return {}; }
  static uint64_t characteristic(ctx_t) { return 0; }
  static Rat random(ctx_t, Rng& rng) {
    // small rationals keep generated instances readable and growth bounded
    int64_t num = static_cast<int64_t>(rng_below(rng, 41)) - 20;
    int64_t den = static_cast<int64_t>(rng_below(rng, 9)) + 1;
    return Rat(bigint(num), bigint(den));
  }
  static std::string to_string(const Rat& a) { return a.str(); }
  static std::string name(ctx_t) { return "QQ"; }
};

template <class K>
K zero_like(const K& a) {
  return field_traits<K>::zero(field_traits<K>::ctx_of(a));
}
template <class K>
K one_like(const K& a) {
  return field_traits<K>::one(field_traits<K>::ctx_of(a));
}

// n! / (n-k)! as an exact integer
inline bigint falling_factorial(long n, long k) {
  bigint r = 1;
  for (long i = 0; i < k; ++i) r *= (n - i);
  return r;
}

// deterministic Miller-Rabin, sufficient for the word-sized range used here
inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  uint64_t d = n - 1, s = 0;
  while (d % 2 == 0) { d /= 2; ++s; }
  auto powmod = [&](uint64_t b, uint64_t e) {
    unsigned __int128 r = 1, base = b % n;
    while (e) {
      if (e & 1) r = r * base % n;
      base = base * base % n;
      e >>= 1;
    }
    return static_cast<uint64_t>(r);
  };
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    uint64_t x = powmod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (uint64_t i = 1; i < s; ++i) {
      x = powmod(x, 2);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline bigint binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  bigint r = 1;
  for (long i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

}  // namespace tensordec

#endif
