#ifndef TENSORDEC_LINALG_HPP
#define TENSORDEC_LINALG_HPP

#include <Eigen/Core>
#include <iostream>
#include <string>
#include <vector>

#include "tensordec/fields.hpp"

namespace tensordec {
inline std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << a.str(); }
inline std::ostream& operator<<(std::ostream& os, const Fq& a) { return os << a.str(); }
inline std::ostream& operator<<(std::ostream& os, const Rat& a) { return os << a.str(); }
}  // namespace tensordec

namespace Eigen {
#define TENSORDEC_NUMTRAITS(T)                                  \
  template <>                                                   \
  struct NumTraits<tensordec::T> {                              \
    using Real = tensordec::T;                                  \
    using NonInteger = tensordec::T;                            \
    using Literal = tensordec::T;                               \
    using Nested = tensordec::T;                                \
    enum {                                                      \
      IsComplex = 0,                                            \
      IsInteger = 0,                                            \
      IsSigned = 1,                                             \
      RequireInitialization = 1,                                \
      ReadCost = 2,                                             \
      AddCost = 10,                                             \
      MulCost = 20                                              \
    };                                                          \
    static inline Real epsilon() { return Real(0); }            \
    static inline Real dummy_precision() { return Real(0); }    \
    static inline int digits10() { return 0; }                  \
  };
TENSORDEC_NUMTRAITS(Fp)
TENSORDEC_NUMTRAITS(Fq)
TENSORDEC_NUMTRAITS(Rat)
#undef TENSORDEC_NUMTRAITS
}  // namespace Eigen

namespace tensordec {

template <class K>
using Mat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class K>
using Vec = Eigen::Matrix<K, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

template <class K>
Mat<K> zero_matrix(typename field_traits<K>::ctx_t ctx, Index r, Index c) {
  Mat<K> m(r, c);
  m.setConstant(field_traits<K>::zero(ctx));
  return m;
}

template <class K>
Vec<K> zero_vector(typename field_traits<K>::ctx_t ctx, Index n) {
  Vec<K> v(n);
  v.setConstant(field_traits<K>::zero(ctx));
  return v;
}

template <class K>
Mat<K> identity_matrix(typename field_traits<K>::ctx_t ctx, Index n) {
  Mat<K> m = zero_matrix<K>(ctx, n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = field_traits<K>::one(ctx);
  return m;
}

namespace detail {
inline bool ctx_equal(uint64_t a, uint64_t b) { return a == b; }
inline bool ctx_equal(const FqCtxPtr& a, const FqCtxPtr& b) {
  return a == b || (a && b && a->p == b->p && a->modulus == b->modulus);
}
inline bool ctx_equal(const rat_ctx&, const rat_ctx&) { return true; }
inline bool ctx_bound(uint64_t p) { return p != 0; }
inline bool ctx_bound(const FqCtxPtr& c) { return c != nullptr; }
inline bool ctx_bound(const rat_ctx&) { return true; }
}  // namespace detail

// All bound entries must belong to one field; returns its descriptor.
template <class K>
typename field_traits<K>::ctx_t uniform_ctx(const Mat<K>& m) {
  typename field_traits<K>::ctx_t ctx{};
  bool found = false;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      auto c = field_traits<K>::ctx_of(m(i, j));
      if (!detail::ctx_bound(c)) continue;
      if (!found) {
        ctx = c;
        found = true;
      } else if (!detail::ctx_equal(ctx, c)) {
        throw domain_error("matrix entries from mixed fields");
      }
    }
  if (!found) throw domain_error("matrix has no bound field entries");
  return ctx;
}

template <class K>
struct RrefResult {
  Mat<K> R;                    // the unique reduced row echelon form
  Index rank = 0;
  std::vector<Index> pivots;   // pivot column per nonzero row
  Mat<K> kernel;               // rows form a basis of the right null space
};

namespace detail {

template <class K>
void kernel_from_rref(const Mat<K>& R, const std::vector<Index>& pivots,
                      typename field_traits<K>::ctx_t ctx, Mat<K>& kernel) {
  Index n = R.cols();
  Index rank = static_cast<Index>(pivots.size());
  std::vector<bool> is_pivot(n, false);
  for (Index c : pivots) is_pivot[c] = true;
  kernel = zero_matrix<K>(ctx, n - rank, n);
  Index kr = 0;
  for (Index f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    kernel(kr, f) = field_traits<K>::one(ctx);
    for (Index r = 0; r < rank; ++r) kernel(kr, pivots[r]) = -R(r, f);
    ++kr;
  }
}

template <class K>
RrefResult<K> rref_generic(Mat<K> R, typename field_traits<K>::ctx_t ctx) {
  Index rows = R.rows(), cols = R.cols();
  RrefResult<K> out;
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index piv = -1;
    for (Index i = r; i < rows; ++i)
      if (!R(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) R.row(r).swap(R.row(piv));
    K inv_p = R(r, c).inv();
    for (Index j = c; j < cols; ++j) R(r, j) = R(r, j) * inv_p;
    for (Index i = 0; i < rows; ++i) {
      if (i == r || R(i, c).is_zero()) continue;
      K f = R(i, c);
      for (Index j = c; j < cols; ++j) R(i, j) = R(i, j) - f * R(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  kernel_from_rref(R, out.pivots, ctx, out.kernel);
  out.R = std::move(R);
  return out;
}

// Fraction-free forward elimination (Bareiss) over Q, then rational
// back-substitution on the r nonzero rows.  Same unique RREF as the generic
// path, with integer intermediates during the cubic part.
inline RrefResult<Rat> rref_bareiss(const Mat<Rat>& M) {
  Index rows = M.rows(), cols = M.cols();
  std::vector<std::vector<bigint>> A(rows, std::vector<bigint>(cols));
  for (Index i = 0; i < rows; ++i) {
    bigint l = 1;
    for (Index j = 0; j < cols; ++j) l = lcm(l, M(i, j).den());
    for (Index j = 0; j < cols; ++j) A[i][j] = M(i, j).num() * (l / M(i, j).den());
  }
  std::vector<Index> pivots;
  bigint prev = 1;
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index piv = -1;
    for (Index i = r; i < rows; ++i)
      if (A[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) std::swap(A[piv], A[r]);
    for (Index i = r + 1; i < rows; ++i) {
      for (Index j = c + 1; j < cols; ++j)
        A[i][j] = (A[i][j] * A[r][c] - A[i][c] * A[r][j]) / prev;
      A[i][c] = 0;
    }
    prev = A[r][c];
    pivots.push_back(c);
    ++r;
  }
  RrefResult<Rat> out;
  out.rank = r;
  out.pivots = pivots;
  out.R = zero_matrix<Rat>(rat_ctx{}, rows, cols);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < cols; ++j) out.R(i, j) = Rat(A[i][j], A[i][pivots[i]]);
  // eliminate above pivots
  for (Index i = r; i-- > 0;)
    for (Index k = 0; k < i; ++k) {
      Rat f = out.R(k, pivots[i]);
      if (f.is_zero()) continue;
      for (Index j = pivots[i]; j < cols; ++j)
        out.R(k, j) = out.R(k, j) - f * out.R(i, j);
    }
  kernel_from_rref(out.R, out.pivots, rat_ctx{}, out.kernel);
  return out;
}

}  // namespace detail

template <class K>
RrefResult<K> rref(const Mat<K>& M, typename field_traits<K>::ctx_t ctx) {
  if (M.size() > 0) uniform_ctx(M);
  if constexpr (std::is_same_v<K, Rat>) {
    (void)ctx;
    return detail::rref_bareiss(M);
  } else {
    return detail::rref_generic<K>(M, ctx);
  }
}

template <class K>
RrefResult<K> rref(const Mat<K>& M) {
  return rref(M, uniform_ctx(M));
}

template <class K>
Index rank_of(const Mat<K>& M) {
  if (M.size() == 0) return 0;
  return rref(M).rank;
}

template <class K>
struct LinSolve {
  bool consistent = false;
  Vec<K> particular;  // one solution of A x = b
  Mat<K> kernel;      // rows span the solution space of A x = 0
};

template <class K>
LinSolve<K> solve_linear(const Mat<K>& A, const Vec<K>& b) {
  if (A.rows() != b.size()) throw domain_error("solve_linear: incompatible dimensions");
  if (A.rows() == 0) throw domain_error("solve_linear: empty system");
  Mat<K> aug(A.rows(), A.cols() + 1);
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) aug(i, j) = A(i, j);
    aug(i, A.cols()) = b[i];
  }
  auto ctx = uniform_ctx(aug);
  RrefResult<K> rr = rref(aug, ctx);
  LinSolve<K> out;
  for (Index c : rr.pivots)
    if (c == A.cols()) return out;  // pivot in the augmented column
  out.consistent = true;
  out.particular = zero_vector<K>(ctx, A.cols());
  for (size_t i = 0; i < rr.pivots.size(); ++i)
    out.particular[rr.pivots[i]] = rr.R(static_cast<Index>(i), A.cols());
  // kernel of A from the same elimination, dropping the augmented column
  std::vector<bool> is_pivot(A.cols(), false);
  for (Index c : rr.pivots) is_pivot[c] = true;
  Index nk = A.cols() - static_cast<Index>(rr.pivots.size());
  out.kernel = zero_matrix<K>(ctx, nk, A.cols());
  Index kr = 0;
  for (Index f = 0; f < A.cols(); ++f) {
    if (is_pivot[f]) continue;
    out.kernel(kr, f) = field_traits<K>::one(ctx);
    for (size_t r = 0; r < rr.pivots.size(); ++r)
      out.kernel(kr, rr.pivots[r]) = -rr.R(static_cast<Index>(r), f);
    ++kr;
  }
  return out;
}

// Determinant over any commutative ring scalar (field elements or polynomials),
// by Laplace expansion with subset memoization.
template <class T>
T det_ring(const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& M,
           const T& one) {
  Index n = M.rows();
  if (n != M.cols()) throw domain_error("det_ring: square matrix required");
  if (n == 0) return one;
  if (n > 20) throw domain_error("det_ring: size too large");
  std::vector<T> dp(size_t(1) << n, one - one);  // zero of the ring
  dp[0] = one;
  for (uint32_t mask = 1; mask < (uint32_t(1) << n); ++mask) {
    int r = __builtin_popcount(mask) - 1;  // expand along the last used row
    T acc = one - one;
    int pos = 0;
    for (int c = 0; c < n; ++c) {
      if (!(mask & (uint32_t(1) << c))) continue;
      T term = M(r, c) * dp[mask ^ (uint32_t(1) << c)];
      if ((r + pos) % 2 == 0)
        acc = acc + term;
      else
        acc = acc - term;
      ++pos;
    }
    dp[mask] = std::move(acc);
  }
  return dp[(size_t(1) << n) - 1];
}

// All k x k minors, row-subsets and column-subsets in lexicographic order.
template <class T>
std::vector<T> minors(const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& M,
                      int k, const T& one) {
  if (k <= 0) throw domain_error("minors: size must be positive");
  if (k > M.rows() || k > M.cols()) throw domain_error("minors: size exceeds matrix dimensions");
  std::vector<int> ri(k), ci(k);
  std::vector<T> out;
  auto next_subset = [](std::vector<int>& s, int n) {
    int k2 = static_cast<int>(s.size());
    int i = k2 - 1;
    while (i >= 0 && s[i] == n - k2 + i) --i;
    if (i < 0) return false;
    ++s[i];
    for (int j = i + 1; j < k2; ++j) s[j] = s[j - 1] + 1;
    return true;
  };
  for (int i = 0; i < k; ++i) ri[i] = i;
  do {
    for (int i = 0; i < k; ++i) ci[i] = i;
    do {
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> sub(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) sub(a, b) = M(ri[a], ci[b]);
      out.push_back(det_ring(sub, one));
    } while (next_subset(ci, static_cast<int>(M.cols())));
  } while (next_subset(ri, static_cast<int>(M.rows())));
  return out;
}

// Projective linear subspace of P^(ambient_dim - 1), stored as a canonical
// (RREF) basis of the underlying linear span.
template <class K>
struct LinearSubspace {
  Index ambient_dim = 0;  // N+1, the number of homogeneous coordinates
  Mat<K> basis;           // rows linearly independent
  std::string tag;

  Index proj_dim() const { return basis.rows() - 1; }
};

// Builds the subspace spanned by the given row span, reduced to canonical form.
template <class K>
LinearSubspace<K> make_subspace(const Mat<K>& span_rows, std::string tag) {
  LinearSubspace<K> H;
  H.ambient_dim = span_rows.cols();
  RrefResult<K> rr = rref(span_rows);
  H.basis = rr.R.topRows(rr.rank);
  H.tag = std::move(tag);
  return H;
}

template <class K>
Mat<K> mat_from_rows(const std::vector<Vec<K>>& rows,
                     typename field_traits<K>::ctx_t ctx, Index cols) {
  Mat<K> m = zero_matrix<K>(ctx, static_cast<Index>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Index>(i)) = rows[i].transpose();
  return m;
}

// First-nonzero-coordinate-is-one normalization of a projective point.
template <class K>
Vec<K> projective_normalize(Vec<K> v) {
  for (Index i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) {
      K inv = v[i].inv();
      for (Index j = i; j < v.size(); ++j) v[j] = v[j] * inv;
      return v;
    }
  throw domain_error("projective_normalize: zero vector");
}

template <class K>
bool vec_equal(const Vec<K>& a, const Vec<K>& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace tensordec

#endif
