#pragma once
// Split bilinear forms in a fixed basis layout, isotropy, complements,
// quadratic forms, and Witt-style hyperbolic basis extraction.
//
// Layout convention for a split space of dimension n with Witt index r:
//   basis = e_1..e_r, f_1..f_r, and for odd n one extra vector z,
//   B(e_i, f_i) = 1, B(f_i, e_i) = +1 (symmetric) or -1 (alternating),
//   B(z, z) = 1, every other pairing of basis vectors is 0.

#include <optional>
#include <vector>

#include "grasmap/field.hpp"
#include "grasmap/subspace.hpp"

namespace grasmap {

enum class FormKind { symmetric, alternating };

template <class K>
struct BilinearSpace {
  FormKind kind = FormKind::symmetric;
  int n = 0;
  int witt = 0;               // floor(n/2)
  Mat<K> gram;                // n x n
  std::vector<std::pair<int, int>> hyperbolic_pairs;
  std::optional<int> anisotropic_index;

  static BilinearSpace standard_split(FormKind kind, int n) {
    require(n >= 1, "form", "empty bilinear space");
    if (kind == FormKind::alternating)
      require(n % 2 == 0, "form", "alternating form needs even dimension");
    if (kind == FormKind::symmetric)
      require(K::characteristic != 2, "form", "symmetric forms need characteristic != 2");
    BilinearSpace s;
    s.kind = kind;
    s.n = n;
    s.witt = n / 2;
    s.gram = Mat<K>(n, n);
    for (int i = 0; i < s.witt; ++i) {
      int e = i, f = s.witt + i;
      s.gram.at(e, f) = K(1);
      s.gram.at(f, e) = (kind == FormKind::symmetric) ? K(1) : K(-1);
      s.hyperbolic_pairs.push_back({e, f});
    }
    if (n % 2 == 1) {
      s.gram.at(n - 1, n - 1) = K(1);
      s.anisotropic_index = n - 1;
    }
    return s;
  }

  // Custom gram (used for transported forms); hyperbolic data left empty.
  static BilinearSpace from_gram(FormKind kind, Mat<K> g) {
    require(g.rows == g.cols, "form", "gram must be square");
    BilinearSpace s;
    s.kind = kind;
    s.n = g.rows;
    s.witt = -1;  // unknown
    s.gram = std::move(g);
    return s;
  }

  K eval(const std::vector<K>& u, const std::vector<K>& v) const {
    auto ug = mat_vec_row(u, gram);
    K r(0);
    for (int j = 0; j < n; ++j) r += ug[size_t(j)] * v[size_t(j)];
    return r;
  }

  bool is_isotropic(const Subspace<K>& s) const {
    require(s.ambient == n, "form", "ambient mismatch");
    Mat<K> m = s.basis * gram * s.basis.transpose();
    return m.is_zero();
  }

  bool pair_orthogonal(const Subspace<K>& a, const Subspace<K>& b) const {
    Mat<K> m = a.basis * gram * b.basis.transpose();
    return m.is_zero();
  }

  Subspace<K> orthogonal_complement(const Subspace<K>& s) const {
    require(s.ambient == n, "form", "ambient mismatch");
    if (s.dim() == 0) return Subspace<K>::full(n);
    return Subspace<K>::from_matrix(n, right_kernel(Mat<K>(s.basis * gram)));
  }

  Subspace<K> radical() const { return Subspace<K>::from_matrix(n, right_kernel(gram)); }

  bool nondegenerate() const { return rank_of(gram) == n; }

  // Span of e_1..e_r (a maximal isotropic subspace in the standard layout).
  Subspace<K> isotropic_half() const {
    require(witt >= 0, "form", "isotropic_half needs standard layout");
    Mat<K> b(witt, n);
    for (int i = 0; i < witt; ++i) b.at(i, i) = K(1);
    return Subspace<K>::from_matrix(n, std::move(b));
  }
  Subspace<K> dual_half() const {
    require(witt >= 0, "form", "dual_half needs standard layout");
    Mat<K> b(witt, n);
    for (int i = 0; i < witt; ++i) b.at(i, witt + i) = K(1);
    return Subspace<K>::from_matrix(n, std::move(b));
  }
};

// Quadratic form q(v) = v G v^T with symmetric gram; polar(u,v) = u G v^T
// (half the full polarization bracket; characteristic != 2 throughout).
template <class K>
struct QuadraticForm {
  Mat<K> gram;

  int dim() const { return gram.rows; }
  K eval(const std::vector<K>& v) const {
    auto vg = mat_vec_row(v, gram);
    K r(0);
    for (size_t j = 0; j < v.size(); ++j) r += vg[j] * v[j];
    return r;
  }
  K polar(const std::vector<K>& u, const std::vector<K>& v) const {
    auto ug = mat_vec_row(u, gram);
    K r(0);
    for (size_t j = 0; j < v.size(); ++j) r += ug[j] * v[j];
    return r;
  }
  bool vanishes_on(const Subspace<K>& s) const {
    Mat<K> m = s.basis * gram * s.basis.transpose();
    return m.is_zero();
  }
  bool is_zero() const { return gram.is_zero(); }
};

template <class K>
struct QuadDecomposition {
  int rank = 0;
  Subspace<K> radical;
  Subspace<K> nondeg_part;  // complement on which the form is nondegenerate
};

template <class K>
QuadDecomposition<K> diagonalize_quadratic(const QuadraticForm<K>& q) {
  require(K::characteristic != 2, "form", "quadratic diagonalization needs characteristic != 2");
  int n = q.gram.rows;
  QuadDecomposition<K> d;
  Mat<K> g = q.gram;
  auto piv = rref_inplace(g);
  d.rank = int(piv.size());
  d.radical = Subspace<K>::from_matrix(n, right_kernel(q.gram));
  Mat<K> nb(d.rank, n);
  for (int i = 0; i < d.rank; ++i) nb.at(i, piv[size_t(i)]) = K(1);
  d.nondeg_part = Subspace<K>::from_matrix(n, std::move(nb));
  return d;
}

namespace detail {

template <class K>
std::optional<K> sqrt_in_field(const K& c) {
  if constexpr (K::is_finite) {
    for (auto x : K::elements())
      if (x * x == c) return x;
    return std::nullopt;
  } else {
    using boost::multiprecision::cpp_int;
    cpp_int num = numerator(c.v), den = denominator(c.v);
    if (num < 0) return std::nullopt;
    cpp_int sn = sqrt(num), sd = sqrt(den);
    if (sn * sn == num && sd * sd == den)
      return K(boost::multiprecision::cpp_rational(sn, sd));
    return std::nullopt;
  }
}

// Search a nonzero isotropic vector for the restriction of `space` to the row
// space of R (basis rows).  Exact for restrictions of rank <= 2 over any
// supported field (basis rows, then each coordinate-pair conic solved via a
// discriminant square root) and complete over finite fields (projective scan).
// Over the rationals with >= 3 rows the fallback is an expanding integer box
// scan: complete for the integer-sheared split forms this library builds, but
// a nullopt there means "none found within budget", not a proof of anisotropy.
template <class K>
std::optional<std::vector<K>> isotropic_vector_in(const BilinearSpace<K>& space, const Mat<K>& R) {
  int k = R.rows;
  if (k == 0) return std::nullopt;
  Mat<K> g = R * space.gram * R.transpose();
  // single basis rows
  for (int i = 0; i < k; ++i)
    if (g.at(i, i).is_zero()) return R.row(i);
  // coordinate pairs: solve a t^2 + 2 b t + d = 0 for c = t r_i + r_j
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      K a = g.at(i, i), b = g.at(i, j), d = g.at(j, j);
      K disc = b * b - a * d;
      auto s = sqrt_in_field(disc);
      if (!s) continue;
      K t = (*s - b) / a;
      std::vector<K> c = R.row(j);
      auto ri = R.row(i);
      for (int x = 0; x < R.cols; ++x) c[size_t(x)] += t * ri[size_t(x)];
      return c;
    }
  auto self = [&](const std::vector<K>& c) {
    auto cg = mat_vec_row(c, g);
    K r(0);
    for (int j = 0; j < k; ++j) r += cg[size_t(j)] * c[size_t(j)];
    return r;
  };
  std::optional<std::vector<K>> found;
  if constexpr (K::is_finite) {
    for_each_projective_vector<K>(k, [&](const std::vector<K>& c) {
      if (found) return;
      if (self(c).is_zero()) found = c;
    });
  } else {
    // expanding-shell integer scan with a global candidate budget
    u64 budget = 3'000'000;
    for (int B = 1; B <= 8 && !found && budget > 0; ++B) {
      u64 base = u64(2 * B + 1);
      u64 total = 1;
      for (int i = 0; i < k && total <= budget; ++i) total *= base;
      if (total > budget) total = budget;
      budget -= total;
      for (u64 t = 1; t < total && !found; ++t) {
        u64 x = t;
        std::vector<K> c(static_cast<size_t>(k));
        bool nonzero = false;
        for (int i = 0; i < k; ++i) {
          int d = int(x % base) - B;
          x /= base;
          c[size_t(i)] = K(d);
          nonzero |= d != 0;
        }
        if (nonzero && self(c).is_zero()) found = c;
      }
    }
  }
  if (!found) return std::nullopt;
  return mat_vec_row(*found, R);
}

}  // namespace detail

// Hyperbolic basis extraction: rows of the returned matrix T are a new basis
// (in the original coordinates) with T G T^T equal to the standard split gram
// of the same kind and dimension.  Fails (nullopt) when the form is not
// isometric to the standard split form.
template <class K>
std::optional<Mat<K>> hyperbolic_basis(const BilinearSpace<K>& space) {
  int n = space.n;
  require(rank_of(space.gram) == n, "form", "hyperbolic basis of a degenerate form");
  std::vector<std::vector<K>> es, fs;
  Mat<K> R = Mat<K>::identity(n);
  auto bil = [&](const std::vector<K>& u, const std::vector<K>& v) { return space.eval(u, v); };
  while (R.rows >= 2) {
    auto e = detail::isotropic_vector_in(space, R);
    if (!e) break;
    // find w in row(R) with B(e, w) != 0
    std::optional<std::vector<K>> w;
    for (int i = 0; i < R.rows && !w; ++i) {
      auto cand = R.row(i);
      if (!bil(*e, cand).is_zero()) w = cand;
    }
    if (!w) return std::nullopt;  // degenerate restriction; should not happen
    K c = bil(*e, *w);
    std::vector<K> f = *w;
    for (auto& x : f) x = x / c;
    if (space.kind == FormKind::symmetric) {
      // make f isotropic: f -= (q(f)/2) e
      K lam = bil(f, f) * K::half();
      for (size_t j = 0; j < f.size(); ++j) f[j] -= lam * (*e)[j];
    }
    es.push_back(*e);
    fs.push_back(f);
    // restrict to the complement of span(e, f)
    auto pair_span = Subspace<K>::span_of(n, {*e, f});
    auto comp = space.orthogonal_complement(pair_span);
    // new working space: comp  intersect  row(R)
    auto rsp = Subspace<K>::from_matrix(n, R);
    auto inter = intersect(comp, rsp);
    R = inter.basis;
  }
  if (R.rows >= 2) return std::nullopt;  // anisotropic plane remains: not split
  if (R.rows == 1) {
    require(space.kind == FormKind::symmetric, "form", "odd alternating dimension");
    auto z = R.row(0);
    K c = bil(z, z);
    if (c.is_zero()) return std::nullopt;
    auto s = detail::sqrt_in_field(c);
    if (!s) return std::nullopt;  // discriminant obstruction
    K si = s->inv();
    for (auto& x : z) x *= si;
    Mat<K> T(n, n);
    int r = int(es.size());
    for (int i = 0; i < r; ++i) T.set_row(i, es[size_t(i)]);
    for (int i = 0; i < r; ++i) T.set_row(r + i, fs[size_t(i)]);
    T.set_row(n - 1, z);
    return T;
  }
  Mat<K> T(n, n);
  int r = int(es.size());
  for (int i = 0; i < r; ++i) T.set_row(i, es[size_t(i)]);
  for (int i = 0; i < r; ++i) T.set_row(r + i, fs[size_t(i)]);
  return T;
}

// As above but also tries unit rescalings of the form (useful when only the
// isotropy locus matters: q and c*q define the same quadric).  Returns (T, c)
// with T (c*G) T^T standard.
template <class K>
std::optional<std::pair<Mat<K>, K>> hyperbolic_basis_up_to_scaling(const BilinearSpace<K>& space) {
  if (auto t = hyperbolic_basis(space)) return std::make_pair(*t, K(1));
  if constexpr (K::is_finite) {
    for (auto c : K::elements()) {
      if (c.is_zero() || c.is_one()) continue;
      BilinearSpace<K> scaled = space;
      scaled.gram = space.gram.scaled(c);
      if (auto t = hyperbolic_basis(scaled)) return std::make_pair(*t, c);
    }
  } else if (space.n % 2 == 1) {
    // scaling by c multiplies the discriminant class by c in odd dimension;
    // the split form has discriminant class (-1)^(n/2), so the only candidate
    // rescaling modulo squares is c = (-1)^(n/2) * det(G)
    K c = det(space.gram);
    if ((space.n / 2) % 2 == 1) c = -c;
    if (!c.is_zero() && !c.is_one()) {
      BilinearSpace<K> scaled = space;
      scaled.gram = space.gram.scaled(c);
      if (auto t = hyperbolic_basis(scaled)) return std::make_pair(*t, c);
    }
  }
  return std::nullopt;
}

// Does matrix F (rows = images of basis vectors) give an isometric embedding
// (source, G_src) -> (target, G_tgt)?
template <class K>
bool is_isometric_embedding(const Mat<K>& f, const Mat<K>& g_src, const Mat<K>& g_tgt) {
  return Mat<K>(f * g_tgt * f.transpose()) == g_src;
}

// Random form-preserving transformations: products of symplectic transvections
// or of pairs of orthogonal reflections; x acts as x -> x * M.
template <class K>
Mat<K> random_isometry(const BilinearSpace<K>& space, Rng& rng, int factors = 6) {
  static_assert(K::is_finite);
  int n = space.n;
  const int p = K::characteristic;
  auto random_vec = [&]() {
    std::vector<K> v(static_cast<size_t>(n));
    for (auto& x : v) x = K(int(rng.below(u64(p))));
    return v;
  };
  Mat<K> M = Mat<K>::identity(n);
  auto apply_factor = [&](const Mat<K>& F) { M = M * F; };
  if (space.kind == FormKind::alternating) {
    for (int t = 0; t < factors; ++t) {
      std::vector<K> v = random_vec();
      bool nz = false;
      for (auto& x : v) nz |= !x.is_zero();
      if (!nz) { --t; continue; }
      K c = K(int(rng.below(u64(p))));
      // t_{v,c}(x) = x + c * B(x,v) v, where B(x,v) = x . (G v^T)
      Mat<K> F = Mat<K>::identity(n);
      std::vector<K> gvt(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        K s(0);
        for (int j = 0; j < n; ++j) s += space.gram.at(i, j) * v[size_t(j)];
        gvt[size_t(i)] = s;
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) F.at(i, j) += c * gvt[size_t(i)] * v[size_t(j)];
      apply_factor(F);
    }
  } else {
    int done = 0;
    while (done < 2 * ((factors + 1) / 2)) {  // even number of reflections
      std::vector<K> v = random_vec();
      K qv = space.eval(v, v);
      if (qv.is_zero()) continue;
      Mat<K> F = Mat<K>::identity(n);
      K inv2 = K(2) / qv;
      std::vector<K> gvt(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        K s(0);
        for (int j = 0; j < n; ++j) s += space.gram.at(i, j) * v[size_t(j)];
        gvt[size_t(i)] = s;
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) F.at(i, j) -= inv2 * gvt[size_t(i)] * v[size_t(j)];
      apply_factor(F);
      ++done;
    }
  }
  return M;
}

template <class K>
Mat<K> random_invertible(int n, Rng& rng) {
  static_assert(K::is_finite);
  const int p = K::characteristic;
  for (;;) {
    Mat<K> m(n, n);
    for (auto& x : m.a) x = K(int(rng.below(u64(p))));
    if (rank_of(m) == n) return m;
  }
}

// Isometric embedding of the standard split odd space V_{2m+1} into the
// standard split even space V_{2m+2}: e_i -> e_i, f_i -> f_i,
// z -> e_{m+1} + (1/2) f_{m+1}.  Returns the (2m+1) x (2m+2) matrix.
template <class K>
Mat<K> odd_to_even_embedding(int odd_n) {
  require(odd_n % 2 == 1, "form", "odd_to_even_embedding needs odd dimension");
  int m = odd_n / 2;
  int N = odd_n + 1;
  Mat<K> F(odd_n, N);
  for (int i = 0; i < m; ++i) F.at(i, i) = K(1);              // e_i
  for (int i = 0; i < m; ++i) F.at(m + i, (m + 1) + i) = K(1);  // f_i
  F.at(2 * m, m) = K(1);                                        // z -> e_{m+1} ...
  F.at(2 * m, N - 1) = K::half();                               //      + (1/2) f_{m+1}
  return F;
}

}  // namespace grasmap
