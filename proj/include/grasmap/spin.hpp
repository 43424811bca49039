#pragma once
// Exterior-algebra model of spin modules for split even orthogonal spaces:
// Clifford action, pure spinors, half-spin parts, the canonical bilinear form
// on spinors with computed symmetry type, spinor pencil lines, and the
// odd-even isomorphism of maximal isotropic grassmannians.

#include <algorithm>
#include <vector>

#include "grasmap/grassmannian.hpp"

namespace grasmap {

// Basis of the module: x_S for subsets S of {0..m-1}, indexed by bitmask.
// The first half e_1..e_m of the split space acts by exterior multiplication,
// the dual half f_1..f_m by twice the contraction, so that
// action(v) action(w) + action(w) action(v) = 2 gram(v,w) id.
template <class K>
struct SpinModule {
  int m = 0;
  int dim = 0;  // 2^m
  BilinearSpace<K> space;                      // split symmetric V_{2m}
  std::vector<std::vector<int>> parity_masks;  // [parity] -> subset masks, ascending
  std::vector<int> half_index;                 // mask -> position within its parity class

  int half_dim() const { return dim / 2; }

  Subspace<K> even_part() const { return coordinate_part(0); }
  Subspace<K> odd_part() const { return coordinate_part(1); }

  Subspace<K> coordinate_part(int parity) const {
    Mat<K> b(int(parity_masks[size_t(parity)].size()), dim);
    for (size_t i = 0; i < parity_masks[size_t(parity)].size(); ++i)
      b.at(int(i), parity_masks[size_t(parity)][i]) = K(1);
    return Subspace<K>::from_matrix(dim, std::move(b));
  }
};

template <class K>
SpinModule<K> make_spin_module(int m) {
  require(m >= 1, "spin", "spin module needs m >= 1");
  require(m <= 20, "spin", "spin module too large");
  SpinModule<K> sm;
  sm.m = m;
  sm.dim = 1 << m;
  sm.space = BilinearSpace<K>::standard_split(FormKind::symmetric, 2 * m);
  sm.parity_masks.assign(2, {});
  sm.half_index.assign(size_t(sm.dim), 0);
  for (int mask = 0; mask < sm.dim; ++mask) {
    int p = __builtin_popcount(unsigned(mask)) & 1;
    sm.half_index[size_t(mask)] = int(sm.parity_masks[size_t(p)].size());
    sm.parity_masks[size_t(p)].push_back(mask);
  }
  return sm;
}

namespace detail {

inline int wedge_sign(int i, int mask) {
  // (-1)^{#{j in mask : j < i}}
  return __builtin_popcount(unsigned(mask & ((1 << i) - 1))) % 2 == 0 ? 1 : -1;
}

}  // namespace detail

// Matrix of the Clifford action of v (length 2m) in the row convention:
// (v . x_S) = sum_T A[S][T] x_T, applied to spinors as s_row * A.
template <class K>
Mat<K> clifford_action(const SpinModule<K>& sm, const std::vector<K>& v) {
  require(int(v.size()) == 2 * sm.m, "spin", "vector length mismatch");
  Mat<K> a(sm.dim, sm.dim);
  for (int mask = 0; mask < sm.dim; ++mask)
    for (int i = 0; i < sm.m; ++i) {
      int bit = 1 << i;
      K sign = detail::wedge_sign(i, mask) > 0 ? K(1) : K(-1);
      if (!(mask & bit)) {
        // e_i: exterior multiplication
        if (!v[size_t(i)].is_zero()) a.at(mask, mask | bit) += v[size_t(i)] * sign;
      } else {
        // f_i: twice the contraction (same sign count with i removed first)
        if (!v[size_t(sm.m + i)].is_zero())
          a.at(mask, mask & ~bit) += v[size_t(sm.m + i)] * K(2) * sign;
      }
    }
  return a;
}

template <class K>
std::vector<K> clifford_apply(const SpinModule<K>& sm, const std::vector<K>& v,
                              const std::vector<K>& s) {
  return mat_vec_row(s, clifford_action(sm, v));
}

// Component of a maximal isotropic subspace: 0 is the component of e_1..e_m.
template <class K>
int component_of(const SpinModule<K>& sm, const Subspace<K>& w) {
  return spinor_component(sm.space, w);
}

// The pure spinor of a maximal isotropic W: the unique-up-to-scalar joint
// kernel vector of the Clifford operators of a basis of W.  Its support lies
// in subsets of one size parity, matching component_of(W).
template <class K>
ProjectiveVector<K> pure_spinor(const SpinModule<K>& sm, const Subspace<K>& w) {
  require(w.ambient == 2 * sm.m, "spin", "ambient mismatch");
  Mat<K> rows = Mat<K>::identity(sm.dim);
  for (int i = 0; i < w.dim(); ++i) {
    Mat<K> act = clifford_action(sm, w.basis.row(i));
    Mat<K> ker = left_kernel(Mat<K>(rows * act));
    rows = ker * rows;
    require(rows.rows > 0, "spin", "joint Clifford kernel vanished: input not isotropic");
  }
  require(rows.rows == 1, "spin",
          "joint Clifford kernel is not a line: input not maximal isotropic");
  return ProjectiveVector<K>::of(rows.row(0));
}

// Coordinates of a big-space spinor inside the parity-class half it lives in.
template <class K>
std::vector<K> half_coords(const SpinModule<K>& sm, const std::vector<K>& s, int parity) {
  std::vector<K> out;
  out.reserve(size_t(sm.half_dim()));
  for (int mask : sm.parity_masks[size_t(parity)]) out.push_back(s[size_t(mask)]);
  for (int mask : sm.parity_masks[size_t(1 - parity)])
    require(s[size_t(mask)].is_zero(), "spin", "spinor is not supported on a single half");
  return out;
}

// Parity of the subset sizes supporting spinors of the given component.
inline int support_parity(int m, int component) { return (m - component) & 1; }

// The spinor line of an isotropic U of dimension m-2: the span of the pure
// spinors of the pencil of maximal isotropic spaces over U in one component,
// as a 2-dimensional subspace of the half-spin space.
template <class K>
Subspace<K> spinor_line(const SpinModule<K>& sm, const Subspace<K>& u, int component) {
  static_assert(K::is_finite, "spinor pencils are enumerated over finite fields");
  require(K::characteristic >= 3, "spin", "spinor lines need q >= 3");
  require(u.ambient == 2 * sm.m && u.dim() == sm.m - 2, "spin",
          "spinor line input must be isotropic of dimension m-2");
  require(sm.space.is_isotropic(u), "spin", "spinor line input must be isotropic");
  int parity = support_parity(sm.m, component);
  std::vector<std::vector<K>> collected;
  for (const auto& w : detail::isotropic_extensions(sm.space, u, sm.m)) {
    if (component_of(sm, w) != component) continue;
    auto s = pure_spinor(sm, w);
    collected.push_back(half_coords(sm, s.coords, parity));
  }
  require(int(collected.size()) == K::characteristic + 1, "spin",
          "pencil size is not q+1: internal inconsistency");
  Mat<K> stack(int(collected.size()), sm.half_dim());
  for (size_t i = 0; i < collected.size(); ++i) stack.set_row(int(i), collected[i]);
  auto span = Subspace<K>::from_matrix(sm.half_dim(), std::move(stack));
  require(span.dim() == 2, "spin", "spinor pencil span is not a projective line");
  return span;
}

// ---- canonical bilinear form on spinors ----

enum class SpinFormTag { symmetric, alternating, cross_pairing };

inline const char* spin_form_tag_name(SpinFormTag t) {
  switch (t) {
    case SpinFormTag::symmetric: return "symmetric";
    case SpinFormTag::alternating: return "alternating";
    case SpinFormTag::cross_pairing: return "cross-pairing";
  }
  fail("spin", "bad tag");
}

template <class K>
struct SpinForm {
  int m = 0;
  int half = 0;              // row parity class
  SpinFormTag tag = SpinFormTag::symmetric;
  SpinFormTag full_tag = SpinFormTag::symmetric;  // symmetry of the big-space form
  Mat<K> gram;               // half x half (tag != cross) or half x other-half
  Mat<K> big_gram;           // 2^m x 2^m form on the whole module
};

// beta(x_S, x_T) = top coefficient of alpha(x_S) wedge x_T, where alpha acts
// on degree k by (-1)^{k(k-1)/2}; nonzero only for T = complement(S).
template <class K>
Mat<K> spin_big_gram(const SpinModule<K>& sm) {
  Mat<K> b(sm.dim, sm.dim);
  int full = sm.dim - 1;
  for (int s = 0; s < sm.dim; ++s) {
    int t = full & ~s;
    int k = __builtin_popcount(unsigned(s));
    int alpha = (k * (k - 1) / 2) % 2 == 0 ? 1 : -1;
    // shuffle sign of x_S wedge x_{S^c} relative to x_{full}
    int inv = 0;
    for (int i = 0; i < sm.m; ++i)
      if (s & (1 << i)) inv += __builtin_popcount(unsigned(t & ((1 << i) - 1)));
    int shuffle = inv % 2 == 0 ? 1 : -1;
    b.at(s, t) = K(alpha * shuffle);
  }
  return b;
}

template <class K>
SpinForm<K> spin_form(const SpinModule<K>& sm, int half) {
  require(half == 0 || half == 1, "spin", "half must be 0 or 1");
  SpinForm<K> f;
  f.m = sm.m;
  f.half = half;
  f.big_gram = spin_big_gram(sm);
  Mat<K> bt = f.big_gram.transpose();
  if (f.big_gram == bt)
    f.full_tag = SpinFormTag::symmetric;
  else if (Mat<K>(f.big_gram + bt).is_zero())
    f.full_tag = SpinFormTag::alternating;
  else
    fail("spin", "big spinor form is neither symmetric nor alternating");

  const auto& rm = sm.parity_masks[size_t(half)];
  int h = sm.half_dim();
  Mat<K> restr(h, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) restr.at(i, j) = f.big_gram.at(rm[size_t(i)], rm[size_t(j)]);
  if (!restr.is_zero()) {
    f.gram = std::move(restr);
    require(rank_of(f.gram) == h, "spin", "half-spin form is degenerate");
    Mat<K> gt = f.gram.transpose();
    if (f.gram == gt)
      f.tag = SpinFormTag::symmetric;
    else if (Mat<K>(f.gram + gt).is_zero())
      f.tag = SpinFormTag::alternating;
    else
      fail("spin", "half-spin form is neither symmetric nor alternating");
    return f;
  }
  // restriction vanishes: the invariant pairing couples the two halves
  const auto& cm = sm.parity_masks[size_t(1 - half)];
  Mat<K> cross(h, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) cross.at(i, j) = f.big_gram.at(rm[size_t(i)], cm[size_t(j)]);
  require(rank_of(cross) == h, "spin", "cross pairing is degenerate");
  f.gram = std::move(cross);
  f.tag = SpinFormTag::cross_pairing;
  return f;
}

// The global sign sigma with beta(v.s, t) = sigma beta(s, v.t) for all basis
// vectors v of V_{2m}, i.e. A_j B = sigma B A_j^T for every Clifford action
// matrix A_j.  Errors when no single sign works.
template <class K>
int spin_invariance_sign(const SpinModule<K>& sm) {
  Mat<K> b = spin_big_gram(sm);
  for (int sigma : {1, -1}) {
    bool ok = true;
    for (int j = 0; j < 2 * sm.m && ok; ++j) {
      std::vector<K> v(size_t(2 * sm.m));
      v[size_t(j)] = K(1);
      Mat<K> a = clifford_action(sm, v);
      Mat<K> lhs = a * b;
      Mat<K> rhs = Mat<K>(b * a.transpose()).scaled(K(sigma));
      ok = lhs == rhs;
    }
    if (ok) return sigma;
  }
  fail("spin", "no single invariance sign works for the spinor form");
}

// ---- odd-even isomorphism ----

// Explicit isomorphism between the maximal isotropic grassmannians of the
// split odd space V_{2m-1} and one component of the split even space V_{2m}.
template <class K>
struct OddEvenSpinorIso {
  int m = 0;  // even-side witt index
  int component = 0;
  Mat<K> embed;  // (2m-1) x (2m) isometric embedding of the odd space
  GrassmannianDesc<K> odd_desc, even_desc;
};

template <class K>
OddEvenSpinorIso<K> make_odd_even_iso(int m, int component = 0) {
  require(m >= 1, "spin", "odd-even isomorphism needs m >= 1");
  OddEvenSpinorIso<K> iso;
  iso.m = m;
  iso.component = component;
  iso.embed = odd_to_even_embedding<K>(2 * m - 1);
  iso.odd_desc = make_grassmannian<K>(VarietyKind::orthogonal, m - 1, 2 * m - 1);
  iso.even_desc = make_grassmannian<K>(VarietyKind::orthogonal, m, 2 * m, component);
  return iso;
}

// The two isotropic directions of a 2-dimensional non-degenerate restriction.
template <class K>
std::vector<std::vector<K>> isotropic_directions_2d(const BilinearSpace<K>& sp, const Mat<K>& d) {
  require(d.rows == 2, "spin", "need a 2-dimensional restriction");
  Mat<K> g = d * sp.gram * d.transpose();
  K a = g.at(0, 0), b = g.at(0, 1), c = g.at(1, 1);
  require(!(a * c - b * b).is_zero(), "spin", "restriction plane is degenerate");
  std::vector<std::vector<K>> out;
  auto dir = [&](K t0, K t1) {
    std::vector<K> v(size_t(d.cols));
    for (int j = 0; j < d.cols; ++j) v[size_t(j)] = t0 * d.at(0, j) + t1 * d.at(1, j);
    return v;
  };
  if (a.is_zero()) {
    // roots of t1 (2 b t0 + c t1) = 0, with b != 0 by non-degeneracy
    out.push_back(dir(K(1), K(0)));
    out.push_back(dir(-c / (K(2) * b), K(1)));
    return out;
  }
  K disc = b * b - a * c;
  auto s = detail::sqrt_in_field(disc);
  require(s.has_value(), "spin", "restriction plane is anisotropic");
  out.push_back(dir((*s - b) / a, K(1)));
  out.push_back(dir((-*s - b) / a, K(1)));
  return out;
}

// U (maximal isotropic of the odd space) -> the unique maximal isotropic of
// the even space in the chosen component containing the image of U.
template <class K>
Subspace<K> odd_to_even_point(const OddEvenSpinorIso<K>& iso, const Subspace<K>& u) {
  require(u.ambient == 2 * iso.m - 1 && u.dim() == iso.m - 1, "spin",
          "odd-side point must be maximal isotropic");
  const auto& sp = *iso.even_desc.form;
  Subspace<K> img = apply_linear(u, iso.embed);
  Subspace<K> perp = sp.orthogonal_complement(img);
  // pick a 2-dimensional complement of img inside its perp
  Mat<K> work = img.basis;
  Mat<K> comp(2, 2 * iso.m);
  int got = 0;
  for (int i = 0; i < perp.dim() && got < 2; ++i) {
    Mat<K> cand = Mat<K>::vstack(work, Mat<K>::from_rows({perp.basis.row(i)}));
    if (rank_of(cand) == work.rows + 1) {
      comp.set_row(got++, perp.basis.row(i));
      work = std::move(cand);
    }
  }
  require(got == 2, "spin", "quotient of perp by the image is not 2-dimensional");
  auto dirs = isotropic_directions_2d(sp, comp);
  for (const auto& v : dirs) {
    Subspace<K> w = sum(img, Subspace<K>::span_of(2 * iso.m, {v}));
    if (w.dim() == iso.m && sp.is_isotropic(w) && spinor_component(sp, w) == iso.component)
      return w;
  }
  fail("spin", "no extension landed in the requested component");
}

// W (even-side point) -> the odd-side point W ∩ image, pulled back.
template <class K>
Subspace<K> even_to_odd_point(const OddEvenSpinorIso<K>& iso, const Subspace<K>& w) {
  require(w.ambient == 2 * iso.m && w.dim() == iso.m, "spin",
          "even-side point must be maximal isotropic");
  // solve for rows of the odd space mapping into w
  int odd_n = 2 * iso.m - 1;
  // x * embed in w  <=>  x * embed * ann(w)^T = 0
  Subspace<K> a = w.ann();
  Mat<K> cond = iso.embed * a.basis.transpose();  // odd_n x (2m - m)
  Mat<K> ker = left_kernel(cond);
  Subspace<K> u = Subspace<K>::from_matrix(odd_n, std::move(ker));
  require(u.dim() == iso.m - 1, "spin", "intersection with the odd image has wrong dimension");
  return u;
}

// ---- the minimal projective embedding, point by point ----

// Coordinates of points in the canonical minimal embedding of x: Plücker
// for non-maximal descriptors, pure spinors in the half-spin space for
// maximal isotropic orthogonal descriptors (odd case through the odd-even
// isomorphism).
template <class K>
struct AmbientEmbedder {
  GrassmannianDesc<K> desc;
  std::optional<SpinModule<K>> sm;        // engaged for maximal orthogonal descriptors
  std::optional<OddEvenSpinorIso<K>> iso; // engaged for the odd maximal case
  int parity = 0;

  int ambient_dim() const {
    if (sm) return sm->half_dim();
    u64 c = 1;  // plain binomial C(n, m)
    for (int i = 0; i < desc.m; ++i) c = c * u64(desc.n - i) / u64(i + 1);
    return int(c);
  }

  ProjectiveVector<K> coords(const Subspace<K>& u) const {
    if (!sm) return pluecker_of_space(u);
    const Subspace<K> w = iso ? odd_to_even_point(*iso, u) : u;
    return ProjectiveVector<K>::of(half_coords(*sm, pure_spinor(*sm, w).coords, parity));
  }
};

template <class K>
AmbientEmbedder<K> make_ambient_embedder(const GrassmannianDesc<K>& x) {
  require_usable(x);
  AmbientEmbedder<K> e{x, std::nullopt, std::nullopt, 0};
  if (!x.spinor_flag()) return e;
  const bool even = x.n == 2 * x.m;
  const int m = even ? x.m : x.m + 1;
  e.sm = make_spin_module<K>(m);
  if (!even) e.iso = make_odd_even_iso<K>(m, 0);
  e.parity = support_parity(m, even ? *x.component : 0);
  return e;
}

// The linear span of the canonical projective image of all points.
template <class K>
Subspace<K> ambient_span(const GrassmannianDesc<K>& x) {
  static_assert(K::is_finite);
  auto emb = make_ambient_embedder(x);
  auto pts = enumerate_points(x);
  const int big = emb.ambient_dim();
  Mat<K> rows(int(pts.size()), big);
  for (size_t i = 0; i < pts.size(); ++i) rows.set_row(int(i), emb.coords(pts[i].space).coords);
  return Subspace<K>::from_matrix(big, std::move(rows));
}

}  // namespace grasmap
