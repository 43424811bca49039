#pragma once
// Explicit embeddings between grassmannian-type varieties: extension maps,
// tautological inclusions, quadric maps induced by degree-two relations on
// the minimal projective image, spinor pencil maps, and composites.  Each
// map carries a symbolic recipe next to its realized point function, and the
// module provides exact linearity testing (line degrees), fiber structure,
// and sampled equivariance certificates.

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "grasmap/sample.hpp"
#include "grasmap/spin.hpp"

namespace grasmap {

// ---- minimal projective frame ----

// Coordinates inside the linear span of the canonical projective image: the
// minimal projective embedding of a descriptor, realized concretely.  All
// degree-two computations below use these coordinates, so the ambient space
// really is spanned by the variety.
template <class K>
struct MinimalFrame {
  AmbientEmbedder<K> emb;
  Subspace<K> span;

  int dim() const { return span.dim(); }

  std::vector<K> coords(const Subspace<K>& point_space) const {
    auto c = span.coords_of(emb.coords(point_space).coords);
    require(c.has_value(), "embed", "point coordinates escape the recorded span");
    return *c;
  }
};

template <class K>
MinimalFrame<K> make_minimal_frame(const GrassmannianDesc<K>& x) {
  static_assert(K::is_finite);
  return MinimalFrame<K>{make_ambient_embedder(x), ambient_span(x)};
}

// ---- degree-two relations on the minimal image ----

// All symmetric grams G with c G c^T = 0 for the frame coordinates c of every
// point.  A quadratic form vanishes on one lift of a point iff on all lifts,
// so one normalized lift per point decides membership exactly.
template <class K>
std::vector<QuadraticForm<K>> compute_I2(const GrassmannianDesc<K>& x) {
  static_assert(K::is_finite);
  require(K::characteristic >= 3, "embed",
          "degree-two relations need at least three field elements");
  auto frame = make_minimal_frame(x);
  const int nv = frame.dim();
  auto pts = enumerate_points(x);
  const int nm = nv * (nv + 1) / 2;
  Mat<K> ev(int(pts.size()), nm);
  for (size_t r = 0; r < pts.size(); ++r) {
    auto c = frame.coords(pts[r].space);
    int col = 0;
    for (int i = 0; i < nv; ++i)
      for (int j = i; j < nv; ++j) ev.at(int(r), col++) = c[size_t(i)] * c[size_t(j)];
  }
  Mat<K> ker = right_kernel(std::move(ev));
  const K half = K(1) / K(2);
  std::vector<QuadraticForm<K>> out;
  for (int r = 0; r < ker.rows; ++r) {
    Mat<K> g(nv, nv);
    int col = 0;
    for (int i = 0; i < nv; ++i)
      for (int j = i; j < nv; ++j) {
        K c = ker.at(r, col++);
        if (i == j) {
          g.at(i, i) = c;
        } else {
          g.at(i, j) = c * half;
          g.at(j, i) = c * half;
        }
      }
    out.push_back(QuadraticForm<K>{std::move(g)});
  }
  return out;
}

// ---- symbolic recipes ----

// U -> nu(U) + W''  (with the annihilator of U in place of U when dualized)
template <class K>
struct StandardExtensionSpec {
  Mat<K> nu;
  Subspace<K> w2;
  bool dualized = false;
};

// U -> f(U) inside a fixed isotropic subspace W of the target form
template <class K>
struct IsotropicExtensionSpec {
  Subspace<K> w;
  Mat<K> f;
  bool minimal = false;  // W is maximal isotropic in the target form
};

// U -> U, forgetting the form
struct TautologicalSpec {};

// point -> its frame coordinates, lifted onto the quadric of the extended
// space V_X ⊕ U* (U = radical of the relation p)
template <class K>
struct KappaPSpec {
  QuadraticForm<K> p;  // on the source frame coordinates
  int rank = 0;
  Mat<K> lift;             // frame coords -> target ambient, lands on the quadric
  bool split_target = true;  // false: the extended form is not split over K
};

// U -> U ⊕ (annihilator of U inside the dual half of the standard splitting)
struct ThetaSpec {
  int m = 0;
  int k = 0;
  bool odd_step = false;  // codimension r = 2k, or 2k-1 when odd_step
  int r() const { return odd_step ? 2 * k - 1 : 2 * k; }
};

// U -> the pencil of maximal isotropics over U in one component, as a
// 2-dimensional subspace of the half-spin coordinate space
struct DeltaEvenSpec {
  int n = 0;
  int component = 0;
};

// the odd-space variant: extend the split odd space isometrically into the
// split even one, then take the even pencil map
struct DeltaOddSpec {
  int n = 0;
};

// U -> its annihilator under the coordinate dot pairing
struct DualityTwistSpec {};

template <class K>
struct EmbeddingSpec;

template <class K>
struct CompositeSpec {
  std::vector<EmbeddingSpec<K>> parts;  // applied left to right
};

template <class K>
struct EmbeddingSpec {
  std::variant<TautologicalSpec, StandardExtensionSpec<K>, IsotropicExtensionSpec<K>,
               KappaPSpec<K>, ThetaSpec, DeltaEvenSpec, DeltaOddSpec, DualityTwistSpec,
               CompositeSpec<K>>
      v;

  const char* variant_name() const {
    return std::visit(
        [](const auto& s) -> const char* {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, TautologicalSpec>) return "tautological";
          if constexpr (std::is_same_v<T, StandardExtensionSpec<K>>) return "standard-extension";
          if constexpr (std::is_same_v<T, IsotropicExtensionSpec<K>>)
            return "isotropic-extension";
          if constexpr (std::is_same_v<T, KappaPSpec<K>>) return "kappa-p";
          if constexpr (std::is_same_v<T, ThetaSpec>) return "theta";
          if constexpr (std::is_same_v<T, DeltaEvenSpec>) return "delta-even";
          if constexpr (std::is_same_v<T, DeltaOddSpec>) return "delta-odd";
          if constexpr (std::is_same_v<T, DualityTwistSpec>) return "duality-twist";
          if constexpr (std::is_same_v<T, CompositeSpec<K>>) return "composite";
        },
        v);
  }
};

// ---- the map object ----

template <class K>
struct EmbeddingMap {
  GrassmannianDesc<K> source, target;
  EmbeddingSpec<K> spec;
  std::function<Subspace<K>(const Subspace<K>&)> fn;  // raw point map on spaces
  std::vector<EmbeddingMap<K>> stages;                // engaged for composites
  std::shared_ptr<std::unordered_map<Key, Subspace<K>, KeyHash>> cache =
      std::make_shared<std::unordered_map<Key, Subspace<K>, KeyHash>>();

  // image of a source point space, memoized, with target membership checked
  Subspace<K> apply_space(const Subspace<K>& u) const {
    require(is_point_of(source, u), "embed", "argument is not a point of the source");
    if (auto it = cache->find(u.key()); it != cache->end()) return it->second;
    Subspace<K> img = fn(u);
    require(is_point_of(target, img), "embed", "image escaped the target variety");
    cache->emplace(u.key(), img);
    return img;
  }

  GrassPoint<K> apply(const GrassPoint<K>& p) const {
    return GrassPoint<K>{std::make_shared<const GrassmannianDesc<K>>(target),
                         apply_space(p.space)};
  }
};

// ---- builders ----

// The coordinate inclusion of one split form into a larger one of the same
// kind: i-th hyperbolic pair to i-th hyperbolic pair, anisotropic direction
// to anisotropic direction (so both dimensions must share parity).
template <class K>
Mat<K> standard_form_inclusion(const BilinearSpace<K>& a, const BilinearSpace<K>& b) {
  require(a.kind == b.kind, "embed", "form inclusion needs matching kinds");
  require(a.witt >= 0 && b.witt >= 0 && a.witt <= b.witt, "embed",
          "form inclusion needs split forms with growing index");
  require(a.anisotropic_index.has_value() == b.anisotropic_index.has_value(), "embed",
          "form inclusion needs matching dimension parity");
  Mat<K> nu(a.n, b.n);
  for (size_t i = 0; i < a.hyperbolic_pairs.size(); ++i) {
    nu.at(a.hyperbolic_pairs[i].first, b.hyperbolic_pairs[i].first) = K(1);
    nu.at(a.hyperbolic_pairs[i].second, b.hyperbolic_pairs[i].second) = K(1);
  }
  if (a.anisotropic_index) nu.at(*a.anisotropic_index, *b.anisotropic_index) = K(1);
  return nu;
}

// sigma(U) = nu(U) + W'' from a form-compatible injection nu and a fixed
// summand W'' meeting the image of nu trivially.  When the source is a
// maximal-isotropic orthogonal descriptor the target must be one as well:
// the extension otherwise still exists as a map but is not linear, and is
// only built with enforce_side_conditions = false.
template <class K>
EmbeddingMap<K> build_standard_extension(const GrassmannianDesc<K>& src,
                                         const GrassmannianDesc<K>& tgt, Mat<K> nu,
                                         Subspace<K> w2, bool dualized = false,
                                         bool enforce_side_conditions = true) {
  require_usable(src);
  require_usable(tgt);
  require(src.kind == tgt.kind, "embed", "extension endpoints must share a kind");
  require(nu.rows == src.n && nu.cols == tgt.n, "embed",
          "nu must map the source space into the target space");
  require(rank_of(nu) == src.n, "embed", "nu must be injective");
  require(w2.ambient == tgt.n, "embed", "the fixed summand lives in the wrong space");
  Subspace<K> img = Subspace<K>::from_matrix(tgt.n, nu);
  require(intersect(img, w2).dim() == 0, "embed",
          "the fixed summand must meet the image of nu trivially");
  require(!dualized || src.kind == VarietyKind::ordinary, "embed",
          "dualized extensions need an ordinary source");
  const int eff_m = dualized ? src.n - src.m : src.m;
  require(eff_m + w2.dim() == tgt.m, "embed",
          "dimension bookkeeping fails: target m must be source m plus dim W''");
  if (src.form) {
    Mat<K> pulled = nu * tgt.form->gram * nu.transpose();
    require(pulled == src.form->gram, "embed",
            "nu must carry the source form to the target form");
    require(tgt.form->is_isotropic(w2), "embed", "the fixed summand must be isotropic");
    require(tgt.form->pair_orthogonal(img, w2), "embed",
            "the fixed summand must be orthogonal to the image of nu");
  }
  if (enforce_side_conditions && src.kind == VarietyKind::orthogonal && src.spinor_flag() &&
      !tgt.spinor_flag()) {
    fail("embed",
         "extension of a maximal-isotropic orthogonal source into a non-maximal target "
         "exists but is not linear; pass enforce_side_conditions = false to study it");
  }
  EmbeddingMap<K> out;
  out.source = src;
  out.target = tgt;
  out.spec = EmbeddingSpec<K>{StandardExtensionSpec<K>{nu, w2, dualized}};
  out.fn = [nu = std::move(nu), w2 = std::move(w2), dualized](const Subspace<K>& u) {
    return sum(apply_linear(dualized ? u.ann() : u, nu), w2);
  };
  return out;
}

// iota(U) = f(U) inside a fixed isotropic subspace W of the target form,
// where f identifies the ordinary source space with W.
template <class K>
EmbeddingMap<K> build_isotropic_extension(const GrassmannianDesc<K>& src,
                                          const GrassmannianDesc<K>& tgt, Subspace<K> w,
                                          Mat<K> f) {
  require_usable(src);
  require_usable(tgt);
  require(src.kind == VarietyKind::ordinary, "embed",
          "isotropic extensions start from an ordinary grassmannian");
  require(tgt.form.has_value(), "embed", "isotropic extensions land in a form variety");
  require(tgt.m == src.m, "embed", "isotropic extensions preserve the subspace dimension");
  require(src.n <= tgt.n / 2, "embed",
          "need the source space dimension at most half the target dimension");
  require(w.ambient == tgt.n && w.dim() == src.n, "embed",
          "W must be a target subspace of the source space dimension");
  require(tgt.form->is_isotropic(w), "embed", "W must be isotropic");
  require(f.rows == src.n && f.cols == tgt.n && rank_of(f) == src.n, "embed",
          "f must embed the source space");
  require(Subspace<K>::from_matrix(tgt.n, f) == w, "embed", "f must map onto W");
  const bool minimal = (tgt.form->witt >= 0 && w.dim() == tgt.form->witt);
  EmbeddingMap<K> out;
  out.source = src;
  out.target = tgt;
  out.spec = EmbeddingSpec<K>{IsotropicExtensionSpec<K>{std::move(w), f, minimal}};
  out.fn = [f = std::move(f)](const Subspace<K>& u) { return apply_linear(u, f); };
  return out;
}

// U -> U into the ordinary grassmannian of the same (m, n).
template <class K>
EmbeddingMap<K> build_tautological(const GrassmannianDesc<K>& src) {
  require_usable(src);
  require(src.kind != VarietyKind::ordinary, "embed",
          "tautological embeddings start from a form variety");
  EmbeddingMap<K> out;
  out.source = src;
  out.target = make_grassmannian<K>(VarietyKind::ordinary, src.m, src.n);
  out.spec = EmbeddingSpec<K>{TautologicalSpec{}};
  out.fn = [](const Subspace<K>& u) { return u; };
  return out;
}

// U -> its annihilator under the coordinate dot pairing: the canonical
// identification of G(m, V) with the grassmannian of (n-m)-dimensional
// subspaces of the dual space, realized in fixed coordinates.
template <class K>
EmbeddingMap<K> build_duality(const GrassmannianDesc<K>& src) {
  require_usable(src);
  require(src.kind == VarietyKind::ordinary, "embed", "duality acts on ordinary grassmannians");
  EmbeddingMap<K> out;
  out.source = src;
  out.target = make_grassmannian<K>(VarietyKind::ordinary, src.n - src.m, src.n);
  out.spec = EmbeddingSpec<K>{DualityTwistSpec{}};
  out.fn = [](const Subspace<K>& u) { return u.ann(); };
  return out;
}

namespace detail {

// A basis in which a nondegenerate symmetric gram becomes the standard split
// one up to a global scalar: returns T with T Q T^t = lambda G_std.  Scaling
// does not change the zero set, so T transports the quadric of Q onto the
// standard one.  Returns nullopt when the form has a 2-dimensional
// anisotropic kernel (only possible in even dimension).
template <class K>
std::optional<Mat<K>> split_similarity(const Mat<K>& q) {
  const int n = q.rows;
  require(n >= 1 && q == q.transpose(), "embed", "split reduction needs a symmetric gram");
  require(rank_of(q) == n, "embed", "split reduction needs a nondegenerate gram");
  BilinearSpace<K> sp = BilinearSpace<K>::from_gram(FormKind::symmetric, q);
  std::vector<std::vector<K>> es, fs;
  auto sub = [&](const std::vector<K>& a, const std::vector<K>& b, const K& c) {
    std::vector<K> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - c * b[i];
    return r;
  };
  Mat<K> rest = Mat<K>::identity(n);
  while (rest.rows >= 1) {
    auto v = detail::isotropic_vector_in(sp, rest);
    if (!v) break;
    std::vector<K> w;
    for (int i = 0; i < rest.rows; ++i)
      if (!sp.eval(*v, rest.row(i)).is_zero()) {
        w = rest.row(i);
        break;
      }
    require(!w.empty(), "embed", "degenerate block while splitting");
    const K b = sp.eval(*v, w);
    std::vector<K> w1(w.size());
    for (size_t i = 0; i < w.size(); ++i) w1[i] = w[i] / b;
    std::vector<K> w2 = sub(w1, *v, sp.eval(w1, w1) / K(2));
    es.push_back(*v);
    fs.push_back(std::move(w2));
    Mat<K> chosen(int(2 * es.size()), n);
    for (size_t i = 0; i < es.size(); ++i) {
      chosen.set_row(int(2 * i), es[i]);
      chosen.set_row(int(2 * i + 1), fs[i]);
    }
    rest = right_kernel(Mat<K>(chosen * q));
  }
  const int r = int(es.size());
  if (n % 2 == 0 && rest.rows != 0) return std::nullopt;
  require(2 * r + rest.rows == n, "embed", "split reduction lost dimensions");
  K lambda = (n % 2 == 1) ? sp.eval(rest.row(0), rest.row(0)) : K(1);
  Mat<K> t(n, n);
  for (int i = 0; i < r; ++i) t.set_row(i, es[size_t(i)]);
  for (int i = 0; i < r; ++i) {
    std::vector<K> frow = fs[size_t(i)];
    for (auto& c : frow) c = c * lambda;
    t.set_row(r + i, frow);
  }
  if (n % 2 == 1) t.set_row(n - 1, rest.row(0));
  Mat<K> check = t * q * t.transpose();
  Mat<K> want = BilinearSpace<K>::standard_split(FormKind::symmetric, n).gram.scaled(lambda);
  require(check == want, "embed", "split reduction produced a wrong gram");
  return t;
}

}  // namespace detail

// The quadric map of a degree-two relation p on the minimal frame of x: the
// frame coordinates of every point satisfy p, so after extending the space by
// a dual copy of the radical of p (paired hyperbolically with it) the
// zero-padded coordinates land on a nondegenerate quadric of dimension
// 2·dim(frame) − rank(p).  When that extended form is split over K the target
// is the standard split quadric; otherwise the target keeps the constructed
// gram and split_target is recorded false.
template <class K>
EmbeddingMap<K> build_kappa_p(const GrassmannianDesc<K>& x, const QuadraticForm<K>& p) {
  static_assert(K::is_finite);
  require(K::characteristic >= 3, "embed", "quadric construction needs odd characteristic");
  require_usable(x);
  require(!p.is_zero(), "embed", "the relation must be nonzero");
  auto frame = std::make_shared<MinimalFrame<K>>(make_minimal_frame(x));
  const int nv = frame->dim();
  require(p.dim() == nv, "embed", "the relation must live on the frame coordinates");
  for (const auto& q : enumerate_points(x))
    require(p.eval(frame->coords(q.space)).is_zero(), "embed",
            "the relation does not vanish on the variety");
  auto dec = diagonalize_quadratic(p);
  const int rk = dec.rank;
  const int nu = nv - rk;  // radical dimension
  const int n = nv + nu;
  Mat<K> s = Mat<K>::vstack(dec.nondeg_part.basis, dec.radical.basis);
  require(rank_of(s) == nv, "embed", "adapted basis is singular");
  auto sinv = inverse(s);
  Mat<K> p_ad = s * p.gram * s.transpose();
  Mat<K> q_ad(n, n);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) q_ad.at(i, j) = p_ad.at(i, j);
  for (int i = 0; i < nu; ++i) {
    q_ad.at(rk + i, nv + i) = K(1);
    q_ad.at(nv + i, rk + i) = K(1);
  }
  Mat<K> pad(nv, n);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) pad.at(i, j) = sinv->at(i, j);
  auto t = detail::split_similarity(q_ad);
  GrassmannianDesc<K> tgt;
  Mat<K> lift = pad;
  bool split_target = t.has_value();
  if (split_target) {
    tgt = make_grassmannian<K>(VarietyKind::orthogonal, 1, n);
    lift = pad * *inverse(*t);
  } else {
    tgt.kind = VarietyKind::orthogonal;
    tgt.m = 1;
    tgt.n = n;
    tgt.form = BilinearSpace<K>::from_gram(FormKind::symmetric, q_ad);
  }
  require_usable(tgt);
  EmbeddingMap<K> out;
  out.source = x;
  out.target = tgt;
  out.spec = EmbeddingSpec<K>{KappaPSpec<K>{p, rk, lift, split_target}};
  out.fn = [frame, lift, n](const Subspace<K>& u) {
    return Subspace<K>::span_of(n, {mat_vec_row(frame->coords(u), lift)});
  };
  return out;
}

// U -> U ⊕ (annihilator of U inside the dual half of the standard splitting
// of the split even space): a maximal isotropic subspace whose component is
// the parity of the codimension r = 2k or 2k-1.
template <class K>
EmbeddingMap<K> build_theta(int m, int k, bool odd_step = false) {
  require(k >= 1 && 2 * k <= m - 1, "embed", "step out of range: need 1 <= k <= (m-1)/2");
  const int r = odd_step ? 2 * k - 1 : 2 * k;
  EmbeddingMap<K> out;
  out.source = make_grassmannian<K>(VarietyKind::ordinary, m - r, m);
  out.target = make_grassmannian<K>(VarietyKind::orthogonal, m, 2 * m, r % 2);
  out.spec = EmbeddingSpec<K>{ThetaSpec{m, k, odd_step}};
  out.fn = [m](const Subspace<K>& u) {
    Mat<K> ker = right_kernel(u.basis);  // annihilator of U under the dot pairing
    Mat<K> rows(u.dim() + ker.rows, 2 * m);
    for (int i = 0; i < u.dim(); ++i)
      for (int j = 0; j < m; ++j) rows.at(i, j) = u.basis.at(i, j);
    for (int i = 0; i < ker.rows; ++i)
      for (int j = 0; j < m; ++j) rows.at(u.dim() + i, m + j) = ker.at(i, j);
    return Subspace<K>::from_matrix(2 * m, std::move(rows));
  };
  return out;
}

// U -> the 2-dimensional space of half-spin coordinates spanned by the pure
// spinors of the pencil of maximal isotropics over U in one component.
template <class K>
EmbeddingMap<K> build_delta(int n, int component = 0) {
  require(n >= 4, "embed", "the pencil map needs n >= 4");
  require(component == 0 || component == 1, "embed", "component must be 0 or 1");
  auto sm = std::make_shared<SpinModule<K>>(make_spin_module<K>(n));
  EmbeddingMap<K> out;
  out.source = make_grassmannian<K>(VarietyKind::orthogonal, n - 2, 2 * n);
  out.target = make_grassmannian<K>(VarietyKind::ordinary, 2, sm->half_dim());
  out.spec = EmbeddingSpec<K>{DeltaEvenSpec{n, component}};
  out.fn = [sm, component](const Subspace<K>& u) { return spinor_line(*sm, u, component); };
  return out;
}

// ---- composition ----

template <class K>
EmbeddingMap<K> compose(const EmbeddingMap<K>& f, const EmbeddingMap<K>& g) {
  require(f.target == g.source, "embed", "composition endpoints do not match");
  EmbeddingMap<K> out;
  out.source = f.source;
  out.target = g.target;
  CompositeSpec<K> sp;
  for (const auto* part : {&f, &g}) {
    if (auto* c = std::get_if<CompositeSpec<K>>(&part->spec.v))
      sp.parts.insert(sp.parts.end(), c->parts.begin(), c->parts.end());
    else
      sp.parts.push_back(part->spec);
    if (part->stages.empty())
      out.stages.push_back(*part);
    else
      out.stages.insert(out.stages.end(), part->stages.begin(), part->stages.end());
  }
  out.spec = EmbeddingSpec<K>{std::move(sp)};
  out.fn = [f, g](const Subspace<K>& u) { return g.apply_space(f.apply_space(u)); };
  return out;
}

// The odd-space pencil map: extend the split odd space isometrically into the
// split even one (one new hyperbolic direction replacing the anisotropic
// vector), then take the even pencil map on the chosen component.
template <class K>
EmbeddingMap<K> build_delta_odd(int n) {
  require(n >= 4, "embed", "the pencil map needs n >= 4");
  auto iso = make_odd_even_iso<K>(n, 0);
  auto src = make_grassmannian<K>(VarietyKind::orthogonal, n - 2, 2 * n - 1);
  auto mid = make_grassmannian<K>(VarietyKind::orthogonal, n - 2, 2 * n);
  EmbeddingMap<K> first =
      build_standard_extension<K>(src, mid, iso.embed, Subspace<K>::zero(2 * n));
  EmbeddingMap<K> out = compose(first, build_delta<K>(n, 0));
  out.spec = EmbeddingSpec<K>{DeltaOddSpec{n}};
  return out;
}

// ---- enumeration-level verification ----

template <class K>
struct EmbeddingCheck {
  u64 points = 0;
  bool injective = true;
  std::optional<std::pair<Subspace<K>, Subspace<K>>> collision;
};

template <class K>
EmbeddingCheck<K> verify_embedding(const EmbeddingMap<K>& phi) {
  static_assert(K::is_finite);
  EmbeddingCheck<K> out;
  std::unordered_map<Key, Subspace<K>, KeyHash> seen;
  for (const auto& p : enumerate_points(phi.source)) {
    ++out.points;
    Subspace<K> img = phi.apply_space(p.space);
    auto [it, fresh] = seen.emplace(img.key(), p.space);
    if (!fresh && out.injective) {
      out.injective = false;
      out.collision = std::make_pair(it->second, p.space);
    }
  }
  return out;
}

namespace detail {

// Visit the full point list of every projective line of x; the callback may
// return false to stop early.  The pencil-flag model built into the line
// helpers is complete except for maximal-isotropic odd descriptors, whose
// lines are transported from the even-space picture (isotropic subspaces two
// dimensions below the maximal ones).
template <class K>
void for_each_line_points(const GrassmannianDesc<K>& x,
                          const std::function<bool(const std::vector<Subspace<K>>&)>& f) {
  static_assert(K::is_finite);
  require_usable(x);
  if (x.kind == VarietyKind::orthogonal && x.n == 2 * x.m + 1) {
    auto iso = make_odd_even_iso<K>(x.m + 1, 0);
    const auto& sp = *iso.even_desc.form;
    for (const auto& lo : isotropic_subspaces(sp, x.m - 1)) {
      std::vector<Subspace<K>> pts;
      for (const auto& w : detail::isotropic_extensions(sp, lo, x.m + 1))
        if (spinor_component(sp, w) == iso.component)
          pts.push_back(even_to_odd_point(iso, w));
      if (!f(pts)) return;
    }
    return;
  }
  auto parent = std::make_shared<const GrassmannianDesc<K>>(x);
  if (x.kind == VarietyKind::orthogonal && x.n == 2 * x.m) {
    for (auto& lo : isotropic_subspaces(*x.form, x.m - 2)) {
      GrassLine<K> line{parent, std::move(lo), std::nullopt};
      if (!f(line_points(line))) return;
    }
    return;
  }
  std::set<std::pair<Key, Key>> seen;
  for (const auto& p : enumerate_points(x)) {
    for (auto& line : lines_through(GrassPoint<K>{parent, p.space})) {
      if (!seen.insert(line.ident()).second) continue;
      if (!f(line_points(line))) return;
    }
  }
}

}  // namespace detail

// ---- linearity ----

template <class K>
struct LinearityVerdict {
  bool linear = true;
  std::vector<Subspace<K>> witness_points;  // a full source line with bad image span
  int witness_span = 0;
  u64 lines_checked = 0;
};

// Line-degree criterion: lift the image of every source line into the
// canonical projective coordinates of the target (Plücker, or pure spinor
// for maximal orthogonal targets) and require the span to be a projective
// line.  Fails with the first offending line as a reproducible witness.
template <class K>
LinearityVerdict<K> is_linear(const EmbeddingMap<K>& phi) {
  static_assert(K::is_finite);
  require(K::characteristic >= 3, "embed",
          "the line-degree criterion needs at least four points per line");
  auto emb = make_ambient_embedder(phi.target);
  std::unordered_map<Key, std::vector<K>, KeyHash> img_coords;
  auto coords_of = [&](const Subspace<K>& u) -> const std::vector<K>& {
    Key key = u.key();
    if (auto it = img_coords.find(key); it != img_coords.end()) return it->second;
    return img_coords.emplace(key, emb.coords(phi.apply_space(u)).coords).first->second;
  };
  LinearityVerdict<K> out;
  detail::for_each_line_points<K>(phi.source, [&](const std::vector<Subspace<K>>& pts) {
    ++out.lines_checked;
    Mat<K> rows(int(pts.size()), emb.ambient_dim());
    for (size_t i = 0; i < pts.size(); ++i) rows.set_row(int(i), coords_of(pts[i]));
    const int rk = rank_of(std::move(rows));
    if (rk != 2) {
      out.linear = false;
      out.witness_points = pts;
      out.witness_span = rk;
      return false;
    }
    return true;
  });
  return out;
}

// ---- fibers ----

template <class K>
Subspace<K> constant_fiber_part(const EmbeddingMap<K>& phi) {
  static_assert(K::is_finite);
  auto pts = enumerate_points(phi.source);
  require(!pts.empty(), "embed", "empty source");
  Subspace<K> acc = phi.apply_space(pts[0].space);
  for (size_t i = 1; i < pts.size() && acc.dim() > 0; ++i)
    acc = intersect(acc, phi.apply_space(pts[i].space));
  return acc;
}

namespace detail {

// Fold a spec into "U -> (dualized ? ann(U) : U) · A" when every stage is
// matrix-induced (fixed summands are absorbed by the constant fiber part).
template <class K>
std::optional<std::pair<Mat<K>, bool>> linear_recipe(int src_n, const EmbeddingSpec<K>& spec) {
  Mat<K> acc = Mat<K>::identity(src_n);
  bool dual = false;
  auto step = [&](const EmbeddingSpec<K>& s, auto&& self) -> bool {
    return std::visit(
        [&](const auto& payload) -> bool {
          using T = std::decay_t<decltype(payload)>;
          if constexpr (std::is_same_v<T, TautologicalSpec>) {
            return true;
          } else if constexpr (std::is_same_v<T, StandardExtensionSpec<K>>) {
            if (payload.dualized) {
              if (acc.rows != acc.cols) return false;
              auto inv = inverse(acc);
              if (!inv) return false;
              acc = inv->transpose();
              dual = !dual;
            }
            acc = acc * payload.nu;
            return true;
          } else if constexpr (std::is_same_v<T, IsotropicExtensionSpec<K>>) {
            acc = acc * payload.f;
            return true;
          } else if constexpr (std::is_same_v<T, DualityTwistSpec>) {
            if (acc.rows != acc.cols) return false;
            auto inv = inverse(acc);
            if (!inv) return false;
            acc = inv->transpose();
            dual = !dual;
            return true;
          } else if constexpr (std::is_same_v<T, CompositeSpec<K>>) {
            for (const auto& part : payload.parts)
              if (!self(part, self)) return false;
            return true;
          } else {
            return false;
          }
        },
        s.v);
  };
  if (!step(spec, step)) return std::nullopt;
  return std::make_pair(std::move(acc), dual);
}

}  // namespace detail

enum class FiberShape { tautological_type, line_type, hyperplane_complement_type, unclassified };

inline const char* fiber_shape_name(FiberShape s) {
  switch (s) {
    case FiberShape::tautological_type: return "tautological-type";
    case FiberShape::line_type: return "line-type";
    case FiberShape::hyperplane_complement_type: return "hyperplane-complement-type";
    default: return "unclassified";
  }
}

template <class K>
struct FiberReport {
  Subspace<K> constant_part;
  FiberShape shape = FiberShape::unclassified;
  bool dualized = false;           // engaged with tautological_type
  std::optional<Mat<K>> recovered;  // the matrix behind the varying part
  std::string note;
};

// Decompose each fiber apply(U) = W' ⊕ varying(U) with W' the constant part,
// then classify the varying part: induced by a fixed matrix on U (or on its
// annihilator), one-dimensional throughout, or hyperplanes pivoting inside a
// fixed space one dimension larger.
template <class K>
FiberReport<K> pullback_fiber_shape(const EmbeddingMap<K>& phi) {
  static_assert(K::is_finite);
  auto lin = is_linear(phi);
  require(lin.linear, "embed", "fiber decomposition is defined for linear embeddings");
  FiberReport<K> rep{constant_fiber_part(phi)};
  const int w = rep.constant_part.dim();
  const int fdim = phi.target.m;
  auto pts = enumerate_points(phi.source);
  if (auto rec = detail::linear_recipe<K>(phi.source.n, phi.spec)) {
    auto [a, dual] = *rec;
    bool ok = true;
    for (const auto& p : pts) {
      Subspace<K> expect =
          sum(apply_linear(dual ? p.space.ann() : p.space, a), rep.constant_part);
      if (!(expect == phi.apply_space(p.space))) {
        ok = false;
        break;
      }
    }
    if (ok) {
      rep.recovered = std::move(a);
      rep.dualized = dual;
      if (phi.source.m == 1 && dual) {
        rep.shape = FiberShape::hyperplane_complement_type;
        rep.note = "fibers are images of the pivoting hyperplanes of the source space";
      } else {
        rep.shape = FiberShape::tautological_type;
        rep.note = dual ? "varying part is the matrix image of the annihilator of U"
                        : "varying part is the matrix image of U";
      }
      return rep;
    }
  }
  if (fdim == w + 1) {
    rep.shape = FiberShape::line_type;
    rep.note = "varying part is one-dimensional throughout";
    return rep;
  }
  Subspace<K> span = rep.constant_part;
  for (const auto& p : pts) span = sum(span, phi.apply_space(p.space));
  if (span.dim() == fdim + 1) {
    rep.shape = FiberShape::hyperplane_complement_type;
    rep.note = "fibers are hyperplanes of a fixed space one dimension larger";
    return rep;
  }
  rep.note = "no recognized decomposition";
  return rep;
}

// ---- equivariance ----

enum class WitnessStatus { verified, no_witness_constructed, counterexample };

inline const char* witness_status_name(WitnessStatus s) {
  switch (s) {
    case WitnessStatus::verified: return "verified";
    case WitnessStatus::no_witness_constructed: return "no witness constructed";
    default: return "counterexample";
  }
}

struct EquivarianceReport {
  WitnessStatus status = WitnessStatus::no_witness_constructed;
  int samples = 0;
  std::string detail;
};

namespace detail {

template <class K>
struct GroupElement {
  Mat<K> mat;  // row action v -> v * mat on the source ambient space
  std::vector<std::vector<K>> reflection_vectors;  // engaged for symmetric forms
};

// x -> x - (2 B(x,v) / B(v,v)) v for an anisotropic v.
template <class K>
Mat<K> reflection_matrix(const BilinearSpace<K>& sp, const std::vector<K>& v) {
  const K qv = sp.eval(v, v);
  require(!qv.is_zero(), "embed", "reflections need an anisotropic vector");
  Mat<K> r = Mat<K>::identity(sp.n);
  std::vector<K> bv = mat_vec_row(v, sp.gram);  // B(e_i, v) entries
  for (int i = 0; i < sp.n; ++i) {
    const K c = K(2) * bv[size_t(i)] / qv;
    for (int j = 0; j < sp.n; ++j) r.at(i, j) = r.at(i, j) - c * v[size_t(j)];
  }
  return r;
}

// x -> x + c ω(x,v) v, exact for any v and c.
template <class K>
Mat<K> transvection_matrix(const BilinearSpace<K>& sp, const std::vector<K>& v, const K& c) {
  Mat<K> r = Mat<K>::identity(sp.n);
  std::vector<K> wv = mat_vec_row(v, sp.gram);
  for (int i = 0; i < sp.n; ++i) {
    const K f = c * (-wv[size_t(i)]);  // ω(e_i, v) = -ω(v, e_i)
    for (int j = 0; j < sp.n; ++j) r.at(i, j) = r.at(i, j) + f * v[size_t(j)];
  }
  return r;
}

// A random element of the natural symmetry group of the source: invertible
// for ordinary spaces, an even product of reflections for symmetric forms
// (so maximal-isotropic components are preserved), a product of symplectic
// transvections for alternating forms.
template <class K>
GroupElement<K> sample_group_element(const GrassmannianDesc<K>& x, Rng& rng) {
  const int n = x.n;
  GroupElement<K> g;
  if (x.kind == VarietyKind::ordinary) {
    for (;;) {
      Mat<K> m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = random_scalar<K>(rng);
      if (rank_of(m) == n) {
        g.mat = std::move(m);
        return g;
      }
    }
  }
  const auto& sp = *x.form;
  g.mat = Mat<K>::identity(n);
  if (sp.kind == FormKind::alternating) {
    for (int t = 0; t < 2 * n; ++t) {
      std::vector<K> v = random_vector<K>(n, rng);
      bool zero = true;
      for (const auto& c : v) zero = zero && c.is_zero();
      if (zero) continue;
      g.mat = g.mat * transvection_matrix(sp, v, random_scalar<K>(rng));
    }
    return g;
  }
  for (int t = 0; t < 2 * std::max(1, n / 2); ++t) {
    std::vector<K> v;
    do {
      v = random_vector<K>(n, rng);
    } while (sp.eval(v, v).is_zero());
    g.mat = g.mat * reflection_matrix(sp, v);
    g.reflection_vectors.push_back(std::move(v));
  }
  return g;
}

// An isotropic complement dual to W: rows z_i with B(w_i, z_j) = delta_ij and
// all z_i isotropic and mutually orthogonal.
template <class K>
Mat<K> dual_isotropic_complement(const BilinearSpace<K>& sp, const Mat<K>& w) {
  const int k = w.rows;
  Mat<K> z(k, sp.n);
  for (int i = 0; i < k; ++i) {
    // solve B(w_j, y) = delta_ij and B(z_l, y) = 0 for l < i
    Mat<K> lhs(k + i, sp.n);
    for (int j = 0; j < k; ++j) lhs.set_row(j, mat_vec_row(w.row(j), sp.gram));
    for (int l = 0; l < i; ++l) lhs.set_row(k + l, mat_vec_row(z.row(l), sp.gram));
    std::vector<K> rhs(size_t(k + i));
    rhs[size_t(i)] = K(1);
    auto y = solve_row(lhs, rhs);
    require(y.has_value(), "embed", "no dual partner for an isotropic basis vector");
    std::vector<K> yi = *y;
    if (sp.kind == FormKind::symmetric) {
      const K t = sp.eval(yi, yi) / K(2);
      for (int j = 0; j < sp.n; ++j) yi[size_t(j)] = yi[size_t(j)] - t * w.at(i, j);
    }
    z.set_row(i, yi);
  }
  return z;
}

template <class K>
std::optional<GroupElement<K>> lift_stage(const EmbeddingMap<K>& stage, const GroupElement<K>& g);

// Lift a source-group element through a whole map (stage by stage for
// composites); nullopt when some stage has no block construction.
template <class K>
std::optional<GroupElement<K>> lift_element(const EmbeddingMap<K>& phi, GroupElement<K> g) {
  if (!phi.stages.empty()) {
    for (const auto& st : phi.stages) {
      auto h = lift_stage(st, g);
      if (!h) return std::nullopt;
      g = std::move(*h);
    }
    return g;
  }
  return lift_stage(phi, g);
}

template <class K>
std::optional<GroupElement<K>> lift_stage(const EmbeddingMap<K>& stage,
                                          const GroupElement<K>& g) {
  const auto& src = stage.source;
  const auto& tgt = stage.target;
  return std::visit(
      [&](const auto& payload) -> std::optional<GroupElement<K>> {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, TautologicalSpec>) {
          return g;
        } else if constexpr (std::is_same_v<T, DualityTwistSpec>) {
          GroupElement<K> h;
          h.mat = inverse(g.mat)->transpose();
          return h;
        } else if constexpr (std::is_same_v<T, StandardExtensionSpec<K>>) {
          Mat<K> base = payload.dualized ? inverse(g.mat)->transpose() : g.mat;
          Subspace<K> img = Subspace<K>::from_matrix(tgt.n, payload.nu);
          // complement of im(nu) that the block fixes pointwise; it must
          // contain W'' so the fixed summand stays put
          Mat<K> comp;
          if (tgt.form) {
            comp = tgt.form->orthogonal_complement(img).basis;  // contains W''
          } else {
            Mat<K> work = Mat<K>::vstack(img.basis, payload.w2.basis);
            comp = Mat<K>(tgt.n - src.n, tgt.n);
            int got = 0;
            for (int i = 0; i < payload.w2.dim(); ++i) comp.set_row(got++, payload.w2.basis.row(i));
            for (int i = 0; i < tgt.n && got < comp.rows; ++i) {
              std::vector<K> e(size_t(tgt.n));
              e[size_t(i)] = K(1);
              Mat<K> cand = Mat<K>::vstack(work, Mat<K>::from_rows({e}));
              if (rank_of(cand) == work.rows + 1) {
                comp.set_row(got++, e);
                work = std::move(cand);
              }
            }
          }
          Mat<K> m = Mat<K>::vstack(payload.nu, comp);
          auto minv = inverse(m);
          if (!minv) return std::nullopt;
          GroupElement<K> h;
          h.mat = *minv * Mat<K>::vstack(base * payload.nu, comp);
          if (!payload.dualized && src.form && tgt.form &&
              src.form->kind == FormKind::symmetric && !g.reflection_vectors.empty()) {
            for (const auto& v : g.reflection_vectors)
              h.reflection_vectors.push_back(mat_vec_row(v, payload.nu));
          }
          return h;
        } else if constexpr (std::is_same_v<T, IsotropicExtensionSpec<K>>) {
          const auto& sp = *tgt.form;
          Mat<K> z = dual_isotropic_complement(sp, payload.f);
          Subspace<K> pairs =
              Subspace<K>::from_matrix(tgt.n, Mat<K>::vstack(payload.f, z));
          Mat<K> rest = sp.orthogonal_complement(pairs).basis;
          Mat<K> m = Mat<K>::vstack(Mat<K>::vstack(payload.f, z), rest);
          auto minv = inverse(m);
          if (!minv) return std::nullopt;
          Mat<K> gt = inverse(g.mat)->transpose();
          GroupElement<K> h;
          h.mat = *minv * Mat<K>::vstack(Mat<K>::vstack(g.mat * payload.f, gt * z), rest);
          return h;
        } else if constexpr (std::is_same_v<T, ThetaSpec>) {
          const int m = payload.m;
          Mat<K> gt = inverse(g.mat)->transpose();
          Mat<K> f(2 * m, 2 * m);
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
              f.at(i, j) = g.mat.at(i, j);
              f.at(m + i, m + j) = gt.at(i, j);
            }
          GroupElement<K> h;
          h.mat = std::move(f);
          return h;
        } else if constexpr (std::is_same_v<T, DeltaEvenSpec>) {
          if (g.reflection_vectors.empty() || g.reflection_vectors.size() % 2 != 0)
            return std::nullopt;
          auto sm = make_spin_module<K>(payload.n);
          Mat<K> full = Mat<K>::identity(sm.dim);
          for (const auto& v : g.reflection_vectors) full = full * clifford_action(sm, v);
          const int parity = support_parity(payload.n, payload.component);
          const auto& mask = sm.parity_masks[size_t(parity)];
          const int h2 = sm.half_dim();
          Mat<K> half(h2, h2);
          for (int i = 0; i < h2; ++i)
            for (int j = 0; j < h2; ++j) half.at(i, j) = full.at(mask[size_t(i)], mask[size_t(j)]);
          GroupElement<K> h;
          h.mat = std::move(half);
          return h;
        } else {
          return std::nullopt;  // kappa-p, delta-odd shells, nested composites
        }
      },
      stage.spec.v);
}

}  // namespace detail

// Sampled equivariance certificate: draw random symmetry-group elements g of
// the source, build the block image f(g) dictated by the recipe, and check
// φ(U·g) = φ(U)·f(g) on every enumerated point.
template <class K>
EquivarianceReport equivariance_witness(const EmbeddingMap<K>& phi, int samples, Rng& rng) {
  static_assert(K::is_finite);
  EquivarianceReport rep;
  auto pts = enumerate_points(phi.source);
  std::unordered_map<Key, Subspace<K>, KeyHash> img;
  for (const auto& p : pts) img.emplace(p.space.key(), phi.apply_space(p.space));
  for (int t = 0; t < samples; ++t) {
    auto g = detail::sample_group_element(phi.source, rng);
    auto h = detail::lift_element(phi, g);
    if (!h) {
      rep.status = WitnessStatus::no_witness_constructed;
      rep.detail = std::string("no block construction for recipe '") +
                   phi.spec.variant_name() + "'";
      return rep;
    }
    for (const auto& p : pts) {
      Subspace<K> moved = apply_linear(p.space, g.mat);
      auto it = img.find(moved.key());
      if (it == img.end()) {
        rep.status = WitnessStatus::counterexample;
        rep.detail = "sampled element moved a point off the source variety";
        return rep;
      }
      Subspace<K> rhs = apply_linear(img.at(p.space.key()), h->mat);
      if (!(it->second == rhs)) {
        rep.status = WitnessStatus::counterexample;
        rep.detail = "block image disagrees with the map on a point";
        return rep;
      }
    }
    ++rep.samples;
  }
  rep.status = WitnessStatus::verified;
  return rep;
}

}  // namespace grasmap
