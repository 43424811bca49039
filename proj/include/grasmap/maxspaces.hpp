#pragma once
// Maximal projective spaces and maximal standard quadrics carried by a
// grassmannian, with their pairwise intersection behavior.
//
// Family layout by descriptor regime:
//   ordinary G(m,n):      sub (datum dim m+1), super (datum dim m-1)
//   symplectic GS(m,2s):  sub / super with isotropic data; Lagrangian m=s has
//                         only the super pencils (projective lines)
//   orthogonal m=1:       the quadric itself (datum 0) plus its rulings, one
//                         ruling entry per maximal isotropic (tagged by
//                         component in even ambient dimension)
//   orthogonal generic:   sub (isotropic dim m+1), quadric (isotropic dim
//                         m-1), and rulings keyed by a maximal isotropic
//                         datum with an (m-1)-dimensional co-datum inside it
//   orthogonal n=2m+3:    sub (datum = maximal isotropic) and quadric only;
//                         the per-quadric rulings are not maximal here
//   orthogonal n=2m:      opposite-component points key one family
//                         ("spinor-pm1", members meet the datum in dim m-1),
//                         isotropic (m-3)-subspaces key the other
//                         ("spinor-p3"); m=3 and m=2 degenerate to the whole
//                         variety as a single entry with a zero datum
//   orthogonal n=2m+1:    transported through the doubled space; data of
//                         these entries live in dimension n+1
//
// Every realized point set is closed under line pencils, and intersection
// verdicts are computed exhaustively and cross-checked against flag rules.

#include <map>
#include <utility>

#include "grasmap/sample.hpp"
#include "grasmap/spin.hpp"

namespace grasmap {

enum class FamilyTag { sub_space, super_space, quadric_family, spinor_pm1, spinor_p3, ruling_a, ruling_b };

inline const char* family_tag_name(FamilyTag t) {
  switch (t) {
    case FamilyTag::sub_space: return "sub";
    case FamilyTag::super_space: return "super";
    case FamilyTag::quadric_family: return "quadric";
    case FamilyTag::spinor_pm1: return "spinor-pm1";
    case FamilyTag::spinor_p3: return "spinor-p3";
    case FamilyTag::ruling_a: return "ruling-a";
    case FamilyTag::ruling_b: return "ruling-b";
  }
  return "?";
}

// Structural regime of a descriptor, deciding which families exist.
enum class MaxRegime { ordinary, symplectic, quadric, generic_orth, submax_odd, spinor_even, maximal_odd };

template <class K>
MaxRegime max_regime(const GrassmannianDesc<K>& x) {
  require_usable(x);
  if (x.kind == VarietyKind::ordinary) return MaxRegime::ordinary;
  if (x.kind == VarietyKind::symplectic) return MaxRegime::symplectic;
  if (x.n == 2 * x.m) return MaxRegime::spinor_even;
  if (x.n == 2 * x.m + 1) return MaxRegime::maximal_odd;
  if (x.m == 1) return MaxRegime::quadric;
  const int r = x.n / 2;
  if (x.n % 2 == 1 && x.m == r - 1) return MaxRegime::submax_odd;
  return MaxRegime::generic_orth;
}

template <class K>
struct MaxSpace {
  std::shared_ptr<const GrassmannianDesc<K>> parent;
  FamilyTag tag = FamilyTag::sub_space;
  Subspace<K> datum;
  std::optional<Subspace<K>> co_datum;  // generic orthogonal rulings: the lower flag piece

  std::array<Key, 2> ident() const { return {datum.key(), co_datum ? co_datum->key() : Key{}}; }
  friend bool operator==(const MaxSpace& a, const MaxSpace& b) {
    return *a.parent == *b.parent && a.tag == b.tag && a.datum == b.datum && a.co_datum == b.co_datum;
  }
};

namespace detail {

// All d-dimensional subspaces of s, as subspaces of the full ambient space.
template <class K>
std::vector<Subspace<K>> subspaces_inside(const Subspace<K>& s, int d) {
  std::vector<Subspace<K>> out;
  for (const auto& local : all_subspaces<K>(s.dim(), d))
    out.push_back(Subspace<K>::from_matrix(s.ambient, local.basis * s.basis));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
  return out;
}

// Rows spanning a complement of `base` inside `within`.
template <class K>
Mat<K> complement_rows(const Subspace<K>& base, const Subspace<K>& within) {
  Mat<K> rows(within.dim() - base.dim(), within.ambient);
  Subspace<K> acc = base;
  int got = 0;
  for (int i = 0; i < within.dim() && got < rows.rows; ++i) {
    auto v = within.basis.row(i);
    if (acc.contains(v)) continue;
    rows.set_row(got++, v);
    acc = sum(acc, Subspace<K>::span_of(within.ambient, {v}));
  }
  require(got == rows.rows, "maxspaces", "complement construction failed");
  return rows;
}

// One-dimensional extensions base + <v> for all directions v of within/base.
template <class K>
std::vector<Subspace<K>> direction_extensions(const Subspace<K>& base, const Subspace<K>& within) {
  static_assert(K::is_finite);
  std::vector<Subspace<K>> out;
  if (within.dim() <= base.dim()) return out;
  Mat<K> comp = complement_rows(base, within);
  for_each_projective_vector<K>(comp.rows, [&](const std::vector<K>& c) {
    out.push_back(sum(base, Subspace<K>::span_of(base.ambient, {mat_vec_row(c, comp)})));
  });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
  return out;
}

template <class K>
OddEvenSpinorIso<K> transport_iso(const GrassmannianDesc<K>& x) {
  require(x.kind == VarietyKind::orthogonal && x.n == 2 * x.m + 1, "maxspaces",
          "transport applies to maximal odd orthogonal descriptors only");
  return make_odd_even_iso<K>(x.m + 1, 0);
}

}  // namespace detail

// Validated constructor.  For maximal odd orthogonal parents the datum lives
// in the doubled space (ambient n+1).
template <class K>
MaxSpace<K> make_max_space(std::shared_ptr<const GrassmannianDesc<K>> parent, FamilyTag tag,
                           Subspace<K> datum, std::optional<Subspace<K>> co_datum = std::nullopt) {
  const auto& x = *parent;
  MaxRegime reg = max_regime(x);
  auto isotropic_of_dim = [&](const Subspace<K>& s, int d, const BilinearSpace<K>& f) {
    require(s.ambient == f.n && s.dim() == d, "maxspaces", "datum has wrong dimension");
    require(f.is_isotropic(s), "maxspaces", "datum must be totally isotropic");
  };
  require(!co_datum || reg == MaxRegime::generic_orth, "maxspaces",
          "co-datum only applies to generic orthogonal rulings");
  switch (reg) {
    case MaxRegime::ordinary:
      require(tag == FamilyTag::sub_space || tag == FamilyTag::super_space, "maxspaces", "bad family");
      require(datum.ambient == x.n, "maxspaces", "datum ambient mismatch");
      require(datum.dim() == (tag == FamilyTag::sub_space ? x.m + 1 : x.m - 1) ||
                  (x.m == 1 && tag == FamilyTag::super_space && datum.dim() == 0) ||
                  (x.m == x.n - 1 && tag == FamilyTag::sub_space && datum.dim() == x.n),
              "maxspaces", "datum has wrong dimension");
      break;
    case MaxRegime::symplectic: {
      require(tag == FamilyTag::sub_space || tag == FamilyTag::super_space, "maxspaces", "bad family");
      if (tag == FamilyTag::sub_space) {
        require(2 * (x.m + 1) <= x.n, "maxspaces", "no sub family on the Lagrangian grassmannian");
        isotropic_of_dim(datum, x.m + 1, *x.form);
      } else if (!(x.m == 1 && datum.dim() == 0)) {
        isotropic_of_dim(datum, x.m - 1, *x.form);
      }
      break;
    }
    case MaxRegime::quadric:
      if (tag == FamilyTag::quadric_family) {
        require(datum.dim() == 0 && datum.ambient == x.n, "maxspaces", "the full quadric has a zero datum");
      } else {
        require(tag == FamilyTag::ruling_a || tag == FamilyTag::ruling_b, "maxspaces", "bad family");
        isotropic_of_dim(datum, x.n / 2, *x.form);
        if (x.n % 2 == 0) {
          int comp = spinor_component(*x.form, datum);
          require(comp == (tag == FamilyTag::ruling_a ? 0 : 1), "maxspaces",
                  "ruling tag disagrees with the component of its datum");
        } else {
          require(tag == FamilyTag::ruling_a, "maxspaces", "odd quadrics have a single ruling family");
        }
      }
      break;
    case MaxRegime::generic_orth:
      if (tag == FamilyTag::sub_space) {
        isotropic_of_dim(datum, x.m + 1, *x.form);
      } else if (tag == FamilyTag::quadric_family) {
        isotropic_of_dim(datum, x.m - 1, *x.form);
      } else {
        require(tag == FamilyTag::ruling_a || tag == FamilyTag::ruling_b, "maxspaces", "bad family");
        isotropic_of_dim(datum, x.n / 2, *x.form);
        require(co_datum && co_datum->dim() == x.m - 1 && datum.contains(*co_datum), "maxspaces",
                "rulings need an (m-1)-dimensional co-datum inside the datum");
        if (x.n % 2 == 0) {
          int comp = spinor_component(*x.form, datum);
          require(comp == (tag == FamilyTag::ruling_a ? 0 : 1), "maxspaces",
                  "ruling tag disagrees with the component of its datum");
        } else {
          require(tag == FamilyTag::ruling_a, "maxspaces", "odd ambient has a single ruling family");
        }
      }
      break;
    case MaxRegime::submax_odd:
      if (tag == FamilyTag::sub_space) {
        isotropic_of_dim(datum, x.m + 1, *x.form);
      } else {
        require(tag == FamilyTag::quadric_family, "maxspaces", "bad family");
        isotropic_of_dim(datum, x.m - 1, *x.form);
      }
      break;
    case MaxRegime::spinor_even: {
      require(tag == FamilyTag::spinor_pm1 || tag == FamilyTag::spinor_p3, "maxspaces", "bad family");
      if (x.m <= 3) {
        require(datum.dim() == 0 && datum.ambient == x.n, "maxspaces",
                "degenerate spinor entries have a zero datum");
        require(tag == (x.m == 3 ? FamilyTag::spinor_p3 : FamilyTag::spinor_pm1), "maxspaces",
                "wrong degenerate spinor family");
      } else if (tag == FamilyTag::spinor_pm1) {
        isotropic_of_dim(datum, x.m, *x.form);
        require(spinor_component(*x.form, datum) == 1 - *x.component, "maxspaces",
                "spinor-pm1 datum must lie in the opposite component");
      } else {
        isotropic_of_dim(datum, x.m - 3, *x.form);
      }
      break;
    }
    case MaxRegime::maximal_odd: {
      auto iso = detail::transport_iso(x);
      auto even_parent = std::make_shared<const GrassmannianDesc<K>>(iso.even_desc);
      MaxSpace<K> chk = make_max_space<K>(even_parent, tag, datum, co_datum);
      return MaxSpace<K>{std::move(parent), tag, std::move(chk.datum), std::move(chk.co_datum)};
    }
  }
  return MaxSpace<K>{std::move(parent), tag, std::move(datum), std::move(co_datum)};
}

// The exact point set of a maximal space, sorted by subspace key.
template <class K>
std::vector<Subspace<K>> realize(const MaxSpace<K>& ms) {
  static_assert(K::is_finite);
  const auto& x = *ms.parent;
  MaxRegime reg = max_regime(x);
  std::vector<Subspace<K>> out;
  switch (reg) {
    case MaxRegime::ordinary:
      if (ms.tag == FamilyTag::sub_space) {
        out = detail::subspaces_inside(ms.datum, x.m);
      } else {
        out = detail::direction_extensions(ms.datum, Subspace<K>::full(x.n));
      }
      break;
    case MaxRegime::symplectic:
      if (ms.tag == FamilyTag::sub_space) {
        out = detail::subspaces_inside(ms.datum, x.m);
      } else {
        out = detail::direction_extensions(ms.datum, x.form->orthogonal_complement(ms.datum));
      }
      break;
    case MaxRegime::quadric:
      if (ms.tag == FamilyTag::quadric_family) {
        for (auto& p : enumerate_points(x)) out.push_back(std::move(p.space));
      } else {
        out = detail::subspaces_inside(ms.datum, 1);
      }
      break;
    case MaxRegime::generic_orth:
    case MaxRegime::submax_odd:
      if (ms.tag == FamilyTag::sub_space) {
        out = detail::subspaces_inside(ms.datum, x.m);
      } else if (ms.tag == FamilyTag::quadric_family) {
        out = detail::isotropic_extensions(*x.form, ms.datum, x.m);
      } else {
        out = detail::direction_extensions(*ms.co_datum, ms.datum);
      }
      break;
    case MaxRegime::spinor_even: {
      if (ms.datum.dim() == 0) {  // degenerate m <= 3: the whole variety
        for (auto& p : enumerate_points(x)) out.push_back(std::move(p.space));
        break;
      }
      if (ms.tag == FamilyTag::spinor_pm1) {
        for (const auto& h : detail::subspaces_inside(ms.datum, x.m - 1))
          for (auto& w : detail::isotropic_extensions(*x.form, h, x.m))
            if (w != ms.datum) {
              require(spinor_component(*x.form, w) == *x.component, "maxspaces",
                      "hyperplane extension landed in the wrong component");
              out.push_back(std::move(w));
            }
      } else {
        for (auto& w : detail::isotropic_extensions(*x.form, ms.datum, x.m))
          if (spinor_component(*x.form, w) == *x.component) out.push_back(std::move(w));
      }
      break;
    }
    case MaxRegime::maximal_odd: {
      auto iso = detail::transport_iso(x);
      auto even_parent = std::make_shared<const GrassmannianDesc<K>>(iso.even_desc);
      MaxSpace<K> even_ms{even_parent, ms.tag, ms.datum, ms.co_datum};
      for (const auto& w : realize(even_ms)) out.push_back(even_to_odd_point(iso, w));
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
  return out;
}

// All maximal projective spaces (plus, for orthogonal parents, all maximal
// standard quadrics), each exactly once.
template <class K>
std::vector<MaxSpace<K>> enumerate_max_spaces(const GrassmannianDesc<K>& x_in, u64 guard = 200000) {
  static_assert(K::is_finite);
  auto parent = std::make_shared<const GrassmannianDesc<K>>(x_in);
  const auto& x = *parent;
  MaxRegime reg = max_regime(x);
  std::vector<MaxSpace<K>> out;
  auto push = [&](FamilyTag tag, Subspace<K> datum, std::optional<Subspace<K>> co = std::nullopt) {
    out.push_back(make_max_space<K>(parent, tag, std::move(datum), std::move(co)));
    require(out.size() <= guard, "maxspaces", "size guard exceeded while enumerating maximal spaces");
  };
  switch (reg) {
    case MaxRegime::ordinary:
      if (x.m == 1) {
        push(FamilyTag::super_space, Subspace<K>::zero(x.n));
      } else if (x.m == x.n - 1) {
        push(FamilyTag::sub_space, Subspace<K>::full(x.n));
      } else {
        for (auto& s : all_subspaces<K>(x.n, x.m + 1)) push(FamilyTag::sub_space, std::move(s));
        for (auto& s : all_subspaces<K>(x.n, x.m - 1)) push(FamilyTag::super_space, std::move(s));
      }
      break;
    case MaxRegime::symplectic:
      if (x.m == 1) {
        push(FamilyTag::super_space, Subspace<K>::zero(x.n));
        break;
      }
      if (2 * (x.m + 1) <= x.n)
        for (auto& s : isotropic_subspaces(*x.form, x.m + 1)) push(FamilyTag::sub_space, std::move(s));
      for (auto& s : isotropic_subspaces(*x.form, x.m - 1)) push(FamilyTag::super_space, std::move(s));
      break;
    case MaxRegime::quadric: {
      push(FamilyTag::quadric_family, Subspace<K>::zero(x.n));
      const int r = x.n / 2;
      for (auto& w : isotropic_subspaces(*x.form, r)) {
        FamilyTag tag = FamilyTag::ruling_a;
        if (x.n % 2 == 0 && spinor_component(*x.form, w) == 1) tag = FamilyTag::ruling_b;
        push(tag, std::move(w));
      }
      break;
    }
    case MaxRegime::generic_orth: {
      for (auto& s : isotropic_subspaces(*x.form, x.m + 1)) push(FamilyTag::sub_space, std::move(s));
      for (auto& s : isotropic_subspaces(*x.form, x.m - 1)) push(FamilyTag::quadric_family, std::move(s));
      const int r = x.n / 2;
      for (const auto& w : isotropic_subspaces(*x.form, r)) {
        FamilyTag tag = FamilyTag::ruling_a;
        if (x.n % 2 == 0 && spinor_component(*x.form, w) == 1) tag = FamilyTag::ruling_b;
        for (auto& co : detail::subspaces_inside(w, x.m - 1)) push(tag, w, std::move(co));
      }
      break;
    }
    case MaxRegime::submax_odd:
      for (auto& s : isotropic_subspaces(*x.form, x.m + 1)) push(FamilyTag::sub_space, std::move(s));
      for (auto& s : isotropic_subspaces(*x.form, x.m - 1)) push(FamilyTag::quadric_family, std::move(s));
      break;
    case MaxRegime::spinor_even: {
      if (x.m <= 3) {
        push(x.m == 3 ? FamilyTag::spinor_p3 : FamilyTag::spinor_pm1, Subspace<K>::zero(x.n));
        break;
      }
      auto opposite = make_grassmannian<K>(VarietyKind::orthogonal, x.m, x.n, 1 - *x.component);
      for (auto& p : enumerate_points(opposite)) push(FamilyTag::spinor_pm1, std::move(p.space));
      for (auto& s : isotropic_subspaces(*x.form, x.m - 3)) push(FamilyTag::spinor_p3, std::move(s));
      break;
    }
    case MaxRegime::maximal_odd: {
      auto iso = detail::transport_iso(x);
      for (auto& e : enumerate_max_spaces(iso.even_desc, guard)) {
        out.push_back(MaxSpace<K>{parent, e.tag, std::move(e.datum), std::move(e.co_datum)});
        require(out.size() <= guard, "maxspaces", "size guard exceeded while enumerating maximal spaces");
      }
      break;
    }
  }
  return out;
}

// ---- intersection verdicts ----

enum class ShapeKind { empty, point, projective_space, quadric_shape, other };

template <class K>
struct IntersectionVerdict {
  ShapeKind kind = ShapeKind::empty;
  int dim = -1;  // projective dimension for projective_space / quadric_shape
  u64 size = 0;
  std::optional<Subspace<K>> witness;

  std::string name() const {
    switch (kind) {
      case ShapeKind::empty: return "empty";
      case ShapeKind::point: return "point";
      case ShapeKind::projective_space:
        return dim == 1 ? "line" : dim == 2 ? "plane" : "P" + std::to_string(dim);
      case ShapeKind::quadric_shape: return "Q" + std::to_string(dim);
      case ShapeKind::other: return "other";
    }
    return "?";
  }
  bool same_shape(const IntersectionVerdict& o) const {
    return kind == o.kind && (kind != ShapeKind::projective_space || dim == o.dim) &&
           (kind != ShapeKind::quadric_shape || dim == o.dim);
  }
};

inline u64 projective_point_count(int d, u64 q) {
  return d < 0 ? 0 : (ipow(q, d + 1) - 1) / (q - 1);
}

namespace detail {

// Exhaustive classification of a set of points (sorted by key) as a shape in
// the parent's minimal projective embedding.
template <class K>
IntersectionVerdict<K> classify_point_set(const AmbientEmbedder<K>& emb,
                                          const std::vector<Subspace<K>>& pts) {
  IntersectionVerdict<K> v;
  v.size = pts.size();
  if (pts.empty()) return v;
  v.witness = pts.front();
  if (pts.size() == 1) {
    v.kind = ShapeKind::point;
    v.dim = 0;
    return v;
  }
  const u64 q = u64(K::characteristic);
  std::vector<ProjectiveVector<K>> img;
  img.reserve(pts.size());
  for (const auto& p : pts) img.push_back(emb.coords(p));
  Mat<K> rows(int(img.size()), img.front().ambient);
  for (size_t i = 0; i < img.size(); ++i) rows.set_row(int(i), img[i].coords);
  Subspace<K> span = Subspace<K>::from_matrix(img.front().ambient, std::move(rows));
  const int d = span.dim() - 1;
  if (pts.size() == projective_point_count(d, q)) {
    v.kind = ShapeKind::projective_space;
    v.dim = d;
    return v;
  }
  // Quadric test: find a quadratic form on the span whose zero set matches
  // exactly (characteristic 2 is excluded from the symmetric-matrix model).
  if constexpr (K::characteristic != 2) {
    const int nc = d + 1;
    std::vector<std::vector<K>> local;
    for (const auto& pv : img) local.push_back(*span.coords_of(pv.coords));
    Mat<K> mono(int(local.size()), nc * (nc + 1) / 2);
    for (size_t r = 0; r < local.size(); ++r) {
      int c = 0;
      for (int i = 0; i < nc; ++i)
        for (int j = i; j < nc; ++j) mono.at(int(r), c++) = local[r][size_t(i)] * local[r][size_t(j)];
    }
    Mat<K> ker = right_kernel(mono);
    if (ker.rows >= 1 && ker.rows <= 9) {
      std::vector<Key> want;
      for (const auto& x : local) want.push_back(ProjectiveVector<K>::of(x).key());
      std::sort(want.begin(), want.end());
      bool found = false;
      for_each_projective_vector<K>(ker.rows, [&](const std::vector<K>& cc) {
        if (found) return;
        std::vector<K> coeff = mat_vec_row(cc, ker);
        std::vector<Key> zero;
        for_each_projective_vector<K>(nc, [&](const std::vector<K>& x) {
          K val(0);
          int c = 0;
          for (int i = 0; i < nc; ++i)
            for (int j = i; j < nc; ++j) val += coeff[size_t(c++)] * x[size_t(i)] * x[size_t(j)];
          if (val.is_zero()) zero.push_back(ProjectiveVector<K>::of(x).key());
        });
        std::sort(zero.begin(), zero.end());
        if (zero == want) found = true;
      });
      if (found) {
        v.kind = ShapeKind::quadric_shape;
        v.dim = d - 1;
        return v;
      }
    }
  }
  v.kind = ShapeKind::other;
  v.dim = d;
  return v;
}

template <class K>
std::vector<Subspace<K>> intersect_sorted(const std::vector<Subspace<K>>& a,
                                          const std::vector<Subspace<K>>& b) {
  std::vector<Subspace<K>> out;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    Key ka = a[i].key(), kb = b[j].key();
    if (ka == kb) {
      out.push_back(a[i]);
      ++i, ++j;
    } else if (ka < kb) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

}  // namespace detail

// Flag-rule prediction of the intersection shape, straight from the data.
// For maximal odd orthogonal parents the rule is applied in the doubled
// space, matching where the data live.
template <class K>
IntersectionVerdict<K> flag_rule_prediction(const MaxSpace<K>& A, const MaxSpace<K>& B) {
  require(*A.parent == *B.parent, "maxspaces", "maximal spaces on different varieties");
  require(!(A == B), "maxspaces", "flag rules compare distinct maximal spaces");
  const auto& x = *A.parent;
  MaxRegime reg = max_regime(x);
  IntersectionVerdict<K> v;
  auto point = [&](Subspace<K> w) {
    v.kind = ShapeKind::point;
    v.dim = 0;
    v.size = 1;
    v.witness = std::move(w);
    return v;
  };
  auto proj = [&](int d) {
    v.kind = d == 0 ? ShapeKind::point : ShapeKind::projective_space;
    v.dim = d;
    v.size = projective_point_count(d, u64(K::characteristic));
    return v;
  };

  if (reg == MaxRegime::maximal_odd) {
    auto iso = detail::transport_iso(x);
    auto even_parent = std::make_shared<const GrassmannianDesc<K>>(iso.even_desc);
    MaxSpace<K> ea{even_parent, A.tag, A.datum, A.co_datum};
    MaxSpace<K> eb{even_parent, B.tag, B.datum, B.co_datum};
    IntersectionVerdict<K> ev = flag_rule_prediction(ea, eb);
    if (ev.witness) ev.witness = even_to_odd_point(iso, *ev.witness);
    return ev;
  }

  auto ordered = [&](FamilyTag t1, FamilyTag t2) {
    return (A.tag == t1 && B.tag == t2) || (A.tag == t2 && B.tag == t1);
  };
  const MaxSpace<K>& first = (A.tag <= B.tag) ? A : B;
  const MaxSpace<K>& second = (A.tag <= B.tag) ? B : A;

  switch (reg) {
    case MaxRegime::ordinary:
    case MaxRegime::symplectic:
    case MaxRegime::generic_orth:
    case MaxRegime::submax_odd: {
      const bool orth = x.kind == VarietyKind::orthogonal;
      if (ordered(FamilyTag::sub_space, FamilyTag::sub_space)) {
        Subspace<K> meet = intersect(A.datum, B.datum);
        return meet.dim() == x.m ? point(std::move(meet)) : v;
      }
      FamilyTag low = orth ? FamilyTag::quadric_family : FamilyTag::super_space;
      if (ordered(low, low)) {
        Subspace<K> join = sum(A.datum, B.datum);
        if (join.dim() != x.m) return v;
        if (x.form && !x.form->is_isotropic(join)) return v;
        return point(std::move(join));
      }
      if (ordered(FamilyTag::sub_space, low)) {
        const auto& sub = A.tag == FamilyTag::sub_space ? A : B;
        const auto& other = A.tag == FamilyTag::sub_space ? B : A;
        return sub.datum.contains(other.datum) ? proj(1) : v;
      }
      // ruling pairs (generic orthogonal only)
      bool a_rul = A.tag == FamilyTag::ruling_a || A.tag == FamilyTag::ruling_b;
      bool b_rul = B.tag == FamilyTag::ruling_a || B.tag == FamilyTag::ruling_b;
      if (a_rul && b_rul) {
        if (*A.co_datum == *B.co_datum) {
          int d = intersect(A.datum, B.datum).dim() - x.m;
          if (d < 0) return v;
          if (d == 0) return point(sum(*A.co_datum, intersect(A.datum, B.datum)));
          return proj(d);
        }
        // different quadrics: inside Q ∩ Q'
        Subspace<K> join = sum(*A.co_datum, *B.co_datum);
        if (join.dim() != x.m || !x.form->is_isotropic(join)) return v;
        return (A.datum.contains(join) && B.datum.contains(join)) ? point(std::move(join)) : v;
      }
      if (a_rul || b_rul) {
        const auto& rul = a_rul ? A : B;
        const auto& other = a_rul ? B : A;
        if (other.tag == FamilyTag::quadric_family) {
          if (other.datum == *rul.co_datum) return proj(x.n / 2 - x.m);  // its own quadric
          Subspace<K> join = sum(other.datum, *rul.co_datum);
          if (join.dim() != x.m || !x.form->is_isotropic(join) || !rul.datum.contains(join)) return v;
          return point(std::move(join));
        }
        // sub vs ruling: the pencil members inside both flags
        if (!other.datum.contains(*rul.co_datum)) return v;
        Subspace<K> window = intersect(rul.datum, other.datum);
        if (!window.contains(*rul.co_datum) || window.dim() < x.m) return v;
        if (window.dim() == x.m) return point(std::move(window));
        return proj(window.dim() - x.m);
      }
      fail("maxspaces", "unhandled family pair");
    }
    case MaxRegime::quadric: {
      if (ordered(FamilyTag::quadric_family, FamilyTag::quadric_family))
        fail("maxspaces", "the full quadric is unique");
      if (first.tag == FamilyTag::quadric_family || second.tag == FamilyTag::quadric_family)
        return proj(x.n / 2 - 1);  // a ruling inside the full quadric
      int dm = intersect(A.datum, B.datum).dim();
      return dm == 0 ? v : proj(dm - 1);
    }
    case MaxRegime::spinor_even: {
      if (A.datum.dim() == 0 || B.datum.dim() == 0)
        fail("maxspaces", "degenerate spinor entries are unique");
      if (ordered(FamilyTag::spinor_pm1, FamilyTag::spinor_pm1)) {
        return intersect(A.datum, B.datum).dim() == x.m - 2 ? proj(1) : v;
      }
      if (ordered(FamilyTag::spinor_p3, FamilyTag::spinor_p3)) {
        Subspace<K> u = sum(A.datum, B.datum);
        if (!x.form->is_isotropic(u) || u.dim() > x.m) return v;
        if (u.dim() == x.m)
          return spinor_component(*x.form, u) == *x.component ? point(std::move(u)) : v;
        if (u.dim() == x.m - 1) {
          auto exts = detail::isotropic_extensions(*x.form, u, x.m);
          for (auto& w : exts)
            if (spinor_component(*x.form, w) == *x.component) return point(std::move(w));
          fail("maxspaces", "an (m-1)-dimensional isotropic space must extend into each component");
        }
        return u.dim() == x.m - 2 ? proj(1) : v;
      }
      // spinor_pm1 vs spinor_p3
      const auto& pm = A.tag == FamilyTag::spinor_pm1 ? A : B;
      const auto& p3 = A.tag == FamilyTag::spinor_pm1 ? B : A;
      if (pm.datum.contains(p3.datum)) return proj(2);
      Subspace<K> s = sum(p3.datum, pm.datum);
      if (s.dim() > x.m + 1) return v;
      // dim = m+1: at most one W with p3.datum ⊂ W ⊂ s meeting pm.datum in a
      // hyperplane; scan hyperplanes of the datum through their meet
      Subspace<K> meet = intersect(p3.datum, pm.datum);
      for (const auto& h : detail::subspaces_inside(pm.datum, x.m - 1)) {
        if (!h.contains(meet)) continue;
        Subspace<K> w = sum(p3.datum, h);
        if (w.dim() != x.m || !x.form->is_isotropic(w)) continue;
        if (spinor_component(*x.form, w) != *x.component) continue;
        return point(std::move(w));
      }
      return v;
    }
    default: fail("maxspaces", "unhandled regime");
  }
}

// Exhaustive intersection of two maximal spaces, classified as a shape.
template <class K>
IntersectionVerdict<K> classify_intersection(const MaxSpace<K>& A, const MaxSpace<K>& B) {
  require(*A.parent == *B.parent, "maxspaces", "maximal spaces on different varieties");
  require(!(A == B), "maxspaces", "classification compares distinct maximal spaces");
  auto emb = make_ambient_embedder(*A.parent);
  return detail::classify_point_set(emb, detail::intersect_sorted(realize(A), realize(B)));
}

// ---- the pairwise census ----

struct CensusOptions {
  u64 max_spaces = 4000;
  u64 max_pairs = 6'000'000;
  u64 sample_pairs = 0;  // 0: exhaustive; otherwise sample this many pairs
  u64 seed = 1;
};

struct CensusReport {
  std::string variety;
  u64 spaces = 0;
  u64 pairs_checked = 0;
  // (family, family) -> shape name -> count
  std::map<std::pair<std::string, std::string>, std::map<std::string, u64>> tally;
  std::vector<std::string> violations;  // forbidden shapes or flag-rule mismatches
  std::vector<std::string> absences;    // allowed shapes with no witness at this size
  bool pass = false;

  std::string summary() const {
    std::string s = variety + ": " + (pass ? "PASS" : "FAIL") + " (" + std::to_string(spaces) +
                    " spaces, " + std::to_string(pairs_checked) + " pairs)";
    for (const auto& [fams, shapes] : tally) {
      s += "\n  " + fams.first + " x " + fams.second + ":";
      for (const auto& [shape, count] : shapes) s += " " + shape + "=" + std::to_string(count);
    }
    for (const auto& m : violations) s += "\n  violation: " + m;
    for (const auto& m : absences) s += "\n  absent at this size: " + m;
    return s;
  }
};

namespace detail {

// The shapes the intersection tables allow for a family pair.  `quot_witt`
// is the witt index of the pencil quadric for ruling pairs.
template <class K>
std::vector<std::string> allowed_shapes(const GrassmannianDesc<K>& x, FamilyTag a, FamilyTag b) {
  MaxRegime reg = max_regime(x);
  if (reg == MaxRegime::maximal_odd) {
    auto iso = transport_iso(x);
    return allowed_shapes(iso.even_desc, a, b);
  }
  auto tags = std::minmax(a, b);
  auto is_ruling = [](FamilyTag t) { return t == FamilyTag::ruling_a || t == FamilyTag::ruling_b; };
  IntersectionVerdict<K> probe;
  auto pname = [&](int d) {
    probe.kind = d == 0 ? ShapeKind::point : ShapeKind::projective_space;
    probe.dim = d;
    return probe.name();
  };
  switch (reg) {
    case MaxRegime::ordinary:
    case MaxRegime::symplectic: {
      if (tags.first == tags.second) return {"empty", "point"};
      return {"empty", "line"};
    }
    case MaxRegime::submax_odd:
    case MaxRegime::generic_orth: {
      if (is_ruling(tags.first) || is_ruling(tags.second)) {
        std::vector<std::string> shapes = {"empty", "point"};
        if (is_ruling(tags.first) && is_ruling(tags.second)) {
          // same quadric: any pencil-quadric intersection dimension
          for (int d = 1; d <= x.n / 2 - x.m - 1; ++d) shapes.push_back(pname(d));
        } else if (tags.first == FamilyTag::quadric_family || tags.second == FamilyTag::quadric_family) {
          shapes.push_back(pname(x.n / 2 - x.m));  // a ruling inside its own quadric
        } else {
          shapes.push_back("line");  // sub datum contained in the ruling datum
        }
        return shapes;
      }
      if (tags.first == tags.second) return {"empty", "point"};
      return {"empty", "line"};
    }
    case MaxRegime::quadric: {
      const int r = x.n / 2;
      if (tags.first == FamilyTag::quadric_family || tags.second == FamilyTag::quadric_family)
        return {pname(r - 1)};
      std::vector<std::string> shapes;
      if (x.n % 2 == 1) {
        shapes.push_back("empty");
        for (int d = 0; d <= r - 2; ++d) shapes.push_back(pname(d));
      } else if (tags.first == tags.second) {
        // meets in dimension r-1-2k: empty reachable iff r is even
        if (r % 2 == 0) shapes.push_back("empty");
        for (int d = r - 3; d >= 0; d -= 2) shapes.push_back(pname(d));
      } else {
        if (r % 2 == 1) shapes.push_back("empty");
        for (int d = r - 2; d >= 0; d -= 2) shapes.push_back(pname(d));
      }
      return shapes;
    }
    case MaxRegime::spinor_even: {
      if (tags.first == FamilyTag::spinor_pm1 && tags.second == FamilyTag::spinor_pm1)
        return {"empty", "line"};
      if (tags.first == tags.second) return {"empty", "point", "line"};
      return {"empty", "point", "plane"};
    }
    default: fail("maxspaces", "unhandled regime");
  }
}

}  // namespace detail

namespace detail {

// Realizations for a whole batch of maximal spaces.  Spinor families (and
// their odd transports) are realized by filtering the variety's point pool
// once instead of re-running an isotropic-extension search per entry.
template <class K>
std::vector<std::vector<Subspace<K>>> realize_all(const GrassmannianDesc<K>& x,
                                                  const std::vector<MaxSpace<K>>& spaces) {
  MaxRegime reg = max_regime(x);
  std::vector<std::vector<Subspace<K>>> pts;
  pts.reserve(spaces.size());
  if (reg != MaxRegime::spinor_even && reg != MaxRegime::maximal_odd) {
    for (const auto& ms : spaces) pts.push_back(realize(ms));
    return pts;
  }
  std::optional<OddEvenSpinorIso<K>> iso;
  const GrassmannianDesc<K>* even = &x;
  if (reg == MaxRegime::maximal_odd) {
    iso = transport_iso(x);
    even = &iso->even_desc;
  }
  std::vector<Subspace<K>> pool;  // sorted by key (isotropic_subspaces is)
  for (auto& w : isotropic_subspaces(*even->form, even->m))
    if (spinor_component(*even->form, w) == *even->component) pool.push_back(std::move(w));
  for (const auto& ms : spaces) {
    std::vector<Subspace<K>> mine;
    for (const auto& w : pool) {
      bool in = ms.datum.dim() == 0 ||
                (ms.tag == FamilyTag::spinor_p3 ? w.contains(ms.datum)
                                                : intersect(w, ms.datum).dim() == even->m - 1);
      if (in) mine.push_back(iso ? even_to_odd_point(*iso, w) : w);
    }
    std::sort(mine.begin(), mine.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
    pts.push_back(std::move(mine));
  }
  return pts;
}

}  // namespace detail

template <class K>
CensusReport verify_intersection_table(const GrassmannianDesc<K>& x, CensusOptions opt = {}) {
  static_assert(K::is_finite);
  CensusReport rep;
  rep.variety = x.name();
  auto spaces = enumerate_max_spaces(x, opt.max_spaces);
  rep.spaces = spaces.size();
  std::vector<std::vector<Subspace<K>>> pts = detail::realize_all(x, spaces);
  auto emb = make_ambient_embedder(x);

  const u64 n = spaces.size();
  u64 total_pairs = n * (n - 1) / 2;
  require(opt.sample_pairs > 0 || total_pairs <= opt.max_pairs, "maxspaces",
          "size guard exceeded: " + std::to_string(total_pairs) + " pairs");

  // expected-shape bookkeeping, seeded with every allowed shape
  std::map<std::pair<std::string, std::string>, std::map<std::string, u64>> allowed;
  {
    std::vector<FamilyTag> tags;
    for (const auto& ms : spaces)
      if (std::find(tags.begin(), tags.end(), ms.tag) == tags.end()) tags.push_back(ms.tag);
    for (FamilyTag a : tags)
      for (FamilyTag b : tags) {
        if (b < a) continue;
        if (a == b) {
          u64 cnt = 0;
          for (const auto& ms : spaces) cnt += ms.tag == a;
          if (cnt < 2) continue;
        }
        auto ta = std::string(family_tag_name(a));
        auto tb = std::string(family_tag_name(b));
        for (const auto& s : detail::allowed_shapes(x, a, b)) allowed[{ta, tb}][s] = 0;
      }
  }

  auto check_pair = [&](size_t i, size_t j) {
    const auto& A = spaces[i];
    const auto& B = spaces[j];
    IntersectionVerdict<K> got = detail::classify_point_set(emb, detail::intersect_sorted(pts[i], pts[j]));
    IntersectionVerdict<K> want = flag_rule_prediction(A, B);
    auto ta = std::string(family_tag_name(std::min(A.tag, B.tag)));
    auto tb = std::string(family_tag_name(std::max(A.tag, B.tag)));
    rep.tally[{ta, tb}][got.name()]++;
    ++rep.pairs_checked;
    if (!got.same_shape(want) && rep.violations.size() < 20)
      rep.violations.push_back(ta + " x " + tb + ": exhaustive " + got.name() + " vs flag rule " +
                               want.name());
    if (got.kind == ShapeKind::point && want.witness && *got.witness != *want.witness &&
        rep.violations.size() < 20)
      rep.violations.push_back(ta + " x " + tb + ": point witnesses disagree");
    auto it = allowed.find({ta, tb});
    if (it == allowed.end() || !it->second.count(got.name())) {
      if (rep.violations.size() < 20)
        rep.violations.push_back(ta + " x " + tb + ": forbidden shape " + got.name());
    } else {
      it->second[got.name()]++;
    }
  };

  if (opt.sample_pairs > 0 && total_pairs > opt.sample_pairs) {
    Rng rng(opt.seed);
    for (u64 t = 0; t < opt.sample_pairs; ++t) {
      size_t i = size_t(rng.below(n)), j = size_t(rng.below(n));
      if (i == j) continue;
      check_pair(std::min(i, j), std::max(i, j));
    }
  } else {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) check_pair(i, j);
  }

  for (const auto& [fams, shapes] : allowed)
    for (const auto& [shape, count] : shapes)
      if (count == 0) rep.absences.push_back(fams.first + " x " + fams.second + ": " + shape);
  rep.pass = rep.violations.empty();
  return rep;
}

// All maximal spaces through a point, exactly once each.
template <class K>
std::vector<MaxSpace<K>> spaces_through(const GrassPoint<K>& pt) {
  static_assert(K::is_finite);
  const auto& x = *pt.parent;
  require(is_point_of(x, pt.space), "maxspaces", "not a point of the variety");
  MaxRegime reg = max_regime(x);
  auto parent = pt.parent;
  std::vector<MaxSpace<K>> out;
  auto push = [&](FamilyTag tag, Subspace<K> datum, std::optional<Subspace<K>> co = std::nullopt) {
    out.push_back(make_max_space<K>(parent, tag, std::move(datum), std::move(co)));
  };
  switch (reg) {
    case MaxRegime::ordinary:
      if (x.m == 1) {
        push(FamilyTag::super_space, Subspace<K>::zero(x.n));
      } else if (x.m == x.n - 1) {
        push(FamilyTag::sub_space, Subspace<K>::full(x.n));
      } else {
        for (auto& s : detail::direction_extensions(pt.space, Subspace<K>::full(x.n)))
          push(FamilyTag::sub_space, std::move(s));
        for (auto& s : detail::subspaces_inside(pt.space, x.m - 1))
          push(FamilyTag::super_space, std::move(s));
      }
      break;
    case MaxRegime::symplectic:
      if (x.m == 1) {
        push(FamilyTag::super_space, Subspace<K>::zero(x.n));
        break;
      }
      if (2 * (x.m + 1) <= x.n)
        for (auto& s : detail::direction_extensions(pt.space, x.form->orthogonal_complement(pt.space)))
          push(FamilyTag::sub_space, std::move(s));
      for (auto& s : detail::subspaces_inside(pt.space, x.m - 1))
        push(FamilyTag::super_space, std::move(s));
      break;
    case MaxRegime::quadric:
      push(FamilyTag::quadric_family, Subspace<K>::zero(x.n));
      for (auto& w : detail::isotropic_extensions(*x.form, pt.space, x.n / 2)) {
        FamilyTag tag = FamilyTag::ruling_a;
        if (x.n % 2 == 0 && spinor_component(*x.form, w) == 1) tag = FamilyTag::ruling_b;
        push(tag, std::move(w));
      }
      break;
    case MaxRegime::generic_orth:
    case MaxRegime::submax_odd:
      for (auto& s : detail::isotropic_extensions(*x.form, pt.space, x.m + 1))
        push(FamilyTag::sub_space, std::move(s));
      for (auto& s : detail::subspaces_inside(pt.space, x.m - 1))
        push(FamilyTag::quadric_family, std::move(s));
      if (reg == MaxRegime::generic_orth)
        for (const auto& w : detail::isotropic_extensions(*x.form, pt.space, x.n / 2)) {
          FamilyTag tag = FamilyTag::ruling_a;
          if (x.n % 2 == 0 && spinor_component(*x.form, w) == 1) tag = FamilyTag::ruling_b;
          for (auto& co : detail::subspaces_inside(pt.space, x.m - 1)) push(tag, w, std::move(co));
        }
      break;
    case MaxRegime::spinor_even:
      if (x.m <= 3) {
        push(x.m == 3 ? FamilyTag::spinor_p3 : FamilyTag::spinor_pm1, Subspace<K>::zero(x.n));
        break;
      }
      for (const auto& h : detail::subspaces_inside(pt.space, x.m - 1))
        for (auto& w : detail::isotropic_extensions(*x.form, h, x.m))
          if (w != pt.space) push(FamilyTag::spinor_pm1, std::move(w));
      for (auto& s : detail::subspaces_inside(pt.space, x.m - 3))
        push(FamilyTag::spinor_p3, std::move(s));
      break;
    case MaxRegime::maximal_odd: {
      auto iso = detail::transport_iso(x);
      auto even_parent = std::make_shared<const GrassmannianDesc<K>>(iso.even_desc);
      Subspace<K> w = odd_to_even_point(iso, pt.space);
      for (auto& e : spaces_through(GrassPoint<K>{even_parent, std::move(w)}))
        out.push_back(MaxSpace<K>{parent, e.tag, std::move(e.datum), std::move(e.co_datum)});
      break;
    }
  }
  return out;
}

}  // namespace grasmap
