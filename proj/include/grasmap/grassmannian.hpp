#pragma once
// Grassmannians of ordinary, orthogonal, and symplectic type: descriptors,
// point and line geometry, Plücker coordinates, finite-field enumeration,
// and tangent-space dimension at the standard point.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "grasmap/bilinear.hpp"

namespace grasmap {

enum class VarietyKind { ordinary, orthogonal, symplectic };

inline const char* kind_code(VarietyKind k) {
  switch (k) {
    case VarietyKind::ordinary: return "G";
    case VarietyKind::orthogonal: return "GO";
    case VarietyKind::symplectic: return "GS";
  }
  fail("variety", "bad kind");
}

inline VarietyKind parse_kind(const std::string& s) {
  if (s == "G") return VarietyKind::ordinary;
  if (s == "GO") return VarietyKind::orthogonal;
  if (s == "GS") return VarietyKind::symplectic;
  fail("variety", "unknown variety kind '" + s + "' (expected G, GO, or GS)");
}

// Plain descriptor data before a field is chosen: KIND:m:n or KIND:m:n:c.
struct DescriptorSpec {
  VarietyKind kind = VarietyKind::ordinary;
  int m = 0, n = 0;
  std::optional<int> component;
};

inline DescriptorSpec parse_descriptor_string(const std::string& s) {
  std::vector<std::string> parts;
  size_t pos = 0;
  while (true) {
    size_t next = s.find(':', pos);
    parts.push_back(s.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  require(parts.size() == 3 || parts.size() == 4, "variety",
          "descriptor must be KIND:m:n or KIND:m:n:c, got '" + s + "'");
  DescriptorSpec d;
  d.kind = parse_kind(parts[0]);
  try {
    d.m = std::stoi(parts[1]);
    d.n = std::stoi(parts[2]);
    if (parts.size() == 4) d.component = std::stoi(parts[3]);
  } catch (const std::exception&) {
    fail("variety", "non-numeric descriptor field in '" + s + "'");
  }
  return d;
}

inline std::string descriptor_string(const DescriptorSpec& d) {
  std::string s = std::string(kind_code(d.kind)) + ":" + std::to_string(d.m) + ":" + std::to_string(d.n);
  if (d.component) s += ":" + std::to_string(*d.component);
  return s;
}

template <class K>
struct GrassmannianDesc {
  VarietyKind kind = VarietyKind::ordinary;
  int m = 0;
  int n = 0;
  std::optional<BilinearSpace<K>> form;  // absent iff ordinary
  std::optional<int> component;          // orthogonal n == 2m only

  // maximal-isotropic cases: the minimal projective embedding is spinor,
  // not Plücker
  bool spinor_flag() const {
    return kind == VarietyKind::orthogonal && (n == 2 * m || n == 2 * m + 1);
  }
  // orthogonal n == 2m+2: constructible but unusable by geometric operations
  bool excluded_flag() const { return kind == VarietyKind::orthogonal && n == 2 * m + 2; }

  DescriptorSpec spec() const { return DescriptorSpec{kind, m, n, component}; }
  std::string name() const { return descriptor_string(spec()); }

  friend bool operator==(const GrassmannianDesc& a, const GrassmannianDesc& b) {
    return a.kind == b.kind && a.m == b.m && a.n == b.n && a.component == b.component;
  }
  friend bool operator!=(const GrassmannianDesc& a, const GrassmannianDesc& b) { return !(a == b); }
};

template <class K>
GrassmannianDesc<K> make_grassmannian(VarietyKind kind, int m, int n,
                                      std::optional<int> component = std::nullopt) {
  GrassmannianDesc<K> x;
  x.kind = kind;
  x.m = m;
  x.n = n;
  switch (kind) {
    case VarietyKind::ordinary:
      require(1 <= m && m <= n - 1, "variety", "ordinary type needs 1 <= m <= n-1");
      require(!component, "variety", "component selector only applies to orthogonal n = 2m");
      break;
    case VarietyKind::symplectic:
      require(n % 2 == 0, "variety", "symplectic type needs even ambient dimension");
      require(1 <= m && m <= n / 2, "variety", "symplectic type needs 1 <= m <= n/2");
      require(!component, "variety", "component selector only applies to orthogonal n = 2m");
      x.form = BilinearSpace<K>::standard_split(FormKind::alternating, n);
      break;
    case VarietyKind::orthogonal:
      require(1 <= m && m <= n / 2, "variety", "orthogonal type needs 1 <= m <= floor(n/2)");
      x.form = BilinearSpace<K>::standard_split(FormKind::symmetric, n);
      if (n == 2 * m) {
        x.component = component.value_or(0);
        require(*x.component == 0 || *x.component == 1, "variety", "component must be 0 or 1");
      } else {
        require(!component, "variety", "component selector only applies to orthogonal n = 2m");
      }
      break;
  }
  return x;
}

template <class K>
GrassmannianDesc<K> make_grassmannian(const DescriptorSpec& d) {
  return make_grassmannian<K>(d.kind, d.m, d.n, d.component);
}

template <class K>
void require_usable(const GrassmannianDesc<K>& x) {
  require(!x.excluded_flag(), "variety",
          x.name() + " is excluded from geometric operations (orthogonal with n = 2m+2)");
}

// Component of a maximal isotropic subspace of a split even orthogonal space,
// relative to the reference half e_1..e_r: component 0 iff dim(W ∩ ref) has
// the same parity as r.
template <class K>
int spinor_component(const BilinearSpace<K>& sp, const Subspace<K>& w) {
  require(sp.witt >= 0, "variety", "component needs the standard split layout");
  require(sp.n == 2 * sp.witt, "variety", "component is defined in even dimension only");
  require(w.dim() == sp.witt, "variety", "component is defined for maximal isotropics only");
  int d = intersect(w, sp.isotropic_half()).dim();
  return (sp.witt - d) % 2;
}

template <class K>
struct GrassPoint {
  std::shared_ptr<const GrassmannianDesc<K>> parent;
  Subspace<K> space;
};

template <class K>
struct GrassLine {
  std::shared_ptr<const GrassmannianDesc<K>> parent;
  Subspace<K> lower;
  std::optional<Subspace<K>> upper;  // absent: maximal-isotropic even case (keyed by lower alone)

  std::pair<Key, Key> ident() const { return {lower.key(), upper ? upper->key() : Key{}}; }
};

// Is s the space of a point of X (dimension, isotropy, component)?
template <class K>
bool is_point_of(const GrassmannianDesc<K>& x, const Subspace<K>& s) {
  if (s.ambient != x.n || s.dim() != x.m) return false;
  if (x.form && !x.form->is_isotropic(s)) return false;
  if (x.kind == VarietyKind::orthogonal && x.n == 2 * x.m &&
      spinor_component(*x.form, s) != *x.component)
    return false;
  return true;
}

// ---- ordering helpers ----

template <class K>
bool lex_less(const Subspace<K>& a, const Subspace<K>& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  for (size_t i = 0; i < a.basis.a.size(); ++i) {
    if (a.basis.a[i] != b.basis.a[i]) return a.basis.a[i] < b.basis.a[i];
  }
  return false;
}

// ---- projective vectors ----

template <class K>
struct ProjectiveVector {
  int ambient = 0;
  std::vector<K> coords;  // first nonzero coordinate normalized to 1

  static ProjectiveVector of(std::vector<K> v) {
    ProjectiveVector p;
    p.ambient = int(v.size());
    K lead(0);
    for (const auto& x : v)
      if (!x.is_zero()) {
        lead = x;
        break;
      }
    require(!lead.is_zero(), "projective", "zero vector has no projective class");
    K li = lead.inv();
    for (auto& x : v) x *= li;
    p.coords = std::move(v);
    return p;
  }

  friend bool operator==(const ProjectiveVector& a, const ProjectiveVector& b) {
    return a.ambient == b.ambient && a.coords == b.coords;
  }
  friend bool operator!=(const ProjectiveVector& a, const ProjectiveVector& b) { return !(a == b); }
  friend bool operator<(const ProjectiveVector& a, const ProjectiveVector& b) {
    return a.coords < b.coords;
  }

  Key key() const {
    KeyPacker kp;
    for (const auto& x : coords) kp.push(x.digit(), x.digit_base());
    return kp.get();
  }
};

// Dimension of the linear span of the lifted vectors.
template <class K>
int projective_span_dim(const std::vector<ProjectiveVector<K>>& pts) {
  require(!pts.empty(), "projective", "span of an empty point set");
  int n = pts[0].ambient;
  Mat<K> m(int(pts.size()), n);
  for (size_t i = 0; i < pts.size(); ++i) {
    require(pts[i].ambient == n, "projective", "mixed ambient dimensions");
    m.set_row(int(i), pts[i].coords);
  }
  return rank_of(m);
}

// ---- enumeration ----

// All d-dimensional subspaces of K^n, sorted lexicographically on the RREF
// basis entries.
template <class K>
std::vector<Subspace<K>> all_subspaces(int n, int d) {
  static_assert(K::is_finite);
  std::vector<Subspace<K>> out;
  for_each_subspace<K>(n, d, [&](const Subspace<K>& s) { out.push_back(s); });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
  return out;
}

namespace detail {

// Maximal isotropic subspaces of a standard split space without anisotropic
// part, via cells: W is determined by A = W ∩ F (inside the dual half F) and
// a bilinear form β on the annihilator U of A in E, with W = A ⊕ {x + M(x)}
// where B(x, M(y)) = β(x, y).  β runs over alternating matrices for
// symmetric forms and symmetric matrices for alternating forms.
template <class K>
std::vector<Subspace<K>> maximal_isotropics_split(const BilinearSpace<K>& sp) {
  const int r = sp.witt;
  const bool beta_symmetric = sp.kind == FormKind::alternating;
  std::vector<Subspace<K>> out;
  auto scalars = K::elements();
  for (int k = r; k >= 0; --k) {
    for (const auto& a : all_subspaces<K>(r, k)) {
      const int d = r - k;
      Mat<K> u = d > 0 ? right_kernel(a.basis) : Mat<K>(0, r);
      // complete u's rows to an invertible r x r matrix
      Mat<K> full(r, r);
      {
        Subspace<K> acc = Subspace<K>::from_matrix(r, u);
        for (int i = 0; i < d; ++i) full.set_row(i, u.row(i));
        int got = d;
        for (int i = 0; i < r && got < r; ++i) {
          std::vector<K> ei(static_cast<size_t>(r));
          ei[size_t(i)] = K(1);
          if (acc.contains(ei)) continue;
          full.set_row(got++, ei);
          acc = sum(acc, Subspace<K>::span_of(r, {ei}));
        }
      }
      Mat<K> inv = *inverse(full);
      // free entries of β: strictly upper for alternating, upper incl.
      // diagonal for symmetric
      std::vector<std::pair<int, int>> slots;
      for (int i = 0; i < d; ++i)
        for (int j = beta_symmetric ? i : i + 1; j < d; ++j) slots.push_back({i, j});
      std::vector<size_t> odo(slots.size(), 0);
      for (;;) {
        Mat<K> beta(d, d);
        for (size_t s = 0; s < slots.size(); ++s) {
          auto [i, j] = slots[s];
          beta.at(i, j) = scalars[odo[s]];
          if (i != j) beta.at(j, i) = beta_symmetric ? beta.at(i, j) : -beta.at(i, j);
        }
        Mat<K> rows(r, sp.n);
        for (int i = 0; i < k; ++i)
          for (int c = 0; c < r; ++c) rows.at(i, r + c) = a.basis.at(i, c);
        if (d > 0) {
          // m-block: columns m_b solve full * m_b = (β column b, zeros)
          Mat<K> rhs(r, d);
          for (int i = 0; i < d; ++i)
            for (int b = 0; b < d; ++b) rhs.at(i, b) = beta.at(i, b);
          Mat<K> m = inv * rhs;  // r x d, column b = m_b
          for (int i = 0; i < d; ++i)
            for (int c = 0; c < r; ++c) {
              rows.at(k + i, c) = u.at(i, c);
              rows.at(k + i, r + c) = m.at(c, i);
            }
        }
        out.push_back(Subspace<K>::from_matrix(sp.n, std::move(rows)));
        // advance the odometer
        size_t s = 0;
        while (s < odo.size() && ++odo[s] == scalars.size()) odo[s++] = 0;
        if (s == odo.size() && !odo.empty()) break;
        if (odo.empty()) break;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return lex_less(x, y); });
  return out;
}

}  // namespace detail

// All totally isotropic d-dimensional subspaces, by extension levels with
// keyed deduplication; sorted lexicographically on the RREF basis entries.
template <class K>
std::vector<Subspace<K>> isotropic_subspaces(const BilinearSpace<K>& sp, int d) {
  static_assert(K::is_finite);
  require(d >= 0, "variety", "negative dimension");
  if (d == 0) return {Subspace<K>::zero(sp.n)};
  if (sp.witt >= 0 && sp.n == 2 * sp.witt && d == sp.witt &&
      int(sp.hyperbolic_pairs.size()) == sp.witt)
    return detail::maximal_isotropics_split(sp);
  std::vector<Subspace<K>> level;
  for_each_projective_vector<K>(sp.n, [&](const std::vector<K>& v) {
    if (sp.eval(v, v).is_zero()) level.push_back(Subspace<K>::span_of(sp.n, {v}));
  });
  for (int t = 2; t <= d; ++t) {
    std::unordered_map<Key, Subspace<K>, KeyHash> next;
    for (const auto& s : level) {
      Subspace<K> perp = sp.orthogonal_complement(s);
      for_each_projective_vector<K>(perp.dim(), [&](const std::vector<K>& c) {
        std::vector<K> v = mat_vec_row(c, perp.basis);
        if (s.contains(v) || !sp.eval(v, v).is_zero()) return;
        Subspace<K> ext = sum(s, Subspace<K>::span_of(sp.n, {v}));
        next.emplace(ext.key(), std::move(ext));
      });
    }
    level.clear();
    level.reserve(next.size());
    for (auto& [k, s] : next) level.push_back(std::move(s));
  }
  std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
  return level;
}

template <class K>
std::vector<GrassPoint<K>> enumerate_points(const GrassmannianDesc<K>& x) {
  static_assert(K::is_finite, "point enumeration needs a finite field");
  require_usable(x);
  auto parent = std::make_shared<const GrassmannianDesc<K>>(x);
  std::vector<Subspace<K>> spaces =
      x.form ? isotropic_subspaces(*x.form, x.m) : all_subspaces<K>(x.n, x.m);
  std::vector<GrassPoint<K>> out;
  out.reserve(spaces.size());
  for (auto& s : spaces) {
    if (x.kind == VarietyKind::orthogonal && x.n == 2 * x.m &&
        spinor_component(*x.form, s) != *x.component)
      continue;
    out.push_back(GrassPoint<K>{parent, std::move(s)});
  }
  return out;
}

// Closed-form point count over GF(q).
template <class K>
u64 point_count(const GrassmannianDesc<K>& x) {
  static_assert(K::is_finite);
  require_usable(x);
  u64 q = u64(K::characteristic);
  switch (x.kind) {
    case VarietyKind::ordinary: return gaussian_binomial(x.n, x.m, q);
    case VarietyKind::symplectic: {
      int r = x.n / 2;
      u64 c = gaussian_binomial(r, x.m, q);
      for (int i = r - x.m + 1; i <= r; ++i) c *= ipow(q, u64(i)) + 1;
      return c;
    }
    case VarietyKind::orthogonal: {
      if (x.n % 2 == 1) {
        int r = (x.n - 1) / 2;
        u64 c = gaussian_binomial(r, x.m, q);
        for (int i = r - x.m + 1; i <= r; ++i) c *= ipow(q, u64(i)) + 1;
        return c;
      }
      int r = x.n / 2;
      u64 c = gaussian_binomial(r, x.m, q);
      for (int i = r - x.m; i <= r - 1; ++i) c *= ipow(q, u64(i)) + 1;
      if (x.m == r) c /= 2;  // one of the two components
      return c;
    }
  }
  fail("variety", "bad kind");
}

// ---- Plücker coordinates ----

// Vector of all m×m minors of the basis matrix, indexed by lexicographic
// m-subsets of columns, projectively normalized.
template <class K>
ProjectiveVector<K> pluecker_of_space(const Subspace<K>& s) {
  int m = s.dim(), n = s.ambient;
  require(m >= 1, "pluecker", "Plücker coordinates need dimension >= 1");
  std::vector<K> out;
  std::vector<int> cols(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) cols[size_t(i)] = i;
  for (;;) {
    Mat<K> sub(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) sub.at(i, j) = s.basis.at(i, cols[size_t(j)]);
    out.push_back(det(sub));
    int i = m - 1;
    while (i >= 0 && cols[size_t(i)] == n - m + i) --i;
    if (i < 0) break;
    ++cols[size_t(i)];
    for (int j = i + 1; j < m; ++j) cols[size_t(j)] = cols[size_t(j - 1)] + 1;
  }
  return ProjectiveVector<K>::of(std::move(out));
}

template <class K>
ProjectiveVector<K> pluecker(const GrassPoint<K>& p) {
  require_usable(*p.parent);
  require(!p.parent->spinor_flag(), "pluecker",
          "maximal-isotropic orthogonal points use the spinor embedding, not Plücker");
  return pluecker_of_space(p.space);
}

// ---- lines ----

namespace detail {

// All isotropic extensions of `base` to dimension d inside the form sp.
template <class K>
std::vector<Subspace<K>> isotropic_extensions(const BilinearSpace<K>& sp, const Subspace<K>& base,
                                              int d) {
  std::vector<Subspace<K>> level = {base};
  for (int t = base.dim() + 1; t <= d; ++t) {
    std::unordered_map<Key, Subspace<K>, KeyHash> next;
    for (const auto& s : level) {
      Subspace<K> perp = sp.orthogonal_complement(s);
      for_each_projective_vector<K>(perp.dim(), [&](const std::vector<K>& c) {
        std::vector<K> v = mat_vec_row(c, perp.basis);
        if (s.contains(v) || !sp.eval(v, v).is_zero()) return;
        Subspace<K> ext = sum(s, Subspace<K>::span_of(sp.n, {v}));
        next.emplace(ext.key(), std::move(ext));
      });
    }
    level.clear();
    for (auto& [k, s] : next) level.push_back(std::move(s));
  }
  std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
  return level;
}

}  // namespace detail

// The point spaces of a line, in lexicographic order.
template <class K>
std::vector<Subspace<K>> line_points(const GrassLine<K>& line) {
  const auto& x = *line.parent;
  require_usable(x);
  std::vector<Subspace<K>> out;
  if (!line.upper) {
    // maximal-isotropic even case: all points of the selected component over lower
    for (auto& w : detail::isotropic_extensions(*x.form, line.lower, x.m))
      if (is_point_of(x, w)) out.push_back(std::move(w));
    return out;
  }
  std::unordered_map<Key, Subspace<K>, KeyHash> seen;
  for_each_projective_vector<K>(line.upper->dim(), [&](const std::vector<K>& c) {
    std::vector<K> v = mat_vec_row(c, line.upper->basis);
    if (line.lower.contains(v)) return;
    Subspace<K> u = sum(line.lower, Subspace<K>::span_of(x.n, {v}));
    if (u.dim() != x.m || !is_point_of(x, u)) return;
    seen.emplace(u.key(), std::move(u));
  });
  out.reserve(seen.size());
  for (auto& [k, s] : seen) out.push_back(std::move(s));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
  return out;
}

// The unique line through two distinct points, when they are collinear:
//   ordinary/symplectic: dim(p∩q) = m-1, pencil between p∩q and p+q;
//   orthogonal non-maximal: additionally p+q must be totally isotropic;
//   orthogonal maximal odd: dim(p∩q) = m-1, pencil = all isotropic m-spaces
//     over p∩q (encoded with upper = (p∩q)^perp);
//   orthogonal maximal even: dim(p∩q) = m-2, keyed by p∩q alone.
template <class K>
std::optional<GrassLine<K>> line_through(const GrassPoint<K>& p, const GrassPoint<K>& q) {
  require(*p.parent == *q.parent, "lines", "points live on different grassmannians");
  const auto& x = *p.parent;
  require_usable(x);
  require(p.space != q.space, "lines", "line through a point and itself is not unique");
  Subspace<K> meet = intersect(p.space, q.space);
  if (x.kind == VarietyKind::orthogonal && x.n == 2 * x.m) {
    if (meet.dim() != x.m - 2) return std::nullopt;
    return GrassLine<K>{p.parent, std::move(meet), std::nullopt};
  }
  if (meet.dim() != x.m - 1) return std::nullopt;
  if (x.kind == VarietyKind::orthogonal && x.n == 2 * x.m + 1) {
    Subspace<K> upper = x.form->orthogonal_complement(meet);
    return GrassLine<K>{p.parent, std::move(meet), std::move(upper)};
  }
  Subspace<K> join = sum(p.space, q.space);
  if (x.kind == VarietyKind::orthogonal && !x.form->is_isotropic(join)) return std::nullopt;
  return GrassLine<K>{p.parent, std::move(meet), std::move(join)};
}

// All lines on the parent variety through a given point.
template <class K>
std::vector<GrassLine<K>> lines_through(const GrassPoint<K>& p) {
  static_assert(K::is_finite);
  const auto& x = *p.parent;
  require_usable(x);
  const int m = x.m, n = x.n;
  std::vector<GrassLine<K>> out;
  auto sub_lowers = [&](int d) {
    // d-dimensional subspaces of p.space, as ambient subspaces
    std::vector<Subspace<K>> ls;
    for_each_subspace<K>(m, d, [&](const Subspace<K>& c) {
      ls.push_back(Subspace<K>::from_matrix(n, c.basis * p.space.basis));
    });
    std::sort(ls.begin(), ls.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
    return ls;
  };
  if (x.kind == VarietyKind::orthogonal && n == 2 * m) {
    for (auto& lo : sub_lowers(m - 2)) out.push_back(GrassLine<K>{p.parent, std::move(lo), std::nullopt});
    return out;
  }
  if (x.kind == VarietyKind::orthogonal && n == 2 * m + 1) {
    for (auto& lo : sub_lowers(m - 1)) {
      Subspace<K> up = x.form->orthogonal_complement(lo);
      out.push_back(GrassLine<K>{p.parent, std::move(lo), std::move(up)});
    }
    return out;
  }
  // pencil types: choose a hyperplane of p and an admissible extension of p
  auto uppers_from = [&](const Subspace<K>& comp) {
    // extensions p + v with v ranging over a constraint space `comp`
    std::unordered_map<Key, Subspace<K>, KeyHash> ups;
    for_each_projective_vector<K>(comp.dim(), [&](const std::vector<K>& c) {
      std::vector<K> v = mat_vec_row(c, comp.basis);
      if (p.space.contains(v)) return;
      if (x.kind == VarietyKind::orthogonal && !x.form->eval(v, v).is_zero()) return;
      Subspace<K> up = sum(p.space, Subspace<K>::span_of(n, {v}));
      ups.emplace(up.key(), std::move(up));
    });
    std::vector<Subspace<K>> v;
    v.reserve(ups.size());
    for (auto& [k, s] : ups) v.push_back(std::move(s));
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
    return v;
  };
  if (x.kind == VarietyKind::ordinary) {
    auto ups = uppers_from(Subspace<K>::full(n));
    for (auto& lo : sub_lowers(m - 1))
      for (auto& up : ups) out.push_back(GrassLine<K>{p.parent, lo, up});
    return out;
  }
  if (x.kind == VarietyKind::orthogonal) {
    // extension must keep the whole pencil isotropic: v in p^perp with q(v)=0
    auto ups = uppers_from(x.form->orthogonal_complement(p.space));
    for (auto& lo : sub_lowers(m - 1))
      for (auto& up : ups) out.push_back(GrassLine<K>{p.parent, lo, up});
    return out;
  }
  // symplectic: v must be orthogonal to the chosen lower (the pencil is then
  // automatically isotropic); extensions depend on the lower
  for (auto& lo : sub_lowers(m - 1)) {
    auto ups = uppers_from(x.form->orthogonal_complement(lo));
    for (auto& up : ups) out.push_back(GrassLine<K>{p.parent, lo, up});
  }
  return out;
}

// ---- dimension ----

// Dimension of the Zariski tangent space at the standard point span(e_1..e_m),
// computed from the linearization of the isotropy constraint on the RREF chart.
template <class K>
int tangent_dimension(const GrassmannianDesc<K>& x) {
  require_usable(x);
  int m = x.m, c = x.n - x.m;
  if (!x.form) return m * c;
  const Mat<K>& g = x.form->gram;
  Mat<K> lin(m * c, m * m);
  for (int i = 0; i < m; ++i)
    for (int t = 0; t < c; ++t)
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
          K val(0);
          if (r == i) val += g.at(m + t, s);
          if (s == i) val += g.at(r, m + t);
          lin.at(i * c + t, r * m + s) = val;
        }
  return m * c - rank_of(lin);
}

template <class K>
int variety_dimension(const GrassmannianDesc<K>& x) {
  if (x.kind == VarietyKind::ordinary) return x.m * (x.n - x.m);
  return tangent_dimension(x);
}

}  // namespace grasmap
