#pragma once
// Canonical linear subspaces of K^n.  A subspace is stored as the unique RREF
// basis matrix with no zero rows; equality of subspaces is bit-equality of the
// stored matrices.

#include <optional>
#include <vector>

#include "grasmap/matrix.hpp"

namespace grasmap {

template <class K>
struct Subspace {
  int ambient = 0;
  Mat<K> basis;  // RREF, rows == dim
  std::vector<int> pivots;

  Subspace() = default;

  static Subspace zero(int n) {
    Subspace s;
    s.ambient = n;
    s.basis = Mat<K>(0, n);
    return s;
  }
  static Subspace full(int n) { return from_matrix(n, Mat<K>::identity(n)); }

  static Subspace from_matrix(int n, Mat<K> rows) {
    require(rows.cols == n || rows.rows == 0, "subspace", "ambient mismatch");
    if (rows.rows == 0) return zero(n);
    Subspace s;
    s.ambient = n;
    auto piv = rref_inplace(rows);
    Mat<K> b(int(piv.size()), n);
    for (int i = 0; i < b.rows; ++i)
      for (int j = 0; j < n; ++j) b.at(i, j) = rows.at(i, j);
    s.basis = std::move(b);
    s.pivots = std::move(piv);
    return s;
  }
  static Subspace span_of(int n, const std::vector<std::vector<K>>& rows) {
    if (rows.empty()) return zero(n);
    return from_matrix(n, Mat<K>::from_rows(rows));
  }

  int dim() const { return basis.rows; }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient == b.ambient && a.basis == b.basis;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  // Membership: reduce v against the RREF basis.
  bool contains(const std::vector<K>& v) const {
    require(int(v.size()) == ambient, "subspace", "vector length mismatch");
    std::vector<K> w = v;
    for (int i = 0; i < basis.rows; ++i) {
      const K c = w[size_t(pivots[size_t(i)])];  // copy: the loop below mutates w[pivot]
      if (c.is_zero()) continue;
      for (int j = pivots[size_t(i)]; j < ambient; ++j) w[size_t(j)] -= c * basis.at(i, j);
    }
    for (const auto& x : w)
      if (!x.is_zero()) return false;
    return true;
  }
  bool contains(const Subspace& other) const {
    require(other.ambient == ambient, "subspace", "ambient mismatch");
    for (int i = 0; i < other.basis.rows; ++i)
      if (!contains(other.basis.row(i))) return false;
    return true;
  }

  // Coefficients c with c * basis = v, if v lies in the subspace.
  std::optional<std::vector<K>> coords_of(const std::vector<K>& v) const {
    if (dim() == 0) {
      for (const auto& x : v)
        if (!x.is_zero()) return std::nullopt;
      return std::vector<K>{};
    }
    std::vector<K> c(static_cast<size_t>(dim()));
    std::vector<K> w = v;
    for (int i = 0; i < basis.rows; ++i) {
      K f = w[size_t(pivots[size_t(i)])];
      c[size_t(i)] = f;
      if (f.is_zero()) continue;
      for (int j = pivots[size_t(i)]; j < ambient; ++j) w[size_t(j)] -= f * basis.at(i, j);
    }
    for (const auto& x : w)
      if (!x.is_zero()) return std::nullopt;
    return c;
  }

  friend Subspace sum(const Subspace& a, const Subspace& b) {
    require(a.ambient == b.ambient, "subspace", "ambient mismatch in sum");
    return Subspace::from_matrix(a.ambient, Mat<K>::vstack(a.basis, b.basis));
  }

  friend Subspace intersect(const Subspace& a, const Subspace& b) {
    require(a.ambient == b.ambient, "subspace", "ambient mismatch in intersection");
    if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient);
    // (u, v) with u*A - v*B = 0; intersection vectors are u*A.
    Mat<K> m(a.ambient, a.dim() + b.dim());  // columns index (u, v)
    for (int j = 0; j < a.dim(); ++j)
      for (int i = 0; i < a.ambient; ++i) m.at(i, j) = a.basis.at(j, i);
    for (int j = 0; j < b.dim(); ++j)
      for (int i = 0; i < a.ambient; ++i) m.at(i, a.dim() + j) = -b.basis.at(j, i);
    Mat<K> ker = right_kernel(m);
    Mat<K> vecs(ker.rows, a.ambient);
    for (int r = 0; r < ker.rows; ++r) {
      std::vector<K> u(ker.a.begin() + size_t(r) * ker.cols,
                       ker.a.begin() + size_t(r) * ker.cols + a.dim());
      auto x = mat_vec_row(u, a.basis);
      vecs.set_row(r, x);
    }
    return Subspace::from_matrix(a.ambient, vecs);
  }

  // Annihilator under the standard dot pairing: { x : B x^T = 0 }.
  Subspace ann() const { return Subspace::from_matrix(ambient, right_kernel(basis)); }

  // Standard basis columns completing this subspace to K^n (the non-pivot columns).
  std::vector<int> complement_cols() const {
    std::vector<bool> is_piv(size_t(ambient), false);
    for (int c : pivots) is_piv[size_t(c)] = true;
    std::vector<int> r;
    for (int c = 0; c < ambient; ++c)
      if (!is_piv[size_t(c)]) r.push_back(c);
    return r;
  }

  Key key() const {
    KeyPacker kp;
    kp.push(u64(dim()), 64);
    for (const auto& x : basis.a) kp.push(x.digit(), x.digit_base());
    return kp.get();
  }
};

// Image of a subspace under a linear map given by matrix F (rows = images of
// standard basis vectors): row space of (basis * F).
template <class K>
Subspace<K> apply_linear(const Subspace<K>& s, const Mat<K>& f) {
  require(f.rows == s.ambient, "subspace", "linear map domain mismatch");
  return Subspace<K>::from_matrix(f.cols, s.basis * f);
}

// ---- finite-field enumeration helpers ----

// All vectors of K^n in lex order (digit 0..p-1 per coordinate, leftmost most
// significant), including zero.
template <class K, class Fn>
void for_each_vector(int n, Fn&& fn) {
  static_assert(K::is_finite);
  const int p = K::characteristic;
  std::vector<K> v(static_cast<size_t>(n));
  for (;;) {
    fn(v);
    int i = n - 1;
    while (i >= 0 && v[size_t(i)].v == p - 1) v[size_t(i--)] = K(0);
    if (i < 0) return;
    v[size_t(i)] = K(v[size_t(i)].v + 1);
  }
}

// Canonical projective representatives: first nonzero coordinate is 1.
template <class K, class Fn>
void for_each_projective_vector(int n, Fn&& fn) {
  static_assert(K::is_finite);
  for (int lead = n - 1; lead >= 0; --lead) {
    int tail = n - lead - 1;
    for_each_vector<K>(tail, [&](const std::vector<K>& t) {
      std::vector<K> v(static_cast<size_t>(n));
      v[size_t(lead)] = K(1);
      for (int j = 0; j < tail; ++j) v[size_t(lead + 1 + j)] = t[size_t(j)];
      fn(v);
    });
  }
}

// All m-dimensional subspaces of K^n by pivot pattern + free entries.
// (Not emitted in global lex order; callers sort when order matters.)
template <class K, class Fn>
void for_each_subspace(int n, int m, Fn&& fn) {
  static_assert(K::is_finite);
  if (m == 0) {
    fn(Subspace<K>::zero(n));
    return;
  }
  if (m > n) return;
  std::vector<int> piv(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) piv[size_t(i)] = i;
  auto emit_pattern = [&](const std::vector<int>& pv) {
    // free positions: row i, columns > pv[i], excluding pivot columns
    std::vector<std::pair<int, int>> free_pos;
    std::vector<bool> is_piv(size_t(n), false);
    for (int c : pv) is_piv[size_t(c)] = true;
    for (int i = 0; i < m; ++i)
      for (int j = pv[size_t(i)] + 1; j < n; ++j)
        if (!is_piv[size_t(j)]) free_pos.push_back({i, j});
    Mat<K> b(m, n);
    for (int i = 0; i < m; ++i) b.at(i, pv[size_t(i)]) = K(1);
    const int p = K::characteristic;
    size_t nf = free_pos.size();
    std::vector<int> digits(nf, 0);
    for (;;) {
      Subspace<K> s;
      s.ambient = n;
      s.basis = b;
      s.pivots = pv;
      fn(s);
      size_t i = nf;
      while (i > 0 && digits[i - 1] == p - 1) {
        --i;
        digits[i] = 0;
        b.at(free_pos[i].first, free_pos[i].second) = K(0);
      }
      if (i == 0) return;
      ++digits[i - 1];
      b.at(free_pos[i - 1].first, free_pos[i - 1].second) = K(digits[i - 1]);
    }
  };
  for (;;) {
    emit_pattern(piv);
    int i = m - 1;
    while (i >= 0 && piv[size_t(i)] == n - m + i) --i;
    if (i < 0) return;
    ++piv[size_t(i)];
    for (int j = i + 1; j < m; ++j) piv[size_t(j)] = piv[size_t(j - 1)] + 1;
  }
}

}  // namespace grasmap
