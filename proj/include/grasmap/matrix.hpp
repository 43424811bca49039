#pragma once
// Dense exact matrices with row-vector convention: vectors are rows, a
// subspace is the row space of its basis matrix, and forms act as v * G * w^T.

#include <vector>
#include <string>
#include <optional>

#include "grasmap/util.hpp"

namespace grasmap {

template <class K>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<K> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c)) {}

  K& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const K& at(int i, int j) const { return a[size_t(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = K(1);
    return m;
  }
  static Mat from_rows(const std::vector<std::vector<K>>& rws) {
    if (rws.empty()) return Mat(0, 0);
    Mat m(int(rws.size()), int(rws[0].size()));
    for (int i = 0; i < m.rows; ++i) {
      require(int(rws[i].size()) == m.cols, "matrix", "ragged rows");
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = rws[i][j];
    }
    return m;
  }

  std::vector<K> row(int i) const {
    return std::vector<K>(a.begin() + size_t(i) * cols, a.begin() + size_t(i + 1) * cols);
  }
  void set_row(int i, const std::vector<K>& r) {
    require(int(r.size()) == cols, "matrix", "row size mismatch");
    std::copy(r.begin(), r.end(), a.begin() + size_t(i) * cols);
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
  friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

  Mat transpose() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend Mat operator*(const Mat& x, const Mat& y) {
    require(x.cols == y.rows, "matrix", "dimension mismatch in product");
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        const K& xv = x.at(i, k);
        if (xv.is_zero()) continue;
        for (int j = 0; j < y.cols; ++j) z.at(i, j) += xv * y.at(k, j);
      }
    return z;
  }

  friend Mat operator+(const Mat& x, const Mat& y) {
    require(x.rows == y.rows && x.cols == y.cols, "matrix", "dimension mismatch in sum");
    Mat z = x;
    for (size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
    return z;
  }

  Mat scaled(const K& c) const {
    Mat z = *this;
    for (auto& v : z.a) v *= c;
    return z;
  }

  static Mat vstack(const Mat& x, const Mat& y) {
    if (x.rows == 0) return y;
    if (y.rows == 0) return x;
    require(x.cols == y.cols, "matrix", "vstack width mismatch");
    Mat z(x.rows + y.rows, x.cols);
    std::copy(x.a.begin(), x.a.end(), z.a.begin());
    std::copy(y.a.begin(), y.a.end(), z.a.begin() + x.a.size());
    return z;
  }

  Mat cols_slice(int c0, int c1) const {  // [c0, c1)
    Mat z(rows, c1 - c0);
    for (int i = 0; i < rows; ++i)
      for (int j = c0; j < c1; ++j) z.at(i, j - c0) = at(i, j);
    return z;
  }

  bool is_zero() const {
    for (const auto& v : a)
      if (!v.is_zero()) return false;
    return true;
  }
};

template <class K>
std::vector<K> mat_vec_row(const std::vector<K>& v, const Mat<K>& m) {  // v * M
  require(int(v.size()) == m.rows, "matrix", "row-vector length mismatch");
  std::vector<K> r(size_t(m.cols));
  for (int i = 0; i < m.rows; ++i) {
    if (v[size_t(i)].is_zero()) continue;
    for (int j = 0; j < m.cols; ++j) r[size_t(j)] += v[size_t(i)] * m.at(i, j);
  }
  return r;
}

// In-place reduced row echelon form; returns pivot column indices.
template <class K>
std::vector<int> rref_inplace(Mat<K>& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int sel = -1;
    for (int i = r; i < m.rows; ++i)
      if (!m.at(i, c).is_zero()) { sel = i; break; }
    if (sel < 0) continue;
    if (sel != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(r, j));
    K inv = m.at(r, c).inv();
    for (int j = c; j < m.cols; ++j) m.at(r, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      K f = m.at(i, c);
      if (f.is_zero()) continue;
      for (int j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class K>
int rank_of(Mat<K> m) {
  return int(rref_inplace(m).size());
}

// Right kernel: basis (as rows) of { x in K^cols : M x^T = 0 }.
template <class K>
Mat<K> right_kernel(Mat<K> m) {
  std::vector<int> piv = rref_inplace(m);
  std::vector<bool> is_piv(size_t(m.cols), false);
  for (int c : piv) is_piv[size_t(c)] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols; ++c)
    if (!is_piv[size_t(c)]) free_cols.push_back(c);
  Mat<K> ker(int(free_cols.size()), m.cols);
  for (int k = 0; k < int(free_cols.size()); ++k) {
    int fc = free_cols[size_t(k)];
    ker.at(k, fc) = K(1);
    for (int i = 0; i < int(piv.size()); ++i) ker.at(k, piv[size_t(i)]) = -m.at(i, fc);
  }
  rref_inplace(ker);  // canonical basis
  return ker;
}

// Left kernel: basis of { y in K^rows : y M = 0 }.
template <class K>
Mat<K> left_kernel(const Mat<K>& m) {
  return right_kernel(m.transpose());
}

template <class K>
K det(Mat<K> m) {
  require(m.rows == m.cols, "matrix", "determinant of non-square matrix");
  K d(1);
  int n = m.rows;
  for (int c = 0; c < n; ++c) {
    int sel = -1;
    for (int i = c; i < n; ++i)
      if (!m.at(i, c).is_zero()) { sel = i; break; }
    if (sel < 0) return K(0);
    if (sel != c) {
      for (int j = 0; j < n; ++j) std::swap(m.at(sel, j), m.at(c, j));
      d = -d;
    }
    d *= m.at(c, c);
    K inv = m.at(c, c).inv();
    for (int i = c + 1; i < n; ++i) {
      K f = m.at(i, c) * inv;
      if (f.is_zero()) continue;
      for (int j = c; j < n; ++j) m.at(i, j) -= f * m.at(c, j);
    }
  }
  return d;
}

template <class K>
std::optional<Mat<K>> inverse(const Mat<K>& m) {
  require(m.rows == m.cols, "matrix", "inverse of non-square matrix");
  int n = m.rows;
  Mat<K> aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = K(1);
  }
  auto piv = rref_inplace(aug);
  if (int(piv.size()) != n || piv.back() != n - 1) return std::nullopt;
  return aug.cols_slice(n, 2 * n);
}

// Solve x * A = b for a row vector x (any solution), if one exists.
template <class K>
std::optional<std::vector<K>> solve_row(const Mat<K>& A, const std::vector<K>& b) {
  // x A = b  <=>  A^T x^T = b^T
  Mat<K> at = A.transpose();
  require(int(b.size()) == at.rows, "matrix", "solve_row size mismatch");
  Mat<K> aug(at.rows, at.cols + 1);
  for (int i = 0; i < at.rows; ++i) {
    for (int j = 0; j < at.cols; ++j) aug.at(i, j) = at.at(i, j);
    aug.at(i, at.cols) = b[size_t(i)];
  }
  auto piv = rref_inplace(aug);
  std::vector<K> x(size_t(at.cols));
  for (int i = 0; i < int(piv.size()); ++i) {
    if (piv[size_t(i)] == at.cols) return std::nullopt;  // inconsistent
    x[size_t(piv[size_t(i)])] = aug.at(i, at.cols);
  }
  return x;
}

}  // namespace grasmap
