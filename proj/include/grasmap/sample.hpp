#pragma once
// Seeded random sampling of subspaces and variety points, for sampled
// censuses and round-trip checks at sizes where exhaustive enumeration is
// out of reach.

#include "grasmap/grassmannian.hpp"

namespace grasmap {

template <class K>
K random_scalar(Rng& rng) {
  static_assert(K::is_finite);
  return K(static_cast<long long>(rng.below(u64(K::characteristic))));
}

template <class K>
std::vector<K> random_vector(int n, Rng& rng) {
  std::vector<K> v(static_cast<size_t>(n));
  for (auto& x : v) x = random_scalar<K>(rng);
  return v;
}

// Uniformly-distributed-enough d-dimensional subspace: random rows redrawn
// until they are independent.
template <class K>
Subspace<K> random_subspace(int n, int d, Rng& rng) {
  require(0 <= d && d <= n, "sample", "dimension out of range");
  Subspace<K> s = Subspace<K>::zero(n);
  while (s.dim() < d) {
    auto v = random_vector<K>(n, rng);
    if (!s.contains(v)) s = sum(s, Subspace<K>::span_of(n, {v}));
  }
  return s;
}

// Random d-dimensional totally isotropic subspace, grown one random
// isotropic direction at a time inside the current orthogonal complement.
template <class K>
Subspace<K> random_isotropic_subspace(const BilinearSpace<K>& sp, int d, Rng& rng) {
  require(0 <= d && d <= (sp.witt >= 0 ? sp.witt : sp.n), "sample",
          "isotropy dimension out of range");
  Subspace<K> s = Subspace<K>::zero(sp.n);
  int stale = 0;
  while (s.dim() < d) {
    Subspace<K> perp = sp.orthogonal_complement(s);
    auto c = random_vector<K>(perp.dim(), rng);
    auto v = mat_vec_row(c, perp.basis);
    if (!s.contains(v) && sp.eval(v, v).is_zero()) {
      s = sum(s, Subspace<K>::span_of(sp.n, {v}));
      stale = 0;
    } else if (++stale > 4096) {
      fail("sample", "could not extend an isotropic subspace (dimension too large?)");
    }
  }
  return s;
}

// Random point of a grassmannian (component-aware for even orthogonal
// maximal descriptors; resamples until the requested component comes up).
template <class K>
GrassPoint<K> random_point(const GrassmannianDesc<K>& x, Rng& rng) {
  require_usable(x);
  auto parent = std::make_shared<const GrassmannianDesc<K>>(x);
  for (int tries = 0; tries < 4096; ++tries) {
    Subspace<K> s = x.form ? random_isotropic_subspace(*x.form, x.m, rng)
                           : random_subspace<K>(x.n, x.m, rng);
    if (is_point_of(x, s)) return GrassPoint<K>{parent, std::move(s)};
  }
  fail("sample", "could not sample a point of " + x.name());
}

}  // namespace grasmap
