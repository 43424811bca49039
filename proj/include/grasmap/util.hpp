#pragma once
// Shared small utilities: error type, deterministic RNG, exact counting helpers,
// key packing for canonical matrices, and a chunked ordered parallel loop.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>
#include <array>
#include <functional>
#include <thread>
#include <mutex>
#include <random>
#include <algorithm>

namespace grasmap {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct error : std::runtime_error {
  std::string code;
  error(std::string c, const std::string& what) : std::runtime_error(what), code(std::move(c)) {}
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
  throw error(code, what);
}

inline void require(bool ok, const std::string& code, const std::string& what) {
  if (!ok) fail(code, what);
}

// Deterministic RNG.  mt19937_64 output is pinned by the standard; the
// uniform reductions below are hand-rolled so that sequences never depend on
// the standard library implementation.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(u64 seed) : eng(seed) {}
  u64 next() { return eng(); }
  // uniform integer in [0, n)
  u64 below(u64 n) {
    if (n == 0) fail("rng", "below(0)");
    u64 lim = ~u64{0} - (~u64{0} % n);
    for (;;) {
      u64 x = next();
      if (x < lim) return x % n;
    }
  }
  int range(int lo, int hi) { return lo + int(below(u64(hi - lo + 1))); }  // inclusive
};

// Exact Gaussian binomial [n choose m]_q; fits desk scale in unsigned __int128.
inline u64 gaussian_binomial(int n, int m, u64 q) {
  if (m < 0 || m > n) return 0;
  if (m == 0 || m == n) return 1;
  unsigned __int128 num = 1, den = 1;
  auto qpow = [&](int e) {
    unsigned __int128 r = 1;
    for (int i = 0; i < e; ++i) r *= q;
    return r;
  };
  for (int i = 0; i < m; ++i) {
    num *= qpow(n - i) - 1;
    den *= qpow(i + 1) - 1;
    if (num % den == 0) { num /= den; den = 1; }
  }
  return u64(num / den);
}

inline u64 ipow(u64 b, int e) {
  u64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Packed canonical key for small digit sequences (base p).  Two 64-bit words
// cover every enumerable shape in this project.  Keys built from identical
// digit-count/base sequences are injective and mutually comparable.
struct Key {
  std::array<u64, 2> w{0, 0};
  friend bool operator==(const Key& a, const Key& b) { return a.w == b.w; }
  friend bool operator!=(const Key& a, const Key& b) { return a.w != b.w; }
  friend bool operator<(const Key& a, const Key& b) { return a.w < b.w; }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    u64 h = k.w[0] * 0x9e3779b97f4a7c15ULL;
    h ^= k.w[1] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return std::size_t(h);
  }
};

class KeyPacker {
 public:
  void push(u64 digit, u64 base) {
    // The word boundary is a function of the base sequence alone (capacity
    // tracking), so keys of same-shape objects stay injective and comparable.
    if (cap_ == 0 || cap_ > (~u64{0}) / base) {  // cap_ == 0: word exactly full

      require(cur_ == 0, "key", "key overflow: object too large to pack");
      cur_ = 1;
      cap_ = 1;
    }
    k_.w[cur_] = k_.w[cur_] * base + digit;
    cap_ *= base;
  }
  Key get() const { return k_; }

 private:
  Key k_;
  u64 cap_ = 1;
  int cur_ = 0;
};

// Ordered chunked parallel map: runs fn(chunk) for chunk = 0..n_chunks-1 on up
// to `jobs` threads.  Writers must target per-chunk buffers; a sequential pass
// over chunk indices then yields bit-identical results to jobs==1.
inline void parallel_chunks(int n_chunks, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n_chunks <= 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  int next = 0;
  std::mutex mu;
  auto worker = [&]() {
    for (;;) {
      int c;
      {
        std::lock_guard<std::mutex> g(mu);
        if (next >= n_chunks) return;
        c = next++;
      }
      fn(c);
    }
  };
  int t = std::min(jobs, n_chunks);
  pool.reserve(size_t(t));
  for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace grasmap
