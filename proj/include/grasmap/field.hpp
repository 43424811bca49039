#pragma once
// Exact scalar types: prime fields GF(p) for small p, and arbitrary-precision
// rationals.  Everything downstream is templated over one of these types.

#include <string>
#include <vector>
#include <boost/multiprecision/cpp_int.hpp>

#include "grasmap/util.hpp"

namespace grasmap {

template <int P>
struct Gf {
  static_assert(P == 2 || P == 3 || P == 5 || P == 7, "unsupported prime");
  static constexpr bool is_finite = true;
  static constexpr int characteristic = P;

  std::int8_t v = 0;

  constexpr Gf() = default;
  constexpr explicit Gf(long long x) : v(std::int8_t(((x % P) + P) % P)) {}

  bool is_zero() const { return v == 0; }
  bool is_one() const { return v == 1; }

  friend Gf operator+(Gf a, Gf b) { return Gf(a.v + b.v); }
  friend Gf operator-(Gf a, Gf b) { return Gf(a.v - b.v + P); }
  friend Gf operator*(Gf a, Gf b) { return Gf(a.v * b.v); }
  Gf operator-() const { return Gf(P - v); }
  Gf& operator+=(Gf b) { return *this = *this + b; }
  Gf& operator-=(Gf b) { return *this = *this - b; }
  Gf& operator*=(Gf b) { return *this = *this * b; }
  friend bool operator==(Gf a, Gf b) { return a.v == b.v; }
  friend bool operator!=(Gf a, Gf b) { return a.v != b.v; }
  friend bool operator<(Gf a, Gf b) { return a.v < b.v; }

  Gf inv() const {
    require(v != 0, "field", "division by zero in GF(p)");
    // p is tiny: scan
    for (int x = 1; x < P; ++x)
      if ((x * v) % P == 1) return Gf(x);
    fail("field", "no inverse found");
  }
  friend Gf operator/(Gf a, Gf b) { return a * b.inv(); }

  // canonical residue in [0, p)
  u64 digit() const { return u64(v); }
  static u64 digit_base() { return u64(P); }

  std::string str() const { return std::to_string(int(v)); }
  static Gf parse(const std::string& s) {
    try {
      long long x = std::stoll(s);
      return Gf(x);
    } catch (const std::exception&) {
      fail("parse", "bad GF(" + std::to_string(P) + ") scalar: " + s);
    }
  }
  static std::vector<Gf> elements() {
    std::vector<Gf> r;
    for (int i = 0; i < P; ++i) r.push_back(Gf(i));
    return r;
  }
  static Gf half() {
    require(P != 2, "field", "1/2 undefined in characteristic 2");
    return Gf(1) / Gf(2);
  }
};

struct Rat {
  static constexpr bool is_finite = false;
  static constexpr int characteristic = 0;

  boost::multiprecision::cpp_rational v = 0;

  Rat() = default;
  explicit Rat(long long x) : v(x) {}
  explicit Rat(boost::multiprecision::cpp_rational x) : v(std::move(x)) {}

  bool is_zero() const { return v == 0; }
  bool is_one() const { return v == 1; }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.v + b.v); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.v - b.v); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.v * b.v); }
  Rat operator-() const { return Rat(-v); }
  Rat& operator+=(const Rat& b) { v += b.v; return *this; }
  Rat& operator-=(const Rat& b) { v -= b.v; return *this; }
  Rat& operator*=(const Rat& b) { v *= b.v; return *this; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.v == b.v; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v != b.v; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v < b.v; }

  Rat inv() const {
    require(v != 0, "field", "division by zero in Q");
    return Rat(1 / v);
  }
  friend Rat operator/(const Rat& a, const Rat& b) { return a * b.inv(); }

  u64 digit() const { fail("field", "rational scalars cannot be key-packed"); }
  static u64 digit_base() { fail("field", "rational scalars have no digit base"); }

  std::string str() const {
    using boost::multiprecision::cpp_int;
    cpp_int n = numerator(v), d = denominator(v);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
  }
  static Rat parse(const std::string& s) {
    auto slash = s.find('/');
    try {
      using boost::multiprecision::cpp_int;
      if (slash == std::string::npos) return Rat(boost::multiprecision::cpp_rational(cpp_int(s)));
      cpp_int n(s.substr(0, slash)), d(s.substr(slash + 1));
      require(d != 0, "parse", "zero denominator: " + s);
      return Rat(boost::multiprecision::cpp_rational(n, d));
    } catch (const error&) {
      throw;
    } catch (const std::exception&) {
      fail("parse", "bad rational scalar: " + s);
    }
  }
  static Rat half() { return Rat(boost::multiprecision::cpp_rational(1, 2)); }
};

// Runtime field descriptor (closed set: the CLI/JSON surface admits gf2, gf3,
// gf5 and the rationals).
struct FieldDesc {
  enum Kind { GFP, RATIONAL } kind = GFP;
  int p = 3;

  std::string name() const { return kind == RATIONAL ? "rat" : "gf" + std::to_string(p); }
  static FieldDesc gf(int p) {
    require(p == 2 || p == 3 || p == 5, "field", "unsupported prime field GF(" + std::to_string(p) + "); supported: 2, 3, 5");
    return FieldDesc{GFP, p};
  }
  static FieldDesc rational() { return FieldDesc{RATIONAL, 0}; }
  static FieldDesc parse(const std::string& s) {
    if (s == "rat") return rational();
    if (s == "gf2") return gf(2);
    if (s == "gf3") return gf(3);
    if (s == "gf5") return gf(5);
    fail("usage", "unknown field '" + s + "' (expected gf2|gf3|gf5|rat)");
  }
  friend bool operator==(const FieldDesc& a, const FieldDesc& b) {
    return a.kind == b.kind && (a.kind == RATIONAL || a.p == b.p);
  }
};

template <class Fn>
decltype(auto) with_field(const FieldDesc& fd, Fn&& fn) {
  if (fd.kind == FieldDesc::RATIONAL) return fn(Rat{});
  switch (fd.p) {
    case 2: return fn(Gf<2>{});
    case 3: return fn(Gf<3>{});
    case 5: return fn(Gf<5>{});
    default: fail("field", "unsupported prime " + std::to_string(fd.p));
  }
}

template <class K>
FieldDesc field_desc_of() {
  if constexpr (K::is_finite) return FieldDesc::gf(K::characteristic);
  else return FieldDesc::rational();
}

}  // namespace grasmap
