#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace coronas {

// Exact rational on 64-bit numerator/denominator, always reduced, den > 0.
// All geometric comparisons in this project go through Rat so that congruence
// tests never touch floating point. Intermediate products run in 128 bits and
// overflow of the reduced result throws instead of wrapping.
class Rat {
public:
  constexpr Rat() : num_(0), den_(1) {}
  Rat(std::int64_t n) : num_(n), den_(1) {}
  Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize_small(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  static Rat from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd_wide(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("rational overflow");
    Rat r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  Rat operator+(const Rat& o) const {
    return from_wide(wn() * o.den_ + __int128(o.num_) * den_, wd() * o.den_);
  }
  Rat operator-(const Rat& o) const {
    return from_wide(wn() * o.den_ - __int128(o.num_) * den_, wd() * o.den_);
  }
  Rat operator*(const Rat& o) const { return from_wide(wn() * o.num_, wd() * o.den_); }
  Rat operator/(const Rat& o) const {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(wn() * o.den_, wd() * o.num_);
  }
  Rat operator-() const {
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const { return wn() * o.den_ < __int128(o.num_) * den_; }
  bool operator<=(const Rat& o) const { return !(o < *this); }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return !(*this < o); }

  int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

private:
  __int128 wn() const { return num_; }
  __int128 wd() const { return den_; }

  static __int128 gcd_wide(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  }

  void normalize_small() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_;
  std::int64_t den_;
};

// Point with exact rational coordinates; dimension carried by the vector.
using RationalPoint = std::vector<Rat>;

inline Rat squared_distance(const RationalPoint& a, const RationalPoint& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("squared_distance: dimension mismatch");
  Rat acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rat d = a[i] - b[i];
    acc = acc + d * d;
  }
  return acc;
}

// z-component of (b-a) x (c-a); sign gives the side of c relative to line ab.
inline Rat cross2(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

struct RatHash {
  std::size_t operator()(const Rat& r) const {
    std::size_t h = std::hash<std::int64_t>()(r.num());
    h ^= std::hash<std::int64_t>()(r.den()) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

struct PointHash {
  std::size_t operator()(const RationalPoint& p) const {
    std::size_t h = p.size();
    RatHash rh;
    for (const Rat& r : p) h ^= rh(r) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace coronas
