#pragma once

// Exact rationals, their textual form, rational enumerations and
// irrational cuts a + b*sqrt(2).

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stratkit {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// "p/q" in lowest terms, or "p" when q = 1.
std::string to_string(const Rational& r);
/// Accepts "p", "-p", "p/q" (q > 0).  Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// max(|numerator|, denominator).
Integer height(const Rational& r);

/// Successive elements of the Calkin-Wilf sequence 1, 1/2, 2, 1/3, 3/2, ...
class CalkinWilf {
 public:
  const Rational& next();

 private:
  Rational x_{0};
};

/// 0, 1, -1, 1/2, -1/2, 2, -2, ...: every rational exactly once.
class RationalEnumeration {
 public:
  const Rational& at(std::size_t i);

 private:
  CalkinWilf cw_;
  std::deque<Rational> cache_;  // deque: references stay valid as it grows
};

/// 0, then in stages n = 1, 2, ... the dyadics m/2^k with |value| <= n and
/// k < n not seen before, ordered by (k, |value|, sign).
class DyadicEnumeration {
 public:
  const Rational& at(std::size_t i);

 private:
  void next_stage();
  std::size_t stage_ = 0;
  std::deque<Rational> cache_;
};

/// The irrational number a + b*sqrt(2), b != 0, compared exactly.
class Cut {
 public:
  Cut() = default;  // sqrt(2) - 2
  Cut(Rational a, Rational b);

  /// q < a + b*sqrt(2), i.e. q lies in the lower set of the cut.
  bool contains(const Rational& q) const;
  Cut shifted(const Rational& r) const { return Cut(a_ + r, b_); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  std::string describe() const;

 private:
  Rational a_{-2};
  Rational b_{1};
};

/// An open interval whose endpoints are rationals or cuts; several lower
/// (upper) bounds mean their maximum (minimum).
struct OpenInterval {
  std::vector<Rational> lo, hi;
  std::vector<Cut> lo_cut, hi_cut;

  bool contains(const Rational& q) const;
  OpenInterval negated() const;
};

/// The element of (iv) with least index in RationalEnumeration, found by a
/// Stern-Brocot descent with batched steps; nullopt if the interval is
/// empty.  Two cut bounds on the same side are not supported.
std::optional<Rational> least_rational_in(const OpenInterval& iv);

}  // namespace stratkit
