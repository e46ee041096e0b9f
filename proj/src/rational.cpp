#include "stratkit/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <functional>
#include <tuple>

namespace stratkit {

std::string to_string(const Rational& r) {
  const Integer n = numerator(r), d = denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

namespace {
Integer parse_integer(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  if (i == s.size()) throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  Integer v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? Integer(-v) : v;
}
}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const Integer p = parse_integer(text.substr(0, slash), text);
  const std::string_view qs = text.substr(slash + 1);
  if (!qs.empty() && (qs[0] == '-' || qs[0] == '+'))
    throw std::invalid_argument("denominator must be unsigned in '" + std::string(text) + "'");
  const Integer q = parse_integer(qs, text);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(p, q);
}

Integer height(const Rational& r) {
  Integer n = abs(numerator(r));
  return std::max(n, Integer(denominator(r)));
}

const Rational& CalkinWilf::next() {
  // Newman: x -> 1 / (2 floor(x) - x + 1), starting from 0 gives 1.
  const Integer fl = numerator(x_) / denominator(x_);
  x_ = Rational(1) / (Rational(2 * fl) - x_ + 1);
  return x_;
}

const Rational& RationalEnumeration::at(std::size_t i) {
  if (cache_.empty()) cache_.emplace_back(0);
  while (cache_.size() <= i) {
    const Rational q = cw_.next();
    cache_.push_back(q);
    cache_.push_back(-q);
  }
  return cache_[i];
}

void DyadicEnumeration::next_stage() {
  ++stage_;
  const long n = static_cast<long>(stage_);
  // (k, |value|, sign) order; the value m / 2^k is new iff m is odd or k = 0.
  for (long k = 0; k < n; ++k) {
    const long den = 1L << k;
    const long prev_bound = (n - 1) * den;
    for (long m = 1; m <= n * den; ++m) {
      if (k > 0 && m % 2 == 0) continue;
      // seen before iff it fit in the previous stage (k < n - 1 and |v| <= n - 1)
      if (k < n - 1 && m <= prev_bound) continue;
      cache_.emplace_back(Rational(m, den));
      cache_.emplace_back(Rational(-m, den));
    }
  }
}

const Rational& DyadicEnumeration::at(std::size_t i) {
  if (cache_.empty()) cache_.emplace_back(0);
  while (cache_.size() <= i) next_stage();
  return cache_[i];
}

Cut::Cut(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
  if (b_ == 0) throw std::invalid_argument("cut coefficient of sqrt(2) must be nonzero");
}

bool Cut::contains(const Rational& q) const {
  if (b_ > 0) {
    const Rational r = (q - a_) / b_;  // q < c  iff  r < sqrt 2
    return r < 0 || r * r < 2;
  }
  const Rational s = (q - a_) / -b_;  // q < c  iff  s < -sqrt 2
  return s < 0 && s * s > 2;
}

std::string Cut::describe() const {
  std::string s;
  if (a_ != 0) s = to_string(a_) + " + ";
  if (b_ != 1) s += to_string(b_) + "*";
  return s + "sqrt(2)";
}

bool OpenInterval::contains(const Rational& q) const {
  for (const auto& l : lo)
    if (!(l < q)) return false;
  for (const auto& h : hi)
    if (!(q < h)) return false;
  for (const auto& c : lo_cut)
    if (c.contains(q)) return false;
  for (const auto& c : hi_cut)
    if (!c.contains(q)) return false;
  return true;
}

OpenInterval OpenInterval::negated() const {
  OpenInterval n;
  for (const auto& h : hi) n.lo.push_back(-h);
  for (const auto& l : lo) n.hi.push_back(-l);
  for (const auto& c : hi_cut) n.lo_cut.emplace_back(-c.a(), -c.b());
  for (const auto& c : lo_cut) n.hi_cut.emplace_back(-c.a(), -c.b());
  return n;
}

namespace {

bool above_lo(const OpenInterval& iv, const Rational& q) {
  for (const auto& l : iv.lo)
    if (!(l < q)) return false;
  for (const auto& c : iv.lo_cut)
    if (c.contains(q)) return false;
  return true;
}

bool below_hi(const OpenInterval& iv, const Rational& q) {
  for (const auto& h : iv.hi)
    if (!(q < h)) return false;
  for (const auto& c : iv.hi_cut)
    if (!c.contains(q)) return false;
  return true;
}

bool nonempty(const OpenInterval& iv) {
  if (iv.lo_cut.size() > 1 || iv.hi_cut.size() > 1) throw std::invalid_argument("at most one cut bound per side");
  if (!iv.lo_cut.empty() && !iv.hi_cut.empty()) throw std::invalid_argument("cut bounds on both sides");
  for (const auto& l : iv.lo)
    if (!below_hi(iv, l)) return false;
  for (const auto& h : iv.hi)
    if (!above_lo(iv, h)) return false;
  return true;
}

// Least k >= 1 with pred(k); pred is monotone and eventually true.
Integer first_true(const std::function<bool(const Integer&)>& pred) {
  Integer hi = 1;
  while (!pred(hi)) hi *= 2;
  Integer lo = hi / 2;
  while (hi - lo > 1) {
    const Integer mid = (lo + hi) / 2;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

// Stern-Brocot descent; every element of iv is positive.  A run of k moves
// in one direction is taken at once.
Rational simplest_positive(const OpenInterval& iv) {
  Integer a = 0, b = 1, c = 1, d = 0;  // left a/b, right c/d
  while (true) {
    const Rational m(a + c, b + d);
    if (iv.contains(m)) return m;
    if (!above_lo(iv, m)) {
      const Integer k = first_true([&](const Integer& k) { return above_lo(iv, Rational(a + k * c, b + k * d)); });
      a += (k - 1) * c;
      b += (k - 1) * d;
    } else {
      const Integer k = first_true([&](const Integer& k) { return below_hi(iv, Rational(k * a + c, k * b + d)); });
      c += (k - 1) * a;
      d += (k - 1) * b;
    }
  }
}

}  // namespace

std::optional<Rational> least_rational_in(const OpenInterval& iv) {
  if (!nonempty(iv)) return std::nullopt;
  const Rational zero(0);
  if (iv.contains(zero)) return zero;
  if (above_lo(iv, zero)) {
    // every element is negative; the enumeration lists q before -q, and only
    // one of them can lie in the interval
    return -simplest_positive(iv.negated());
  }
  return simplest_positive(iv);
}

}  // namespace stratkit
