#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace gifs {

// Closed interval [lower, upper] over a floating-point scalar. Products and
// powers are widened outward by one ulp per operation so that enclosures stay
// conservative under round-to-nearest.
template <typename Scalar>
struct Interval {
  Scalar lower{};
  Scalar upper{};

  constexpr Interval() = default;
  constexpr explicit Interval(Scalar v) : lower(v), upper(v) {}
  constexpr Interval(Scalar lo, Scalar hi) : lower(lo), upper(hi) {}

  Scalar width() const { return upper - lower; }
  Scalar mid() const { return lower / 2 + upper / 2; }
  bool contains(Scalar v) const { return lower <= v && v <= upper; }
  bool contains(const Interval& o) const { return lower <= o.lower && o.upper <= upper; }
  bool intersects(const Interval& o) const { return lower <= o.upper && o.lower <= upper; }
};

namespace detail {
template <typename Scalar>
Scalar down(Scalar v) {
  if (v == Scalar(0) || !std::isfinite(v)) return v;
  return std::nextafter(v, -std::numeric_limits<Scalar>::infinity());
}
template <typename Scalar>
Scalar up(Scalar v) {
  if (v == Scalar(0) || !std::isfinite(v)) return v;
  return std::nextafter(v, std::numeric_limits<Scalar>::infinity());
}
}  // namespace detail

template <typename Scalar>
Interval<Scalar> hull(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  return {std::min(a.lower, b.lower), std::max(a.upper, b.upper)};
}

template <typename Scalar>
Interval<Scalar> operator+(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  return {detail::down(a.lower + b.lower), detail::up(a.upper + b.upper)};
}

// Product of nonnegative intervals (all weights in this library are >= 0).
template <typename Scalar>
Interval<Scalar> operator*(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  return {detail::down(a.lower * b.lower), detail::up(a.upper * b.upper)};
}

// x^s for a nonnegative interval and s >= 0; 0^0 is 1.
template <typename Scalar>
Interval<Scalar> pow(const Interval<Scalar>& a, Scalar s) {
  if (s == Scalar(0)) return Interval<Scalar>(Scalar(1));
  return {detail::down(std::pow(a.lower, s)), detail::up(std::pow(a.upper, s))};
}

template <typename Scalar>
Interval<Scalar> log(const Interval<Scalar>& a) {
  return {detail::down(std::log(a.lower)), detail::up(std::log(a.upper))};
}

}  // namespace gifs
