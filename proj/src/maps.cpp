#include "gifs/maps.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gifs/error.hpp"
#include "gifs/interval.hpp"

namespace gifs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex to_complex(const Point& p) { return {p.x(), p.y()}; }
Point to_point(Complex z) { return {z.real(), z.imag()}; }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_domain(const MapSpec& map, const Point& x) {
  if (map.domain && !contains(*map.domain, x, 2, 1e-9)) {
    std::ostringstream os;
    os << "point (" << x.x() << ", " << x.y() << ") outside the domain of " << describe(map);
    fail(ErrorCode::DomainViolation, os.str());
  }
}

// The affine-in-z argument of the inversion: z -> a + c z.
struct Inversion {
  Complex a;
  double c;
};

std::optional<Inversion> inversion_of(const MapSpec& map) {
  if (auto m = std::get_if<MoebiusCF>(&map.kind)) return Inversion{m->e, 1.0};
  if (auto m = std::get_if<PerturbedMoebiusCF>(&map.kind))
    return Inversion{m->e + 0.5 - 0.5 * m->eps, m->eps};
  return std::nullopt;
}

// Affine part for the linear variants.
std::optional<std::pair<Eigen::Matrix2d, Point>> linear_of(const MapSpec& map) {
  return std::visit(
      overloaded{
          [](const Similarity& m) -> std::optional<std::pair<Eigen::Matrix2d, Point>> {
            return std::pair{Eigen::Matrix2d(m.ratio * m.isometry), m.translation};
          },
          [](const ConformalAffine& m) -> std::optional<std::pair<Eigen::Matrix2d, Point>> {
            return std::pair{m.M, m.b};
          },
          [](const PerturbedAffine& m) -> std::optional<std::pair<Eigen::Matrix2d, Point>> {
            return std::pair{m.matrix(), m.translation()};
          },
          [](const ConstantMap& m) -> std::optional<std::pair<Eigen::Matrix2d, Point>> {
            return std::pair{Eigen::Matrix2d::Zero().eval(), m.target};
          },
          [](const auto&) -> std::optional<std::pair<Eigen::Matrix2d, Point>> { return std::nullopt; },
      },
      map.kind);
}

// Disk {a + c z : z in ball} as a complex centre and radius.
std::pair<Complex, double> pre_image_disk(const Inversion& inv, const Ball& b) {
  return {inv.a + inv.c * to_complex(b.center), inv.c * b.radius};
}

double widen_up(double v) { return detail::up(detail::up(v)); }
double widen_down(double v) { return detail::down(detail::down(v)); }

}  // namespace

std::pair<double, double> singular_values(const Eigen::Matrix2d& m) {
  double f2 = m.squaredNorm();
  double det = std::abs(m.determinant());
  double disc = std::sqrt(std::max(f2 * f2 - 4 * det * det, 0.0));
  double hi = std::sqrt((f2 + disc) / 2);
  double lo = hi > 0 ? det / hi : 0.0;
  return {hi, lo};
}

Point apply(const MapSpec& map, const Point& x) {
  check_domain(map, x);
  if (auto inv = inversion_of(map)) {
    Complex w = inv->a + inv->c * to_complex(x);
    if (std::abs(w) == 0) fail(ErrorCode::DomainViolation, "pole of " + describe(map));
    return to_point(1.0 / w);
  }
  auto [M, b] = *linear_of(map);
  return M * x + b;
}

double derivative_norm(const MapSpec& map, const Point& x) {
  check_domain(map, x);
  if (auto s = std::get_if<Similarity>(&map.kind)) return s->ratio;
  if (auto inv = inversion_of(map)) return inv->c / std::norm(inv->a + inv->c * to_complex(x));
  return singular_values(linear_of(map)->first).first;
}

double derivative_conorm(const MapSpec& map, const Point& x) {
  check_domain(map, x);
  if (auto s = std::get_if<Similarity>(&map.kind)) return s->ratio;
  if (auto inv = inversion_of(map)) return inv->c / std::norm(inv->a + inv->c * to_complex(x));
  return singular_values(linear_of(map)->first).second;
}

bool is_degenerate(const MapSpec& map) {
  if (std::holds_alternative<ConstantMap>(map.kind)) return true;
  if (inversion_of(map)) return false;
  return singular_values(linear_of(map)->first).second == 0.0;
}

bool is_conformal(const MapSpec& map, double tol) {
  if (inversion_of(map) || std::holds_alternative<ConstantMap>(map.kind)) return true;
  auto [hi, lo] = singular_values(linear_of(map)->first);
  return hi - lo <= tol * std::max(hi, 1.0);
}

DerivativeRange derivative_range_over_set(const MapSpec& map, const Shape& set, NormSelector sel,
                                          int grid) {
  if (auto inv = inversion_of(map)) {
    if (auto b = std::get_if<Ball>(&set)) {
      auto [w, rho] = pre_image_disk(*inv, *b);
      double d = std::abs(w);
      double lo = inv->c / ((d + rho) * (d + rho));
      double hi = d > rho ? inv->c / ((d - rho) * (d - rho)) : kInf;
      return {widen_down(lo), widen_up(hi), true};
    }
    // Sampled over a grid, padded by the gradient bound times the cell radius.
    const Box& box = std::get<Box>(set);
    Ball enc = enclosing_ball(box, 2);
    double dmin = std::abs(inv->a + inv->c * to_complex(enc.center)) - inv->c * enc.radius;
    if (dmin <= 0) return {0.0, kInf, false};
    double grad = 2 * inv->c * inv->c / (dmin * dmin * dmin);
    double cell = (box.hi - box.lo).norm() / std::max(grid, 1);
    double lo = kInf, hi = 0;
    for (const auto& p : sample_points(box, 2, grid)) {
      double v = inv->c / std::norm(inv->a + inv->c * to_complex(p));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {std::max(lo - grad * cell / 2, 0.0), hi + grad * cell / 2, false};
  }
  if (auto s = std::get_if<Similarity>(&map.kind)) return {s->ratio, s->ratio, true};
  auto [hi, lo] = singular_values(linear_of(map)->first);
  double v = sel == NormSelector::Norm ? hi : lo;
  return {v, v, true};
}

Shape image_enclosure(const MapSpec& map, const Shape& set, bool* exact) {
  if (exact) *exact = true;
  if (auto inv = inversion_of(map)) {
    Ball b = enclosing_ball(set, 2);
    if (exact && std::holds_alternative<Box>(set)) *exact = false;
    auto [w, rho] = pre_image_disk(*inv, b);
    double q = std::norm(w) - rho * rho;
    if (q <= 0) fail(ErrorCode::DomainViolation, "set meets the pole of " + describe(map));
    return Ball{to_point(std::conj(w) / q), widen_up(rho / q)};
  }
  auto [M, t] = *linear_of(map);
  if (auto b = std::get_if<Ball>(&set)) {
    auto [hi, lo] = singular_values(M);
    if (exact && hi - lo > 1e-12 * std::max(hi, 1.0)) *exact = false;
    return Ball{M * b->center + t, widen_up(hi * b->radius)};
  }
  const Box& box = std::get<Box>(set);
  Point corners[4] = {box.lo, {box.hi.x(), box.lo.y()}, {box.lo.x(), box.hi.y()}, box.hi};
  Box out{Point::Constant(kInf), Point::Constant(-kInf)};
  for (const auto& c : corners) {
    Point y = M * c + t;
    out.lo = out.lo.cwiseMin(y);
    out.hi = out.hi.cwiseMax(y);
  }
  bool axis_aligned = (std::abs(M(0, 1)) == 0 && std::abs(M(1, 0)) == 0) ||
                      (std::abs(M(0, 0)) == 0 && std::abs(M(1, 1)) == 0);
  if (exact && !axis_aligned) *exact = false;
  return out;
}

double log_lipschitz(const MapSpec& map, const Shape& set) {
  auto inv = inversion_of(map);
  if (!inv) return 0.0;
  Ball b = enclosing_ball(set, 2);
  auto [w, rho] = pre_image_disk(*inv, b);
  double dmin = std::abs(w) - rho;
  return dmin > 0 ? 2 * inv->c / dmin : kInf;
}

DistortionProfile distortion_profile(const std::vector<MapSpec>& family, const DistortionGeometry& geo) {
  DistortionProfile p;
  if (family.empty()) return p;
  p.beta = family.front().beta;
  for (const auto& m : family)
    if (m.beta != p.beta) fail(ErrorCode::MixedFamily, "maps declare different Hoelder exponents");

  double diam_o = diameter(geo.domain, geo.dim);
  for (const auto& m : family) {
    double L = log_lipschitz(m, geo.domain);
    // ratio of norms at two points is at most exp(L |x-y|)
    p.c_bd = std::max(p.c_bd, L * std::exp(L * diam_o));
  }
  if (p.c_bd == 0.0) return p;
  if (!std::isfinite(p.c_bd)) {
    p.c_BD = p.c_BDv = kInf;
    return p;
  }
  double rb = std::pow(geo.r, p.beta);
  double head = p.c_bd * std::pow(geo.c_MT, p.beta);
  double tail = head * std::pow(geo.sup_diam_U, p.beta);
  double prod = 1.0;
  for (double ri = 1.0; ri > 1e-18; ri *= rb) prod *= 1 + tail * ri;
  p.c_BD = head / (1 - rb) * prod;
  p.c_BDv = std::exp(p.c_BD * std::pow(geo.sup_diam_U, p.beta));
  return p;
}

std::string describe(const MapSpec& map) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Similarity& m) { os << "similarity(r=" << m.ratio << ")"; },
                 [&](const ConformalAffine& m) { os << "affine(|M|=" << singular_values(m.M).first << ")"; },
                 [&](const MoebiusCF& m) { os << "cf(e=" << m.e.real() << "+" << m.e.imag() << "i)"; },
                 [&](const PerturbedMoebiusCF& m) {
                   os << "cf_eps(e=" << m.e.real() << "+" << m.e.imag() << "i, eps=" << m.eps << ")";
                 },
                 [&](const ConstantMap& m) { os << "constant(" << m.target.x() << ", " << m.target.y() << ")"; },
                 [&](const PerturbedAffine& m) { os << "perturbed_affine(eps=" << m.eps << ")"; },
             },
             map.kind);
  return os.str();
}

}  // namespace gifs
