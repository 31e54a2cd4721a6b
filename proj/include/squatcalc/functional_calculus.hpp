#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "squatcalc/quat_matrix.hpp"
#include "squatcalc/s_resolvent.hpp"
#include "squatcalc/s_spectrum.hpp"
#include "squatcalc/slice_function.hpp"

namespace squatcalc {

// Counterclockwise circle in the slice plane of `slice_unit`, center a + b*I.
struct ContourCircle {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

// System of admissible circles: together they enclose, within the chosen
// slice, every point x +- y*I of the target spectrum exactly once, enclose no
// excluded point, are pairwise disjoint, and keep distance >= radius_margin
// from the spectrum.
struct Contour {
  ImaginaryUnit slice_unit;
  std::vector<ContourCircle> circles;
  int nodes_per_circle = 64;  // starting node count; quadrature doubles from here
};

struct CalculusResult {
  QuatMatrix value;
  double error_estimate = 0.0;  // last successive difference of the node-doubling
  Contour contour;              // contour actually used; nodes_per_circle = converged count
};

namespace detail {

inline std::vector<std::pair<double, double>> sphere_plane_points(
    const std::vector<SpectralSphere>& spheres) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& sph : spheres) {
    pts.emplace_back(sph.x, sph.y);
    if (sph.y > 0.0) pts.emplace_back(sph.x, -sph.y);
  }
  return pts;
}

inline double point_dist(const std::pair<double, double>& a, const std::pair<double, double>& b) {
  return std::hypot(a.first - b.first, a.second - b.second);
}

}  // namespace detail

// Builds the contour for a spectrum report.  Geometry parameters all scale
// with the operator norm: radius_min = radius_margin = 1e-3*(1+norm_bound),
// default radius 0.5*(1+norm_bound).  Each sphere (x,y) contributes the slice
// points x + y*I and x - y*I; a circle is placed around each, with radius
//   min(half gap to the other points - half margin, half distance to the
//       nearest exclusion, default radius),
// floored at radius_min.  Points closer together than 4*radius_min are first
// merged into a single enclosing circle (congested spectra would otherwise
// force overlapping circles).  Throws ContourInfeasible when an exclusion sits
// within radius_min of the spectrum or when no admissible radius exists.
inline Contour build_contour(const SpectrumReport& spectrum, const ImaginaryUnit& slice_unit = {},
                             const std::vector<SpectralSphere>& exclusions = {}) {
  const double nb = spectrum.norm_bound;
  const double rmin = 1e-3 * (1.0 + nb);
  const double margin = rmin;
  const double rdef = 0.5 * (1.0 + nb);

  const auto pts = detail::sphere_plane_points(spectrum.spheres);
  if (pts.empty()) throw ContourInfeasibleError("build_contour: empty spectrum");
  const auto ex = detail::sphere_plane_points(exclusions);

  for (const auto& p : pts)
    for (const auto& e : ex)
      if (detail::point_dist(p, e) < rmin)
        throw ContourInfeasibleError(
            "build_contour: an exclusion lies within radius_min of the spectrum");

  const std::vector<int> label = detail::link_clusters(pts, 4.0 * rmin);
  const int nclusters = 1 + *std::max_element(label.begin(), label.end());

  Contour contour;
  contour.slice_unit = slice_unit;
  for (int cl = 0; cl < nclusters; ++cl) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (std::size_t m = 0; m < pts.size(); ++m) {
      if (label[m] != cl) continue;
      xlo = std::min(xlo, pts[m].first);
      xhi = std::max(xhi, pts[m].first);
      ylo = std::min(ylo, pts[m].second);
      yhi = std::max(yhi, pts[m].second);
    }
    const std::pair<double, double> center{0.5 * (xlo + xhi), 0.5 * (ylo + yhi)};
    double r_core = 0.0;
    double gap_spec = std::numeric_limits<double>::infinity();
    double gap_excl = gap_spec;
    for (std::size_t m = 0; m < pts.size(); ++m) {
      if (label[m] == cl) {
        r_core = std::max(r_core, detail::point_dist(pts[m], center));
        for (std::size_t o = 0; o < pts.size(); ++o)
          if (label[o] != cl) gap_spec = std::min(gap_spec, detail::point_dist(pts[m], pts[o]));
        for (const auto& e : ex) gap_excl = std::min(gap_excl, detail::point_dist(pts[m], e));
      }
    }
    double pad = std::min({0.5 * gap_spec - 0.5 * margin, 0.5 * gap_excl, rdef});
    pad = std::max(pad, rmin);
    contour.circles.push_back({center.first, center.second, r_core + pad});
  }

  // Validate the admissibility invariants the quadrature relies on.
  for (int cl = 0; cl < nclusters; ++cl) {
    const auto& c = contour.circles[cl];
    const std::pair<double, double> cc{c.cx, c.cy};
    for (std::size_t m = 0; m < pts.size(); ++m) {
      const double d = detail::point_dist(pts[m], cc);
      if (label[m] == cl) {
        if (d > c.radius - 0.5 * margin)
          throw ContourInfeasibleError("build_contour: cluster point too close to its circle");
      } else if (d < c.radius + margin) {
        throw ContourInfeasibleError("build_contour: circle approaches a foreign spectral point");
      }
    }
    for (const auto& e : ex)
      if (detail::point_dist(e, cc) < c.radius + 0.5 * margin)
        throw ContourInfeasibleError("build_contour: circle approaches an exclusion");
  }

  std::sort(contour.circles.begin(), contour.circles.end(),
            [](const ContourCircle& a, const ContourCircle& b) {
              return a.cx != b.cx ? a.cx < b.cx : a.cy < b.cy;
            });
  return contour;
}

// Scales every circle radius by `factor`, clamped so the contour stays
// admissible: each scaled circle keeps all originally-outside spectral points
// and all exclusions strictly outside (at 95% of their distance, less the
// margin).  Radii never shrink below the original.  Used by the
// contour-independence tests.
inline Contour scale_contour_radii(const Contour& base, double factor,
                                   const SpectrumReport& spectrum,
                                   const std::vector<SpectralSphere>& exclusions = {}) {
  const double margin = 1e-3 * (1.0 + spectrum.norm_bound);
  const auto pts = detail::sphere_plane_points(spectrum.spheres);
  const auto ex = detail::sphere_plane_points(exclusions);
  Contour out = base;
  for (auto& c : out.circles) {
    const std::pair<double, double> cc{c.cx, c.cy};
    double cap = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
      const double d = detail::point_dist(p, cc);
      if (d > c.radius) cap = std::min(cap, 0.95 * (d - margin));
    }
    for (const auto& e : ex) {
      const double d = detail::point_dist(e, cc);
      if (d > c.radius) cap = std::min(cap, 0.95 * (d - margin));
    }
    c.radius = std::max(c.radius, std::min(factor * c.radius, cap));
  }
  return out;
}

struct QuadratureOptions {
  int max_nodes = 16384;
  double tol = 1e-10;
};

// Contour-integral functional calculus
//
//     f(T) = (1/2pi) \oint S^(-1)(s,T) ds_I f(s)
//
// over the given circles.  ds_I = ds * (-I); on a circle s(t) = c + r e^{It}
// this makes the node weight r e^{It} dt (calibration anchored by f == 1
// giving the identity).  The integrand is evaluated in the fixed order
// S^(-1)(s,T) * weight * f(s) -- never reordered, H is noncommutative.
// Composite trapezoid per circle with node doubling from
// contour.nodes_per_circle up to max_nodes; converged when two successive
// levels differ by < tol * (1 + ||result||), else QuadratureFailure.
inline CalculusResult f_of_T(const QuatMatrix& t, const SliceFunction& f, const Contour& contour,
                             const QuadratureOptions& opts = {}) {
  if (contour.circles.empty()) throw ContourInfeasibleError("f_of_T: contour has no circles");
  const int n = t.n();
  const CMat x = to_embedding(t);
  const CMat x2 = x * x;
  const ImaginaryUnit& unit = contour.slice_unit;

  int nodes = std::max(8, contour.nodes_per_circle);
  CMat prev;
  bool have_prev = false;
  double delta = std::numeric_limits<double>::infinity();
  while (true) {
    CMat total = CMat::Zero(2 * n, 2 * n);
    for (const auto& c : contour.circles) {
      CMat csum = CMat::Zero(2 * n, 2 * n);
      for (int m = 0; m < nodes; ++m) {
        const double th = 2.0 * std::numbers::pi * m / nodes;
        const double ca = std::cos(th), sa = std::sin(th);
        const Quaternion s = slice_value(c.cx + c.radius * ca, c.cy + c.radius * sa, unit);
        CMat q = x2 - (2.0 * s.w) * x;
        q.diagonal().array() += s.norm_sq();
        const CMat rhs = x - scalar_embedding(s.conj(), n);
        const CMat neg_kernel = Eigen::PartialPivLU<CMat>(q).solve(rhs);  // = -S^(-1)(s,T)
        const Quaternion weight = slice_value(c.radius * ca, c.radius * sa, unit);
        csum += neg_kernel * scalar_embedding(weight * f.eval(s), n);
      }
      total -= csum / static_cast<double>(nodes);
    }
    if (have_prev) {
      const double value_scale = total.norm() / std::numbers::sqrt2;
      delta = (total - prev).norm() / std::numbers::sqrt2;
      if (delta < opts.tol * (1.0 + value_scale)) {
        CalculusResult result;
        result.value = from_embedding(total);
        result.error_estimate = delta;
        result.contour = contour;
        result.contour.nodes_per_circle = nodes;
        return result;
      }
    }
    prev = total;
    have_prev = true;
    if (2 * nodes > opts.max_nodes) throw QuadratureFailureError(delta);
    nodes *= 2;
  }
}

// Auto-contour variant: circles around sigma_S(T), excluding the poles of f.
inline CalculusResult f_of_T(const QuatMatrix& t, const SliceFunction& f,
                             const ImaginaryUnit& slice_unit = {},
                             const QuadratureOptions& opts = {}) {
  return f_of_T(t, f, build_contour(s_spectrum(t), slice_unit, f.poles()), opts);
}

struct UnboundedResult {
  CalculusResult transform_route;  // phi(A) with A = (T-kI)^(-1), phi(p) = f(p^(-1)+k)
  CalculusResult direct_route;     // f(inf) I  -  ccw integral around {k} and the poles of f
  double k = 0.0;
  double discrepancy = 0.0;  // operator-norm distance between the two values
};

// Unbounded-type calculus for functions regular at infinity, evaluated two
// independent ways and cross-checked:
//
//  * transform route: f(T) = phi(A) with the bounded calculus applied to
//    A = (T - kI)^(-1);
//  * direct route: f(T) = f(inf) I + (1/2pi) \oint S^(-1)(s,T) ds_I f(s),
//    where the boundary encircles the *complement* holes of the domain (the
//    point k and the pole spheres of f) clockwise; equivalently, and as
//    implemented, f(inf) I  minus  the counterclockwise integral around those
//    holes.
//
// k must be a real point of the resolvent set, clear of the poles of f; when
// absent it is scanned from ceil(||T||)+1 outward in unit steps.
inline UnboundedResult f_of_T_unbounded(const QuatMatrix& t, const SliceFunction& f,
                                        std::optional<double> k_opt = std::nullopt,
                                        const ImaginaryUnit& slice_unit = {},
                                        const QuadratureOptions& opts = {}) {
  if (!f.value_at_infinity())
    throw ContractError("f_of_T_unbounded: f has no declared value at infinity");
  const SpectrumReport rep = s_spectrum(t);
  const double nb = rep.norm_bound;
  const std::vector<SpectralSphere> poles = f.poles();
  const double rmin = 1e-3 * (1.0 + nb);

  const auto clears_poles = [&](double k) {
    for (const auto& sph : poles)
      if (std::hypot(sph.x - k, sph.y) < 2.0 * rmin) return false;
    return true;
  };

  double k = 0.0;
  if (k_opt) {
    k = *k_opt;
    const ResolventCertificate cert = in_resolvent_set(t, Quaternion(k));
    if (!cert.in_resolvent) throw NotInResolventSetError(cert.pencil_sigma_min);
    if (!clears_poles(k))
      throw ResolventPointError("f_of_T_unbounded: k collides with a pole of f");
  } else {
    bool found = false;
    for (int step = 0; step < 20 && !found; ++step) {
      const double cand = std::ceil(nb) + 1.0 + step;
      if (in_resolvent_set(t, Quaternion(cand)).in_resolvent && clears_poles(cand)) {
        k = cand;
        found = true;
      }
    }
    if (!found)
      throw ResolventPointError("f_of_T_unbounded: no admissible real resolvent point found");
  }

  QuatMatrix tk = t;
  for (int d = 0; d < t.n(); ++d) tk.at(d, d) -= Quaternion(k);
  const QuatMatrix a = invert(tk);
  const SliceFunction phi = SliceFunction::transformed(f, k);

  UnboundedResult out;
  out.k = k;
  out.transform_route = f_of_T(a, phi, build_contour(s_spectrum(a), slice_unit, phi.poles()), opts);

  SpectrumReport holes;
  holes.norm_bound = nb;  // keeps contour length scales consistent with T
  holes.spheres.push_back({k, 0.0, 1});
  for (const auto& sph : poles) holes.spheres.push_back(sph);
  const CalculusResult hole_integral = f_of_T(t, f, build_contour(holes, slice_unit, rep.spheres), opts);

  out.direct_route.value = QuatMatrix::scalar(*f.value_at_infinity(), t.n()) - hole_integral.value;
  out.direct_route.error_estimate = hole_integral.error_estimate;
  out.direct_route.contour = hole_integral.contour;
  out.discrepancy = op_norm(out.transform_route.value - out.direct_route.value);
  return out;
}

struct TransformIdentityResiduals {
  double primary = 0.0;    // || S^(-1)(s,T) - (p I - S^(-1)(p,A) p^2) ||
  double companion = 0.0;  // || S^(-1)(s,T) + A S^(-1)(p,A) p ||
};

// Exactness check of the kernel transformation law under p = (s-k)^(-1),
// A = (T-kI)^(-1).  Both operator identities hold wherever all kernels exist.
inline TransformIdentityResiduals transform_identity_residual(const QuatMatrix& t,
                                                              const Quaternion& s, double k) {
  const Quaternion diff = s - Quaternion(k);
  if (diff.norm_sq() == 0.0) throw std::domain_error("transform_identity_residual: s == k");
  const QuatMatrix rt = s_resolvent(t, s);
  QuatMatrix tk = t;
  for (int d = 0; d < t.n(); ++d) tk.at(d, d) -= Quaternion(k);
  const QuatMatrix a = invert(tk);
  const Quaternion p = diff.inverse();
  const QuatMatrix ra = s_resolvent(a, p);

  QuatMatrix rhs1 = QuatMatrix::scalar(p, t.n()) - scal_r(ra, p * p);
  QuatMatrix rhs2 = scal_r(a * ra, p);
  TransformIdentityResiduals out;
  out.primary = op_norm(rt - rhs1);
  out.companion = op_norm(rt + rhs2);
  return out;
}

struct LemmaResiduals {
  // residuals of the four scalar identities satisfied by p = (s-k)^(-1)
  double real_part = 0.0;       // s0 |p|^2 = k |p|^2 + p0
  double modulus = 0.0;         // |p|^2 |s|^2 = k^2 |p|^2 + 2 p0 k + 1
  double inverse_square = 0.0;  // (2k - 2 s0 + conj(p)^(-1)) conj(p)/|p|^2 = -p^(-2)
  double annihilation = 0.0;    // [conj(s) + (|s|^2-k^2-k conj(p)^(-1)) D^(-1)] D conj(p) = 0
  double real_part_scale = 1.0;
  double modulus_scale = 1.0;
  double inverse_square_scale = 1.0;
  double annihilation_scale = 1.0;
  bool annihilation_skipped = false;  // D = 2k - 2 s0 + conj(p)^(-1) numerically zero
};

inline LemmaResiduals lemma_identities_residual(const Quaternion& s, double k) {
  const Quaternion diff = s - Quaternion(k);
  if (diff.norm_sq() == 0.0) throw std::domain_error("lemma_identities_residual: s == k");
  const Quaternion p = diff.inverse();
  const double p0 = p.w, s0 = s.w, pn2 = p.norm_sq(), sn2 = s.norm_sq();

  LemmaResiduals r;
  r.real_part = std::abs(s0 * pn2 - (k * pn2 + p0));
  r.real_part_scale = std::abs(s0 * pn2) + std::abs(k * pn2) + std::abs(p0) + 1.0;

  r.modulus = std::abs(pn2 * sn2 - (k * k * pn2 + 2.0 * p0 * k + 1.0));
  r.modulus_scale = std::abs(pn2 * sn2) + std::abs(k * k * pn2) + std::abs(2.0 * p0 * k) + 2.0;

  const Quaternion pbar = p.conj();
  const Quaternion pbar_inv = pbar.inverse();
  const Quaternion d = Quaternion(2.0 * k - 2.0 * s0) + pbar_inv;  // analytically -(s-k)
  const Quaternion lhs = d * (pbar / pn2);
  const Quaternion p_inv_sq = p.inverse() * p.inverse();
  r.inverse_square = (lhs + p_inv_sq).norm();
  r.inverse_square_scale = lhs.norm() + p_inv_sq.norm() + 1.0;

  if (d.norm() < 1e-12 * (1.0 + s.norm() + std::abs(k))) {
    r.annihilation_skipped = true;
  } else {
    const Quaternion m = Quaternion(sn2 - k * k) - k * pbar_inv;
    const Quaternion e = s.conj() + m * d.inverse();
    r.annihilation = (e * d * pbar).norm();
    r.annihilation_scale = (s.conj() * d * pbar).norm() + (m * pbar).norm() + 1.0;
  }
  return r;
}

struct InverseSeriesResult {
  QuatMatrix value;
  int n_max = 0;
  double axis_bound = 0.0;  // the axis truncation R
  int nodes = 0;
  std::vector<Quaternion> moments;  // F_0 .. F_{n_max}
};

// Inverse-power expansion  f(T) ~= sum_{n=0..n_max} T^(-n-1) F_n  with axis
// moments
//
//     F_n = (1/2pi) \int_{-R}^{R} (I u)^n f(I u) du
//
// (a segment of the imaginary axis, traversed downward, with ds_I = ds (-I)
// absorbed into the sign).  Experimental/diagnostic: the series
// behind it converges only where |u| < 1/||T^(-1)||, so for larger R the
// partial sums need not approach f(T); callers should sweep (n_max, R, nodes)
// and watch the trend.  Requires T invertible.
inline InverseSeriesResult f_of_T_inverse_series(const QuatMatrix& t, const SliceFunction& f,
                                                 int n_max = 40, double axis_bound = 100.0,
                                                 int nodes = 4096,
                                                 const ImaginaryUnit& slice_unit = {}) {
  if (nodes < 2) throw std::invalid_argument("f_of_T_inverse_series: nodes must be >= 2");
  if (n_max < 0) throw std::invalid_argument("f_of_T_inverse_series: n_max must be >= 0");
  const QuatMatrix tinv = invert(t);

  std::vector<Quaternion> mom(static_cast<std::size_t>(n_max) + 1, Quaternion::zero());
  const double du = 2.0 * axis_bound / nodes;
  for (int m = 0; m <= nodes; ++m) {
    const double u = -axis_bound + m * du;
    const double wgt = (m == 0 || m == nodes) ? 0.5 : 1.0;
    const Quaternion su = slice_value(0.0, u, slice_unit);
    const Quaternion fv = f.eval(su);
    Quaternion pw = Quaternion::one();
    for (int n = 0; n <= n_max; ++n) {
      mom[n] += (wgt * du) * (pw * fv);
      pw = pw * su;
    }
  }
  for (auto& q : mom) q = q / (2.0 * std::numbers::pi);

  QuatMatrix acc = QuatMatrix::zero(t.n());
  QuatMatrix tp = tinv;
  for (int n = 0; n <= n_max; ++n) {
    acc += scal_r(tp, mom[n]);
    if (n < n_max) tp = tp * tinv;
  }

  InverseSeriesResult out;
  out.value = acc;
  out.n_max = n_max;
  out.axis_bound = axis_bound;
  out.nodes = nodes;
  out.moments = std::move(mom);
  return out;
}

}  // namespace squatcalc
