#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "squatcalc/errors.hpp"
#include "squatcalc/quaternion.hpp"
#include "squatcalc/s_spectrum.hpp"

namespace squatcalc {

// Image of the sphere x + y*S under s -> (s - k)^(-1) with k real: again a
// sphere (the transform maps slices to slices).
inline SpectralSphere phi_sphere_image(const SpectralSphere& sph, double k) {
  const double dx = sph.x - k;
  const double d = dx * dx + sph.y * sph.y;
  if (d == 0.0) throw std::domain_error("phi_sphere_image: sphere passes through k");
  return {dx / d, sph.y / d, sph.multiplicity};
}

namespace detail {

inline std::complex<double> eval_real_poly(const std::vector<double>& coeffs,
                                           std::complex<double> zeta) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t t = coeffs.size(); t-- > 0;) acc = acc * zeta + coeffs[t];
  return acc;
}

inline std::vector<double> trim_poly(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

// Roots of a real-coefficient polynomial via the companion matrix, folded to
// spheres (x, |y|).
inline std::vector<SpectralSphere> real_poly_root_spheres(const std::vector<double>& coeffs) {
  const std::vector<double> c = trim_poly(coeffs);
  const int deg = static_cast<int>(c.size()) - 1;
  std::vector<SpectralSphere> out;
  if (deg < 1) return out;
  CMat comp = CMat::Zero(deg, deg);
  for (int r = 1; r < deg; ++r) comp(r, r - 1) = 1.0;
  for (int r = 0; r < deg; ++r) comp(r, deg - 1) = -c[r] / c[deg];
  Eigen::ComplexEigenSolver<CMat> es(comp, false);
  if (es.info() != Eigen::Success) throw SolverError("root finding failed");
  std::vector<std::pair<double, double>> pts;
  double scale = 0.0;
  for (Eigen::Index m = 0; m < es.eigenvalues().size(); ++m) {
    const auto lam = es.eigenvalues()(m);
    pts.emplace_back(lam.real(), std::abs(lam.imag()));
    scale = std::max(scale, std::abs(lam));
  }
  const std::vector<int> cluster = link_clusters(pts, 1e-9 * (1.0 + scale));
  const int nclusters = 1 + *std::max_element(cluster.begin(), cluster.end());
  std::vector<double> sx(nclusters, 0.0), sy(nclusters, 0.0);
  std::vector<int> count(nclusters, 0);
  for (std::size_t m = 0; m < pts.size(); ++m) {
    sx[cluster[m]] += pts[m].first;
    sy[cluster[m]] += pts[m].second;
    ++count[cluster[m]];
  }
  for (int cl = 0; cl < nclusters; ++cl) {
    SpectralSphere sph;
    sph.x = sx[cl] / count[cl];
    sph.y = sy[cl] / count[cl];
    if (sph.y <= 1e-10) sph.y = 0.0;
    sph.multiplicity = sph.y == 0.0 ? count[cl] : (count[cl] + 1) / 2;
    out.push_back(sph);
  }
  std::sort(out.begin(), out.end(), [](const SpectralSphere& a, const SpectralSphere& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  return out;
}

}  // namespace detail

// A slice regular function given in one of several closed forms.  All variants
// restrict to holomorphic maps on every complex slice; "intrinsic" variants
// (real coefficients) additionally map each slice into itself, which is what
// the transform machinery of the calculus requires.
class SliceFunction {
 public:
  enum class Kind { Polynomial, PowerSeries, IntrinsicRational, Exp, ResolventShift, Transformed };

  // p(q) = sum_n q^n a_n with quaternion coefficients on the right.
  static SliceFunction polynomial(std::vector<Quaternion> coeffs) {
    SliceFunction f(Kind::Polynomial);
    f.coeffs_ = std::move(coeffs);
    while (!f.coeffs_.empty() && f.coeffs_.back() == Quaternion::zero()) f.coeffs_.pop_back();
    if (f.coeffs_.empty())
      f.vinf_ = Quaternion::zero();
    else if (f.coeffs_.size() == 1)
      f.vinf_ = f.coeffs_[0];
    return f;
  }

  // sum_n (q - center)^n a_n on the open disk |q - center| < radius.
  static SliceFunction power_series(std::vector<Quaternion> coeffs, double center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("power_series: radius must be positive");
    SliceFunction f(Kind::PowerSeries);
    f.coeffs_ = std::move(coeffs);
    f.center_ = center;
    f.radius_ = radius;
    return f;
  }

  // num(q) / den(q), both with real coefficients (an intrinsic function;
  // evaluated slice-wise through ordinary complex arithmetic).
  static SliceFunction intrinsic_rational(std::vector<double> num, std::vector<double> den) {
    SliceFunction f(Kind::IntrinsicRational);
    f.num_ = detail::trim_poly(std::move(num));
    f.den_ = detail::trim_poly(std::move(den));
    if (f.den_.empty()) throw std::invalid_argument("intrinsic_rational: zero denominator");
    const int dn = static_cast<int>(f.num_.size()) - 1;
    const int dd = static_cast<int>(f.den_.size()) - 1;
    if (dn < 0)
      f.vinf_ = Quaternion::zero();
    else if (dn < dd)
      f.vinf_ = Quaternion::zero();
    else if (dn == dd)
      f.vinf_ = Quaternion(f.num_.back() / f.den_.back());
    return f;
  }

  static SliceFunction exponential() { return SliceFunction(Kind::Exp); }

  // f(q) = (q - alpha)^(-1) with alpha real; vanishes at infinity.
  static SliceFunction resolvent_shift(double alpha) {
    SliceFunction f(Kind::ResolventShift);
    f.alpha_ = alpha;
    f.vinf_ = Quaternion::zero();
    return f;
  }

  // phi(p) = inner(p^(-1) + k), phi(0) = inner's value at infinity.  This is
  // the change of variable that carries the calculus for T over to
  // A = (T - k I)^(-1).  Requires inner to have a declared value at infinity.
  static SliceFunction transformed(SliceFunction inner, double k) {
    if (!inner.value_at_infinity())
      throw ContractError("transformed: inner function has no value at infinity");
    SliceFunction f(Kind::Transformed);
    f.k_ = k;
    f.inner_ = std::make_shared<const SliceFunction>(std::move(inner));
    try {
      f.vinf_ = f.inner_->eval(Quaternion(k));  // phi(inf) = lim f(1/p + k) = f(k)
    } catch (const std::domain_error&) {
      f.vinf_.reset();
    }
    return f;
  }

  Kind kind() const { return kind_; }

  Quaternion eval(const Quaternion& q) const {
    switch (kind_) {
      case Kind::Polynomial: {
        if (coeffs_.empty()) return Quaternion::zero();
        Quaternion acc = coeffs_.back();
        for (std::size_t t = coeffs_.size() - 1; t-- > 0;) acc = q * acc + coeffs_[t];
        return acc;
      }
      case Kind::PowerSeries: {
        const Quaternion u = q - Quaternion(center_);
        if (u.norm() >= radius_)
          throw std::domain_error("power_series: point outside the disk of convergence");
        Quaternion acc = Quaternion::zero();
        Quaternion pw = Quaternion::one();
        int small_streak = 0;
        const std::size_t cap = std::min<std::size_t>(coeffs_.size(), 500);
        for (std::size_t n = 0; n < cap; ++n) {
          const Quaternion term = pw * coeffs_[n];
          acc += term;
          pw = pw * u;
          if (term.norm() < 1e-14 * (1.0 + acc.norm())) {
            if (++small_streak >= 2) break;
          } else {
            small_streak = 0;
          }
        }
        return acc;
      }
      case Kind::IntrinsicRational: {
        const SlicePoint sp = decompose(q);
        const std::complex<double> zeta(sp.a, sp.b);
        const std::complex<double> dv = detail::eval_real_poly(den_, zeta);
        if (std::abs(dv) == 0.0)
          throw std::domain_error("intrinsic_rational: evaluation at a pole");
        const std::complex<double> wv = detail::eval_real_poly(num_, zeta) / dv;
        return slice_value(wv.real(), wv.imag(), sp.unit);
      }
      case Kind::Exp:
        return exp_eval(q);
      case Kind::ResolventShift:
        return (q - Quaternion(alpha_)).inverse();
      case Kind::Transformed: {
        if (q.norm_sq() == 0.0) return *inner_->value_at_infinity();
        return inner_->eval(q.inverse() + Quaternion(k_));
      }
    }
    throw std::logic_error("SliceFunction: unknown kind");
  }

  bool is_intrinsic() const {
    switch (kind_) {
      case Kind::Polynomial:
      case Kind::PowerSeries:
        for (const auto& c : coeffs_)
          if (c.x != 0.0 || c.y != 0.0 || c.z != 0.0) return false;
        return true;
      case Kind::IntrinsicRational:
      case Kind::Exp:
      case Kind::ResolventShift:
        return true;
      case Kind::Transformed:
        return inner_->is_intrinsic();
    }
    return false;
  }

  // Limit at infinity, when the function has one (declared or derived at
  // construction).  Required by the unbounded-type calculus.
  std::optional<Quaternion> value_at_infinity() const { return vinf_; }
  void set_value_at_infinity(const Quaternion& v) { vinf_ = v; }

  // Pole spheres (x, y) of the function, used as contour exclusions.
  std::vector<SpectralSphere> poles() const {
    switch (kind_) {
      case Kind::IntrinsicRational:
        return detail::real_poly_root_spheres(den_);
      case Kind::ResolventShift:
        return {SpectralSphere{alpha_, 0.0, 1}};
      case Kind::Transformed: {
        std::vector<SpectralSphere> out;
        for (const auto& sph : inner_->poles()) out.push_back(phi_sphere_image(sph, k_));
        std::sort(out.begin(), out.end(), [](const SpectralSphere& a, const SpectralSphere& b) {
          return a.x != b.x ? a.x < b.x : a.y < b.y;
        });
        return out;
      }
      default:
        return {};
    }
  }

  // Accessors for serialization.
  const std::vector<Quaternion>& coeffs() const { return coeffs_; }
  const std::vector<double>& num() const { return num_; }
  const std::vector<double>& den() const { return den_; }
  double alpha() const { return alpha_; }
  double center() const { return center_; }
  double radius() const { return radius_; }
  double transform_k() const { return k_; }
  const SliceFunction& inner() const { return *inner_; }

 private:
  explicit SliceFunction(Kind kind) : kind_(kind) {}

  // exp(q) by scaling and squaring on the quaternion series itself (kept
  // independent of the slice closed form e^a (cos b + I sin b), which the
  // tests use as an oracle).
  static Quaternion exp_eval(const Quaternion& q) {
    int m = 0;
    double nrm = q.norm();
    while (nrm > 0.5) {
      nrm *= 0.5;
      ++m;
    }
    const double scale = std::ldexp(1.0, -m);
    const Quaternion u = q * scale;
    Quaternion acc = Quaternion::one();
    Quaternion term = Quaternion::one();
    for (int n = 1; n <= 40; ++n) {
      term = term * u / static_cast<double>(n);
      acc += term;
      if (term.norm() < 1e-18 * acc.norm()) break;
    }
    for (int t = 0; t < m; ++t) acc = acc * acc;
    return acc;
  }

  Kind kind_;
  std::vector<Quaternion> coeffs_;
  std::vector<double> num_, den_;
  double center_ = 0.0, radius_ = 0.0, alpha_ = 0.0, k_ = 0.0;
  std::shared_ptr<const SliceFunction> inner_;
  std::optional<Quaternion> vinf_;
};

// Alias spelling out what transformed() does.
inline SliceFunction compose_with_inverse_transform(const SliceFunction& f, double k) {
  return SliceFunction::transformed(f, k);
}

struct RegularityProbe {
  double step = 1e-4;
  double x_lo = -0.8, x_hi = 0.8;
  double y_lo = 0.15, y_hi = 0.95;
  int x_count = 5, y_count = 5;
  int extra_units = 2;          // random units sampled in addition to i, j, k
  std::uint64_t seed = 2718;
};

// Max norm over a probe grid of the slice Cauchy-Riemann residual
//   (1/2) [ d/dx + I d/dy ] f(x + y I)
// by central differences; a slice regular function gives residuals at the
// discretization-error level, conj(q) gives residuals of order 1.  Grid points
// where evaluation throws (poles, convergence disks) are skipped.
inline double check_regularity(const std::function<Quaternion(const Quaternion&)>& f,
                               const RegularityProbe& probe = {}) {
  std::vector<ImaginaryUnit> units = {ImaginaryUnit(1, 0, 0), ImaginaryUnit(0, 1, 0),
                                      ImaginaryUnit(0, 0, 1)};
  for (int e = 0; e < probe.extra_units; ++e)
    units.push_back(sample_unit_imaginary(probe.seed, static_cast<std::uint64_t>(e)));

  const double h = probe.step;
  double worst = -1.0;
  for (const auto& unit : units) {
    const Quaternion iq = unit.q();
    for (int xi = 0; xi < probe.x_count; ++xi)
      for (int yi = 0; yi < probe.y_count; ++yi) {
        const double x =
            probe.x_lo + (probe.x_hi - probe.x_lo) * xi / std::max(1, probe.x_count - 1);
        const double y =
            probe.y_lo + (probe.y_hi - probe.y_lo) * yi / std::max(1, probe.y_count - 1);
        try {
          const Quaternion fxp = f(slice_value(x + h, y, unit));
          const Quaternion fxm = f(slice_value(x - h, y, unit));
          const Quaternion fyp = f(slice_value(x, y + h, unit));
          const Quaternion fym = f(slice_value(x, y - h, unit));
          const Quaternion dx = (fxp - fxm) / (2.0 * h);
          const Quaternion dy = (fyp - fym) / (2.0 * h);
          const Quaternion res = 0.5 * (dx + iq * dy);
          worst = std::max(worst, res.norm());
        } catch (const std::domain_error&) {
          continue;  // point outside the function's domain
        }
      }
  }
  if (worst < 0.0) throw std::domain_error("check_regularity: no probe point was evaluable");
  return worst;
}

inline double check_regularity(const SliceFunction& f, const RegularityProbe& probe = {}) {
  return check_regularity([&f](const Quaternion& q) { return f.eval(q); }, probe);
}

// Numerical probe for f(inf): samples on a slice circle of radius 1e6 and
// accepts the mean when the spread is small.  Opt-in helper; the declared
// value always wins.
inline std::optional<Quaternion> estimate_value_at_infinity(const SliceFunction& f) {
  constexpr double kRadius = 1e6;
  std::vector<Quaternion> vals;
  for (int m = 0; m < 6; ++m) {
    const double th = 0.1 + m * std::numbers::pi / 3.0;
    try {
      vals.push_back(
          f.eval(slice_value(kRadius * std::cos(th), kRadius * std::sin(th), ImaginaryUnit())));
    } catch (const std::domain_error&) {
      continue;
    }
  }
  if (vals.size() < 3) return std::nullopt;
  Quaternion mean = Quaternion::zero();
  for (const auto& v : vals) mean += v;
  mean = mean / static_cast<double>(vals.size());
  double spread = 0.0;
  for (const auto& v : vals) spread = std::max(spread, (v - mean).norm());
  if (spread > 1e-3 * (1.0 + mean.norm())) return std::nullopt;
  return mean;
}

}  // namespace squatcalc
