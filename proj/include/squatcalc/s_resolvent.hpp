#pragma once

#include <cmath>

#include "squatcalc/quat_matrix.hpp"
#include "squatcalc/s_spectrum.hpp"

namespace squatcalc {

namespace detail {

// S-resolvent in the embedding: -Q_s(T)^(-1) (T - conj(s) I), computed as one
// SVD solve.  Throws NotInResolventSetError when the pencil is numerically
// singular.
inline CMat s_resolvent_embedding(const CMat& x, const CMat& x2, const Quaternion& s, int n) {
  CMat q = x2 - (2.0 * s.w) * x;
  q.diagonal().array() += s.norm_sq();
  auto svd = svd_of(q, true);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  if (smax == 0.0 || smin <= 1e-12 * smax) throw NotInResolventSetError(smin);
  const CMat rhs = x - scalar_embedding(s.conj(), n);
  return -(svd.solve(rhs));
}

}  // namespace detail

// Right S-resolvent operator S^(-1)(s,T) = -Q_s(T)^(-1) (T - conj(s) I), the
// noncommutative Cauchy kernel of the calculus.  Defined for every s off the
// S-spectrum; throws NotInResolventSetError otherwise.
inline QuatMatrix s_resolvent(const QuatMatrix& t, const Quaternion& s) {
  const CMat x = to_embedding(t);
  return from_embedding(detail::s_resolvent_embedding(x, x * x, s, t.n()));
}

// Q_s(T)^(-1) commutes with T: the pencil is a polynomial in T with real
// scalar coefficients, so its inverse is again rational in T.  (It does NOT
// commute with quaternion scalars such as conj(s) I.)  Returns the
// operator-norm of the commutator [Q_s(T)^(-1), T]; tests pin it at the
// rounding level.
inline double s_resolvent_commutation_residual(const QuatMatrix& t, const Quaternion& s) {
  const QuatMatrix q = pencil(t, s);
  const QuatMatrix qi = from_embedding(invert_embedding(to_embedding(q)));
  return op_norm(qi * t - t * qi);
}

// Truncated power series sum_{n=0..terms-1} T^n s^(-1-n); converges exactly
// when ||T|| < |s| (strict), which is enforced.
inline QuatMatrix series_resolvent(const QuatMatrix& t, const Quaternion& s, int terms) {
  const double tn = op_norm(t);
  const double sa = s.norm();
  if (!(tn < sa))
    throw std::domain_error("series_resolvent: requires ||T|| < |s| for convergence");
  if (terms < 1) throw std::invalid_argument("series_resolvent: terms must be >= 1");
  const Quaternion sinv = s.inverse();
  QuatMatrix acc = QuatMatrix::zero(t.n());
  QuatMatrix tp = QuatMatrix::identity(t.n());
  Quaternion sp = sinv;
  for (int n = 0; n < terms; ++n) {
    acc += scal_r(tp, sp);
    if (n + 1 < terms) {
      tp = t * tp;
      sp = sp * sinv;
    }
  }
  return acc;
}

// Geometric bound on the truncation error of series_resolvent:
//   sum_{n>=terms} ||T||^n / |s|^(n+1) = (||T||/|s|)^terms / (|s| - ||T||).
inline double series_tail_bound(double t_norm, double s_abs, int terms) {
  if (!(t_norm < s_abs)) throw std::domain_error("series_tail_bound: requires ||T|| < |s|");
  return std::pow(t_norm / s_abs, terms) / (s_abs - t_norm);
}

// The operator S(s,T) = (T - conj(s) I)^(-1) s (T - conj(s) I) - T, whose
// matrix inverse is the S-resolvent.  Needs T - conj(s) I invertible.
inline QuatMatrix s_left_inverse(const QuatMatrix& t, const Quaternion& s) {
  QuatMatrix b = t;
  for (int d = 0; d < t.n(); ++d) b.at(d, d) -= s.conj();
  const QuatMatrix binv = invert(b);
  return scal_r(binv, s) * b - t;
}

// Residual of the right S-resolvent equation
//   S^(-1)(s,T) s - T S^(-1)(s,T) = I
// in operator norm (s acts entrywise on the right in the first term).
inline double resolvent_equation_residual(const QuatMatrix& t, const Quaternion& s) {
  const QuatMatrix r = s_resolvent(t, s);
  QuatMatrix lhs = scal_r(r, s) - t * r;
  for (int d = 0; d < t.n(); ++d) lhs.at(d, d) -= Quaternion::one();
  return op_norm(lhs);
}

struct LaurentResult {
  QuatMatrix value;
  double ratio = 0.0;       // |Im s| * ||(Re[s] I - T)^(-1)||; must be < 1
  int terms = 0;
  double tail_bound = 0.0;  // ||B|| * ratio^terms / (1 - ratio)
};

// Laurent-type expansion of the kernel around the real point Re[s]:
//   S^(-1)(s,T) = sum_{n>=0} (Re[s] I - T)^(-n-1) (Re[s] - s)^n,
// valid when ratio = |Im s| * ||(Re[s] I - T)^(-1)|| < 1.
inline LaurentResult s_resolvent_laurent(const QuatMatrix& t, const Quaternion& s,
                                         int n_max = 40) {
  QuatMatrix c = QuatMatrix::scalar(Quaternion(s.w), t.n());
  c -= t;  // Re[s] I - T
  const QuatMatrix b = invert(c);
  const double bnorm = op_norm(b);
  LaurentResult out;
  out.ratio = s.imag_norm() * bnorm;
  if (!(out.ratio < 1.0))
    throw std::domain_error("s_resolvent_laurent: condition |Im s| ||(Re s I - T)^-1|| < 1 fails");
  const Quaternion v = Quaternion(s.w) - s;  // -Im[s], purely imaginary
  QuatMatrix acc = QuatMatrix::zero(t.n());
  QuatMatrix bp = b;
  Quaternion vp = Quaternion::one();
  for (int n = 0; n <= n_max; ++n) {
    acc += scal_r(bp, vp);
    bp = b * bp;
    vp = vp * v;
  }
  out.value = acc;
  out.terms = n_max + 1;
  out.tail_bound = bnorm * std::pow(out.ratio, out.terms) / (1.0 - out.ratio);
  return out;
}

}  // namespace squatcalc
