#pragma once

#include <Eigen/Dense>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "squatcalc/errors.hpp"
#include "squatcalc/quaternion.hpp"

namespace squatcalc {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// Dense n x n quaternionic matrix, row major.  Represents a right-linear
// operator on H^n (column vectors with scalars acting on the right).
class QuatMatrix {
 public:
  QuatMatrix() = default;
  explicit QuatMatrix(int n) : n_(n) {
    if (n < 0) throw std::invalid_argument("QuatMatrix: negative dimension");
    e_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Quaternion{});
  }

  static QuatMatrix zero(int n) { return QuatMatrix(n); }
  static QuatMatrix identity(int n) {
    QuatMatrix m(n);
    for (int r = 0; r < n; ++r) m.at(r, r) = Quaternion::one();
    return m;
  }
  // diag(q, q, ..., q)
  static QuatMatrix scalar(const Quaternion& q, int n) {
    QuatMatrix m(n);
    for (int r = 0; r < n; ++r) m.at(r, r) = q;
    return m;
  }

  int n() const { return n_; }

  Quaternion& at(int r, int c) { return e_[idx(r, c)]; }
  const Quaternion& at(int r, int c) const { return e_[idx(r, c)]; }

  QuatMatrix& operator+=(const QuatMatrix& o) {
    check_dim(o);
    for (std::size_t t = 0; t < e_.size(); ++t) e_[t] += o.e_[t];
    return *this;
  }
  QuatMatrix& operator-=(const QuatMatrix& o) {
    check_dim(o);
    for (std::size_t t = 0; t < e_.size(); ++t) e_[t] -= o.e_[t];
    return *this;
  }

  friend QuatMatrix operator+(QuatMatrix a, const QuatMatrix& b) { return a += b; }
  friend QuatMatrix operator-(QuatMatrix a, const QuatMatrix& b) { return a -= b; }

  friend QuatMatrix operator*(const QuatMatrix& a, const QuatMatrix& b) {
    a.check_dim(b);
    const int n = a.n_;
    QuatMatrix r(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Quaternion& aik = a.at(i, k);
        if (aik == Quaternion::zero()) continue;
        for (int j = 0; j < n; ++j) r.at(i, j) += aik * b.at(k, j);
      }
    return r;
  }

  friend QuatMatrix operator*(const QuatMatrix& a, double c) {
    QuatMatrix r = a;
    for (auto& q : r.e_) q = q * c;
    return r;
  }
  friend QuatMatrix operator*(double c, const QuatMatrix& a) { return a * c; }

  friend bool operator==(const QuatMatrix& a, const QuatMatrix& b) {
    return a.n_ == b.n_ && a.e_ == b.e_;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& q : e_) s += q.norm_sq();
    return std::sqrt(s);
  }

  double max_entry_norm() const {
    double m = 0.0;
    for (const auto& q : e_) m = std::max(m, q.norm());
    return m;
  }

 private:
  std::size_t idx(int r, int c) const {
    if (r < 0 || r >= n_ || c < 0 || c >= n_)
      throw std::out_of_range("QuatMatrix: index out of range");
    return static_cast<std::size_t>(r) * n_ + c;
  }
  void check_dim(const QuatMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("QuatMatrix: dimension mismatch");
  }

  int n_ = 0;
  std::vector<Quaternion> e_;
};

// q * M: multiply every entry by q on the left.
inline QuatMatrix scal_l(const Quaternion& q, const QuatMatrix& m) {
  QuatMatrix r(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) r.at(i, j) = q * m.at(i, j);
  return r;
}

// M * q: multiply every entry by q on the right.  Equals M * (q I); distinct
// from scal_l because H is noncommutative.
inline QuatMatrix scal_r(const QuatMatrix& m, const Quaternion& q) {
  QuatMatrix r(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) r.at(i, j) = m.at(i, j) * q;
  return r;
}

// ---------------------------------------------------------------------------
// Complex adjoint embedding.
//
// Writing each entry as q = alpha + beta * j with alpha = w + x i and
// beta = y + z i, the embedding of M is the 2n x 2n complex matrix
//
//     chi(M) = [  A    B  ]
//              [ -B*   A* ]   (entrywise complex conjugation, no transpose)
//
// chi is an R-algebra homomorphism (chi(MN) = chi(M)chi(N)) and is isometric
// for the operator norm, which is how every norm, inverse and eigenvalue
// below is actually computed.
// ---------------------------------------------------------------------------

inline CMat to_embedding(const QuatMatrix& m) {
  const int n = m.n();
  CMat x(2 * n, 2 * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const Quaternion& q = m.at(r, c);
      const Cplx a(q.w, q.x);
      const Cplx b(q.y, q.z);
      x(r, c) = a;
      x(r, c + n) = b;
      x(r + n, c) = -std::conj(b);
      x(r + n, c + n) = std::conj(a);
    }
  return x;
}

// chi(q * I_n) without building a QuatMatrix first.
inline CMat scalar_embedding(const Quaternion& q, int n) {
  CMat x = CMat::Zero(2 * n, 2 * n);
  const Cplx a(q.w, q.x);
  const Cplx b(q.y, q.z);
  for (int r = 0; r < n; ++r) {
    x(r, r) = a;
    x(r, r + n) = b;
    x(r + n, r) = -std::conj(b);
    x(r + n, r + n) = std::conj(a);
  }
  return x;
}

// Inverse of to_embedding.  Rejects matrices that do not carry the quaternionic
// block symmetry to within 1e-12 relative (Frobenius); averages the two
// redundant copies so exact embeddings round-trip bit-for-bit.
inline QuatMatrix from_embedding(const CMat& x) {
  if (x.rows() != x.cols() || x.rows() % 2 != 0)
    throw std::invalid_argument("from_embedding: expected square matrix of even size");
  const int n = static_cast<int>(x.rows() / 2);
  const auto a11 = x.topLeftCorner(n, n);
  const auto a12 = x.topRightCorner(n, n);
  const auto a21 = x.bottomLeftCorner(n, n);
  const auto a22 = x.bottomRightCorner(n, n);
  const double scale = 1.0 + x.norm();
  const double dev = std::sqrt((a21 + a12.conjugate()).squaredNorm() +
                               (a22 - a11.conjugate()).squaredNorm());
  if (dev > 1e-12 * scale)
    throw std::invalid_argument("from_embedding: quaternionic symmetry violated");
  QuatMatrix m(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const Cplx a = 0.5 * (a11(r, c) + std::conj(a22(r, c)));
      const Cplx b = 0.5 * (a12(r, c) - std::conj(a21(r, c)));
      m.at(r, c) = {a.real(), a.imag(), b.real(), b.imag()};
    }
  return m;
}

namespace detail {

inline Eigen::JacobiSVD<CMat> svd_of(const CMat& x, bool vectors) {
  unsigned flags = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  return Eigen::JacobiSVD<CMat>(x, flags);
}

}  // namespace detail

// Largest singular value of chi(M) (= the operator norm of M on H^n).
inline double op_norm(const QuatMatrix& m) {
  if (m.n() == 0) return 0.0;
  return detail::svd_of(to_embedding(m), false).singularValues()(0);
}

inline double op_norm_embedding(const CMat& x) {
  if (x.rows() == 0) return 0.0;
  return detail::svd_of(x, false).singularValues()(0);
}

// SVD-based inverse in the embedding.  Throws NotInvertibleError when
// sigma_min <= 1e-12 * sigma_max.
inline CMat invert_embedding(const CMat& x) {
  auto svd = detail::svd_of(x, true);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  if (smax == 0.0 || smin <= 1e-12 * smax) throw NotInvertibleError(smin, smax);
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

inline QuatMatrix invert(const QuatMatrix& m) {
  return from_embedding(invert_embedding(to_embedding(m)));
}

// p(M) = sum_n M^n * c_n with the coefficients acting on the right
// (coeffs[n] is the degree-n coefficient).  Horner:  r <- M r + c_n I.
inline QuatMatrix poly_eval(const QuatMatrix& m, const std::vector<Quaternion>& coeffs) {
  const int n = m.n();
  if (coeffs.empty()) return QuatMatrix::zero(n);
  QuatMatrix r = QuatMatrix::scalar(coeffs.back(), n);
  for (std::size_t t = coeffs.size() - 1; t-- > 0;) {
    r = m * r;
    for (int d = 0; d < n; ++d) r.at(d, d) += coeffs[t];
  }
  return r;
}

// Convenience: build a matrix from a row-major list of entries.
inline QuatMatrix matrix_from_rows(int n, std::initializer_list<Quaternion> entries) {
  if (static_cast<int>(entries.size()) != n * n)
    throw std::invalid_argument("matrix_from_rows: wrong entry count");
  QuatMatrix m(n);
  auto it = entries.begin();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.at(r, c) = *it++;
  return m;
}

}  // namespace squatcalc
