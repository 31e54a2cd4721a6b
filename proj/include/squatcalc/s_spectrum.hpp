#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "squatcalc/quat_matrix.hpp"

namespace squatcalc {

// One component of the S-spectrum: the 2-sphere { x + y*I : I unit imaginary }
// (a single real point when y == 0).
struct SpectralSphere {
  double x = 0.0;
  double y = 0.0;
  int multiplicity = 1;
};

struct SpectrumReport {
  std::vector<SpectralSphere> spheres;
  double norm_bound = 0.0;  // operator norm of T; every sphere satisfies hypot(x,y) <= norm_bound
};

// Spectral pencil Q_s(T) = T^2 - 2 Re[s] T + |s|^2 I.  Depends on s only
// through (Re[s], |s|), hence is constant on each sphere x + y*S.
inline QuatMatrix pencil(const QuatMatrix& t, const Quaternion& s) {
  QuatMatrix q = t * t;
  q -= (2.0 * s.w) * t;
  const double s2 = s.norm_sq();
  for (int d = 0; d < t.n(); ++d) q.at(d, d) += Quaternion(s2);
  return q;
}

struct ResolventCertificate {
  bool in_resolvent = false;
  double pencil_sigma_min = 0.0;
  double pencil_sigma_max = 0.0;
};

// s belongs to the S-resolvent set iff Q_s(T) is invertible; the certificate
// reports the extreme singular values of the pencil's complex embedding.  The
// default decision threshold sigma_min > rel_tol * sigma_max is deliberately
// conservative.
inline ResolventCertificate in_resolvent_set(const QuatMatrix& t, const Quaternion& s,
                                             double rel_tol = 1e-6) {
  const CMat q = to_embedding(pencil(t, s));
  const auto sv = detail::svd_of(q, false).singularValues();
  ResolventCertificate cert;
  cert.pencil_sigma_max = sv.size() ? sv(0) : 0.0;
  cert.pencil_sigma_min = sv.size() ? sv(sv.size() - 1) : 0.0;
  cert.in_resolvent =
      cert.pencil_sigma_max > 0.0 && cert.pencil_sigma_min > rel_tol * cert.pencil_sigma_max;
  return cert;
}

namespace detail {

// Single-linkage clustering of planar points; returns cluster index per point.
inline std::vector<int> link_clusters(const std::vector<std::pair<double, double>>& pts,
                                      double threshold) {
  const int m = static_cast<int>(pts.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      if (std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second) <= threshold) {
        parent[find(a)] = find(b);
      }
    }
  std::vector<int> label(m, -1);
  int next = 0;
  std::vector<int> out(m);
  for (int a = 0; a < m; ++a) {
    int r = find(a);
    if (label[r] < 0) label[r] = next++;
    out[a] = label[r];
  }
  return out;
}

}  // namespace detail

// S-spectrum of T via the eigenvalues of the complex embedding: s = x + y*S is
// in sigma_S(T) exactly when x + y*i is an eigenvalue of chi(T).  Eigenvalues
// are folded to the closed upper half plane, clustered with relative tolerance
// 1e-9, and reported with multiplicity = cluster size / 2 (the embedding sees
// each sphere twice, as a conjugate pair of eigenvalue sets).  y below 1e-10
// is flagged real and snapped to zero.
inline SpectrumReport s_spectrum(const QuatMatrix& t) {
  SpectrumReport report;
  report.norm_bound = op_norm(t);
  if (t.n() == 0) return report;

  Eigen::ComplexEigenSolver<CMat> es(to_embedding(t), /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw SolverError("s_spectrum: eigenvalue iteration failed");

  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(2 * t.n()));
  for (Eigen::Index m = 0; m < es.eigenvalues().size(); ++m) {
    const Cplx lam = es.eigenvalues()(m);
    pts.emplace_back(lam.real(), std::abs(lam.imag()));
  }

  const double threshold = 1e-9 * (1.0 + report.norm_bound);
  const std::vector<int> cluster = detail::link_clusters(pts, threshold);
  const int nclusters = 1 + *std::max_element(cluster.begin(), cluster.end());

  std::vector<double> sx(nclusters, 0.0), sy(nclusters, 0.0);
  std::vector<int> count(nclusters, 0);
  for (std::size_t m = 0; m < pts.size(); ++m) {
    sx[cluster[m]] += pts[m].first;
    sy[cluster[m]] += pts[m].second;
    ++count[cluster[m]];
  }
  for (int c = 0; c < nclusters; ++c) {
    SpectralSphere sph;
    sph.x = sx[c] / count[c];
    sph.y = sy[c] / count[c];
    if (sph.y <= 1e-10) sph.y = 0.0;
    sph.multiplicity = (count[c] + 1) / 2;
    report.spheres.push_back(sph);
  }
  std::sort(report.spheres.begin(), report.spheres.end(),
            [](const SpectralSphere& a, const SpectralSphere& b) {
              return a.x != b.x ? a.x < b.x : a.y < b.y;
            });
  return report;
}

}  // namespace squatcalc
