#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "squatcalc/quat_matrix.hpp"

namespace squatcalc {

// 1x1 matrix [i]: smallest operator with a genuine spectral sphere, (0,1).
inline QuatMatrix fixture_diag_i() {
  QuatMatrix m(1);
  m.at(0, 0) = Quaternion::i();
  return m;
}

// t * I_n: real scalar operator; spectrum is the single real point t with
// multiplicity n.
inline QuatMatrix fixture_real_scalar(double t, int n) {
  return QuatMatrix::scalar(Quaternion(t), n);
}

// Dense matrix with entries drawn componentwise uniform in [-1,1] from the
// counter stream of `seed`, then rescaled so op_norm == target_norm.
inline QuatMatrix fixture_random(int n, std::uint64_t seed, double target_norm) {
  if (n < 1) throw std::invalid_argument("fixture_random: n must be >= 1");
  if (!(target_norm > 0.0)) throw std::invalid_argument("fixture_random: norm must be positive");
  QuatMatrix m(n);
  std::uint64_t idx = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.at(r, c) = random_quaternion(seed, idx++);
  const double nb = op_norm(m);
  if (nb == 0.0) throw std::domain_error("fixture_random: degenerate draw");
  return m * (target_norm / nb);
}

// Bidiagonal first-difference operator at mesh width h with a random
// quaternionic potential on the diagonal:
//
//   T = (1/h) * superdiag(1)  +  diag(-1/h + v_r),   v_r uniform in [-1,1]^4.
//
// Upper triangular, so its S-spectrum is exactly the union of the diagonal
// entries' spheres, all near x = -1/h; the norm grows like 2/h (and is at
// least 1/h), which makes the fixture a good stand-in for the unbounded
// regime at small h.
inline QuatMatrix fixture_derivative(int n, double h, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("fixture_derivative: n must be >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("fixture_derivative: h must be positive");
  QuatMatrix m(n);
  for (int r = 0; r < n; ++r) {
    m.at(r, r) = Quaternion(-1.0 / h) + random_quaternion(seed, static_cast<std::uint64_t>(r));
    if (r + 1 < n) m.at(r, r + 1) = Quaternion(1.0 / h);
  }
  return m;
}

// CLI-facing dispatcher.  `params` carries the per-fixture knobs (n, h, t,
// norm, seed); missing entries fall back to the documented defaults.
inline QuatMatrix make_fixture(const std::string& name,
                               const std::map<std::string, double>& params,
                               std::uint64_t seed) {
  auto get = [&params](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "diag-i") return fixture_diag_i();
  if (name == "real-scalar")
    return fixture_real_scalar(get("t", 2.0), static_cast<int>(get("n", 3)));
  if (name == "random")
    return fixture_random(static_cast<int>(get("n", 4)),
                          static_cast<std::uint64_t>(get("seed", static_cast<double>(seed))),
                          get("norm", 1.0));
  if (name == "derivative")
    return fixture_derivative(static_cast<int>(get("n", 8)), get("h", 0.1),
                              static_cast<std::uint64_t>(get("seed", static_cast<double>(seed))));
  throw std::invalid_argument("unknown fixture: " + name);
}

}  // namespace squatcalc
