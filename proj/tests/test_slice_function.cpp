#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "squatcalc/slice_function.hpp"

using namespace squatcalc;

namespace {

double dist(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

// independent slice-wise oracle: f holomorphic on C applied on the slice of q
template <typename F>
Quaternion slice_oracle(const Quaternion& q, F f) {
  const SlicePoint sp = decompose(q);
  const std::complex<double> w = f(std::complex<double>(sp.a, sp.b));
  return slice_value(w.real(), w.imag(), sp.unit);
}

}  // namespace

TEST_CASE("polynomial evaluation with right coefficients") {
  // f(q) = q * j at q = i: coefficient acts on the right, so the value is i*j = k
  const SliceFunction f = SliceFunction::polynomial({Quaternion::zero(), Quaternion::j()});
  CHECK(f.eval(Quaternion::i()) == Quaternion::k());

  const SliceFunction sq =
      SliceFunction::polynomial({Quaternion::zero(), Quaternion::zero(), Quaternion::one()});
  CHECK(sq.eval(Quaternion::i()) == Quaternion(-1));
  CHECK(sq.eval(Quaternion(1, 1, 1, 1)) == Quaternion(1, 1, 1, 1) * Quaternion(1, 1, 1, 1));

  // Horner against explicit powers
  const std::vector<Quaternion> cs = {random_quaternion(3, 0), random_quaternion(3, 1),
                                      random_quaternion(3, 2), random_quaternion(3, 3)};
  const SliceFunction p = SliceFunction::polynomial(cs);
  for (int t = 0; t < 20; ++t) {
    const Quaternion q = random_quaternion(4, t);
    Quaternion direct = Quaternion::zero();
    Quaternion pw = Quaternion::one();
    for (const auto& c : cs) {
      direct += pw * c;
      pw = pw * q;
    }
    CHECK(dist(p.eval(q), direct) < 1e-13 * (1.0 + direct.norm()));
  }
}

TEST_CASE("value at infinity is derived where determined") {
  CHECK(SliceFunction::polynomial({}).value_at_infinity() == Quaternion::zero());
  CHECK(SliceFunction::polynomial({Quaternion(3, 1, 0, 0)}).value_at_infinity() ==
        Quaternion(3, 1, 0, 0));
  CHECK_FALSE(
      SliceFunction::polynomial({Quaternion::zero(), Quaternion::one()}).value_at_infinity());

  CHECK(SliceFunction::intrinsic_rational({1}, {1, 0, 1}).value_at_infinity() ==
        Quaternion::zero());
  CHECK(SliceFunction::intrinsic_rational({2, 0, 6}, {1, 0, 3}).value_at_infinity() ==
        Quaternion(2.0));
  CHECK_FALSE(SliceFunction::intrinsic_rational({0, 0, 1}, {1}).value_at_infinity());

  CHECK(SliceFunction::resolvent_shift(2.0).value_at_infinity() == Quaternion::zero());
  CHECK_FALSE(SliceFunction::exponential().value_at_infinity());

  SliceFunction f = SliceFunction::exponential();
  f.set_value_at_infinity(Quaternion(7));
  CHECK(f.value_at_infinity() == Quaternion(7));
}

TEST_CASE("intrinsic rational evaluates slice-wise") {
  const SliceFunction f = SliceFunction::intrinsic_rational({-2, 0, 1}, {9, 0, 1});
  CHECK(f.eval(Quaternion(1)) == Quaternion(-0.1));
  CHECK(dist(f.eval(Quaternion::i()), Quaternion(-0.375)) < 1e-15);

  for (int t = 0; t < 30; ++t) {
    const Quaternion q = 2.0 * random_quaternion(8, t);
    const Quaternion expect = slice_oracle(q, [](std::complex<double> z) {
      return (z * z - 2.0) / (z * z + 9.0);
    });
    CHECK(dist(f.eval(q), expect) < 1e-13 * (1.0 + expect.norm()));
  }
}

TEST_CASE("intrinsic functions preserve slices") {
  const SliceFunction f = SliceFunction::intrinsic_rational({-2, 0, 1}, {9, 0, 1});
  CHECK(f.is_intrinsic());
  for (int t = 0; t < 20; ++t) {
    const ImaginaryUnit u = sample_unit_imaginary(21, t);
    const Quaternion q = slice_value(rng::usym(22, t), 2.0 * rng::u01(23, t), u);
    const Quaternion v = f.eval(q);
    // component of v orthogonal to span{1, u} must vanish
    const double along = v.x * u.x + v.y * u.y + v.z * u.z;
    const Quaternion rebuilt = slice_value(v.w, along, u);
    CHECK(dist(v, rebuilt) <= 1e-12 * (1.0 + v.norm()));
  }
  CHECK_FALSE(
      SliceFunction::polynomial({Quaternion::zero(), Quaternion::j()}).is_intrinsic());
  CHECK(SliceFunction::polynomial({Quaternion(1), Quaternion(-2)}).is_intrinsic());
}

TEST_CASE("rational evaluation at a pole throws") {
  const SliceFunction f = SliceFunction::intrinsic_rational({1}, {1, 0, 1});  // 1/(s^2+1)
  CHECK_THROWS_AS(f.eval(Quaternion::i()), std::domain_error);
  CHECK_THROWS_AS(f.eval(Quaternion::k()), std::domain_error);
  CHECK(dist(f.eval(Quaternion(1)), Quaternion(0.5)) < 1e-15);
}

TEST_CASE("pole spheres") {
  const auto ps = SliceFunction::intrinsic_rational({1}, {9, 0, 1}).poles();  // 1/(s^2+9)
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].x == Catch::Approx(0.0).margin(1e-9));
  CHECK(ps[0].y == Catch::Approx(3.0).epsilon(1e-9));

  const auto rs = SliceFunction::resolvent_shift(2.0).poles();
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].x == 2.0);
  CHECK(rs[0].y == 0.0);

  // (s-1)(s-4) denominator: two real poles, sorted
  const auto two = SliceFunction::intrinsic_rational({1}, {4, -5, 1}).poles();
  REQUIRE(two.size() == 2);
  CHECK(two[0].x == Catch::Approx(1.0).margin(1e-8));
  CHECK(two[1].x == Catch::Approx(4.0).margin(1e-8));

  CHECK(SliceFunction::exponential().poles().empty());
  CHECK(SliceFunction::polynomial({Quaternion(1)}).poles().empty());
}

TEST_CASE("exponential matches the slice closed form") {
  const SliceFunction f = SliceFunction::exponential();
  CHECK(f.eval(Quaternion::zero()) == Quaternion::one());
  CHECK(dist(f.eval(Quaternion(1)), Quaternion(std::exp(1.0))) < 1e-14 * std::exp(1.0));

  for (int t = 0; t < 40; ++t) {
    const Quaternion q = 5.0 * random_quaternion(33, t);  // norms up to 10
    const SlicePoint sp = decompose(q);
    const double ea = std::exp(sp.a);
    const Quaternion expect = slice_value(ea * std::cos(sp.b), ea * std::sin(sp.b), sp.unit);
    CHECK(dist(f.eval(q), expect) <= 1e-12 * expect.norm());
  }
}

TEST_CASE("power series evaluates inside its disk and rejects outside") {
  std::vector<Quaternion> cs;
  double fact = 1.0;
  for (int n = 0; n < 30; ++n) {
    cs.push_back(Quaternion(1.0 / fact));
    fact *= (n + 1);
  }
  const SliceFunction f = SliceFunction::power_series(cs, 0.0, 3.0);
  const SliceFunction e = SliceFunction::exponential();
  for (int t = 0; t < 10; ++t) {
    const Quaternion q = random_quaternion(44, t);
    CHECK(dist(f.eval(q), e.eval(q)) < 1e-12);
  }
  CHECK_THROWS_AS(f.eval(Quaternion(3.5)), std::domain_error);
  CHECK_THROWS_AS(SliceFunction::power_series({Quaternion(1)}, 0.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("resolvent shift") {
  const SliceFunction f = SliceFunction::resolvent_shift(2.0);
  CHECK(f.eval(Quaternion(3)) == Quaternion(1));
  CHECK(dist(f.eval(Quaternion(2, 1, 0, 0)), Quaternion(0, -1, 0, 0)) < 1e-15);
  CHECK_THROWS_AS(f.eval(Quaternion(2)), std::domain_error);
}

TEST_CASE("transformed function composes with the inverse change of variable") {
  const SliceFunction f = SliceFunction::intrinsic_rational({-2, 0, 1}, {9, 0, 1});
  const double k = 1.5;
  const SliceFunction phi = compose_with_inverse_transform(f, k);

  // phi((s-k)^(-1)) == f(s)
  for (int t = 0; t < 25; ++t) {
    const Quaternion s = 3.0 * random_quaternion(55, t);
    const Quaternion p = (s - Quaternion(k)).inverse();
    const Quaternion expect = f.eval(s);
    CHECK(dist(phi.eval(p), expect) < 1e-12 * (1.0 + expect.norm()));
  }

  // phi(0) = f(inf) = 1 (equal leading coefficients)
  CHECK(dist(phi.eval(Quaternion::zero()), Quaternion(1)) < 1e-15);
  // phi(inf) = f(k)
  REQUIRE(phi.value_at_infinity());
  CHECK(dist(*phi.value_at_infinity(), f.eval(Quaternion(k))) < 1e-15);

  // pole spheres are mapped through p = (s-k)^(-1)
  const auto ps = phi.poles();
  REQUIRE(ps.size() == 1);
  const double d = (0.0 - k) * (0.0 - k) + 9.0;
  CHECK(ps[0].x == Catch::Approx((0.0 - k) / d).epsilon(1e-12));
  CHECK(ps[0].y == Catch::Approx(3.0 / d).epsilon(1e-9));

  // functions without a value at infinity cannot be transformed
  const SliceFunction id = SliceFunction::polynomial({Quaternion::zero(), Quaternion::one()});
  CHECK_THROWS_AS(SliceFunction::transformed(id, 1.0), ContractError);
}

TEST_CASE("phi_sphere_image") {
  const SpectralSphere img = phi_sphere_image({0.0, 3.0, 2}, 1.0);
  CHECK(img.x == Catch::Approx(-0.1));
  CHECK(img.y == Catch::Approx(0.3));
  CHECK(img.multiplicity == 2);
  CHECK_THROWS_AS(phi_sphere_image({2.0, 0.0, 1}, 2.0), std::domain_error);
}

TEST_CASE("regularity probe separates regular functions from conjugation") {
  const SliceFunction sq =
      SliceFunction::polynomial({Quaternion::zero(), Quaternion::zero(), Quaternion::one()});
  CHECK(check_regularity(sq) < 1e-10);

  CHECK(check_regularity(SliceFunction::exponential()) < 1e-6);

  const SliceFunction rat = SliceFunction::intrinsic_rational({1}, {9, 0, 1});
  CHECK(check_regularity(rat) < 1e-6);

  // probe points outside a series' disk are skipped, not fatal ...
  std::vector<Quaternion> cs;
  double fact = 1.0;
  for (int n = 0; n < 30; ++n) {
    cs.push_back(Quaternion(1.0 / fact));
    fact *= (n + 1);
  }
  CHECK(check_regularity(SliceFunction::power_series(cs, 0.0, 0.3)) < 1e-6);
  // ... but a function evaluable nowhere on the grid is reported
  CHECK_THROWS_AS(check_regularity(SliceFunction::power_series(cs, 0.0, 0.05)),
                  std::domain_error);

  const double bad = check_regularity([](const Quaternion& q) { return q.conj(); });
  CHECK(bad > 0.5);
}

TEST_CASE("value at infinity can be estimated numerically") {
  const auto est = estimate_value_at_infinity(
      SliceFunction::intrinsic_rational({-2, 0, 3}, {9, 0, 1}));
  REQUIRE(est);
  CHECK(dist(*est, Quaternion(3)) < 1e-3);

  CHECK_FALSE(estimate_value_at_infinity(
      SliceFunction::polynomial({Quaternion::zero(), Quaternion::one()})));
}
