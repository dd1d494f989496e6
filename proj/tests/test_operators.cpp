#include <doctest.h>

#include <cmath>
#include <numbers>

#include "expsamp/operators.hpp"

using namespace expsamp;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

OperatorParams params(double w, TruncationPolicy t = ExactSupport{}) { return {w, t, 16}; }

}  // namespace

TEST_CASE("classical operator") {
  const Kernel b2 = Kernel::bspline(2);
  CHECK(classical_apply(b2, signals::constant(3.0), params(10), 2.0) == Approx(3.0).epsilon(1e-14));
  for (double w : {1.0, 7.0, 40.0}) {
    for (double x : {0.4, 1.0, 2.5}) {
      CHECK(classical_apply(b2, signals::logarithm(), params(w), x) == Approx(std::log(x)).epsilon(1e-13).scale(1.0));
    }
  }
  CHECK(classical_apply(Kernel::bspline(3), signals::f2(), params(40), 2.0) ==
        Approx(std::cos(2.0)).epsilon(1e-3));
}

TEST_CASE("kantorovich operator reproduces constants") {
  for (const Kernel& k : {Kernel::bspline(1), Kernel::bspline(3), Kernel::bspline(5)}) {
    for (double w : {1.0, 5.0, 40.0}) {
      for (double x : {0.3, 1.0, 2.7}) {
        CHECK(kantorovich_apply(k, signals::constant(2.0), params(w), x) == Approx(2.0).epsilon(1e-13));
      }
    }
  }
  const Kernel f = Kernel::fejer(kPi, 0.0);
  const double tail = fejer_tail_bound(kPi, 0.0, 2000);
  CHECK(std::abs(kantorovich_apply(f, signals::constant(1.0), params(10, WindowTerms{2000}), 2.0) - 1.0) <= tail);
}

TEST_CASE("log shift identity") {
  for (int n = 2; n <= 5; ++n) {
    const Kernel k = Kernel::bspline(n);
    for (double w : {1.0, 5.0, 40.0}) {
      for (double x = 0.2; x < 8.0; x *= 1.31) {
        CHECK(std::abs(kantorovich_apply(k, signals::logarithm(), params(w), x) - std::log(x) - 0.5 / w) <= 1e-12);
      }
    }
  }
}

TEST_CASE("grid evaluation") {
  const std::vector<double> xs{1, 2, 3};
  for (double v : apply_on_grid(Kernel::bspline(2), signals::constant(1.0), params(5), xs)) {
    CHECK(v == Approx(1.0).epsilon(1e-14));
  }
  const std::vector<double> e{std::exp(1.0)};
  CHECK(apply_on_grid(Kernel::bspline(2), signals::logarithm(), params(10), e)[0] == Approx(1.05).epsilon(1e-13));
  const std::vector<double> bad{1.0, -2.0};
  CHECK_THROWS_AS(apply_on_grid(Kernel::bspline(2), signals::f1(), params(5), bad), DomainError);
  CHECK_THROWS_AS(apply_on_grid(Kernel::bspline(2), signals::f1(), params(5), std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(apply_on_grid(Kernel::fejer(kPi, 0.0), signals::f1(), params(5), xs), PolicyError);
  CHECK_THROWS_AS(kantorovich_apply(Kernel::bspline(2), signals::f1(), params(0.0), 1.5), DomainError);
  CHECK_THROWS_AS(kantorovich_apply(Kernel::bspline(2), signals::f1(), {5.0, ExactSupport{}, 1}, 1.5), DomainError);
}

TEST_CASE("reference error scale") {
  // Continued signals: the table presets use these.
  const std::vector<double> x1{1.1};
  const double e1 = pointwise_errors(Kernel::bspline(2), signals::f1_extended(), params(5), x1)[0];
  CHECK(e1 == Approx(0.1621).epsilon(0.1));
  const std::vector<double> x2{1.4};
  const double e2 = pointwise_errors(Kernel::fejer(kPi, 0.0), signals::f2_extended(), params(10, WindowTerms{10000}), x2)[0];
  CHECK(e2 == Approx(0.0954).epsilon(0.1));
}

TEST_CASE("errors decrease along the table sweep") {
  const std::vector<double> xs{1.1, 1.8, 2.9, 3.8};
  std::vector<double> prev(xs.size(), INFINITY);
  for (double w : {5.0, 40.0, 70.0}) {
    const auto e = pointwise_errors(Kernel::bspline(3), signals::f1_extended(), params(w), xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(e[i] < prev[i]);
      prev[i] = e[i];
    }
  }
}

TEST_CASE("guarded grid") {
  const auto f1 = signals::f1();
  const auto xs = guarded_grid(Kernel::bspline(2), f1, 10, 0.5, 4.0);
  CHECK(xs.size() > 100);
  for (double x : xs) {
    for (double bp : f1.breakpoints()) CHECK(std::abs(std::log(x / bp)) >= 0.2 - 1e-12);
  }
  // Order 5 has radius 2.5, so the guard widens to 3.5/w.
  for (double x : guarded_grid(Kernel::bspline(5), signals::f1(), 10, 0.5, 4.0)) {
    CHECK(std::abs(std::log(x)) >= 0.35 - 1e-12);
  }
  CHECK_THROWS_AS(guarded_grid(Kernel::bspline(2), signals::f1(), 10, 4.0, 0.5), DomainError);
}

TEST_CASE("voronovskaya residual") {
  for (int n = 2; n <= 4; ++n) {
    for (double w : {3.0, 20.0, 80.0}) {
      for (double x : {0.5, 2.0}) {
        const auto r = voronovskaya_residual(Kernel::bspline(n), signals::logarithm(), params(w), x);
        CHECK(std::abs(r.residual) <= 1e-12);
        CHECK_FALSE(r.moment_condition_fails);
        CHECK(std::abs(voronovskaya_residual(Kernel::bspline(n), signals::constant(4.0), params(w), x).residual) <=
              1e-11);
      }
    }
  }
  double prev = INFINITY;
  for (double w : {20.0, 40.0, 80.0}) {
    const double r = std::abs(voronovskaya_residual(Kernel::bspline(3), signals::f2(), params(w), 2.0).residual);
    CHECK(r < prev);
    prev = r;
  }
  CHECK(voronovskaya_residual(Kernel::fejer(kPi, 0.0), signals::f2(), params(10, WindowTerms{100}), 2.0)
            .moment_condition_fails);
}

TEST_CASE("modulus bound") {
  std::vector<double> xs;
  for (double x = 0.5; x < 4.0; x *= 1.1) xs.push_back(x);
  const auto r = modulus_bound_check(Kernel::bspline(2), signals::logarithm(), params(10), xs);
  CHECK(r.omega == Approx(0.1).epsilon(1e-12));
  CHECK(r.max_error == Approx(0.05).epsilon(1e-10));
  CHECK(r.lambda >= 1.0);
  CHECK(r.holds);
  CHECK_FALSE(r.window_dependent);
  const auto c = modulus_bound_check(Kernel::bspline(2), signals::constant(5.0), params(10), xs);
  CHECK(c.omega == 0.0);
  CHECK(c.holds);
  std::vector<double> interior;
  for (double x = 1.5; x <= 3.5; x += 0.1) interior.push_back(x);
  CHECK(modulus_bound_check(Kernel::bspline(3), signals::f2(), params(40), interior).holds);
  CHECK(modulus_bound_check(Kernel::fejer(kPi, 0.0), signals::f2(), params(10, WindowTerms{200}), interior)
            .window_dependent);
}

TEST_CASE("representation identity") {
  const auto r = representation_decompose(Kernel::bspline(2), signals::logarithm(), params(10), 2, std::exp(1.0));
  REQUIRE(r.terms.size() == 2);
  CHECK(r.terms[0] == Approx(1.0).epsilon(1e-13));
  CHECK(r.terms[1] == Approx(0.05).epsilon(1e-13));
  CHECK(std::abs(r.remainder) <= 1e-13);
  CHECK(r.reconstruction == Approx(r.direct).epsilon(1e-13));

  const auto c = representation_decompose(Kernel::bspline(3), signals::constant(2.0), params(7), 1, 1.3);
  CHECK(c.terms[0] == Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(c.remainder) <= 1e-14);

  for (int n : {1, 2}) {
    for (double w : {10.0, 40.0}) {
      const auto f = representation_decompose(Kernel::bspline(3), signals::f2(), params(w), n, 2.0);
      CHECK(std::abs(f.reconstruction - f.direct) <= 1e-10);
      CHECK(std::abs(f.remainder) <= f.remainder_bound);
    }
  }
  const PiecewiseSignal fd_only({{0.0, INFINITY, PieceKind::Log}}, "fdlog", false);
  CHECK_THROWS_AS(representation_decompose(Kernel::bspline(2), fd_only, params(10), 1, 2.0), PolicyError);
  CHECK_THROWS_AS(representation_decompose(Kernel::bspline(2), signals::logarithm(), params(10), 0, 2.0), DomainError);
}

TEST_CASE("saturation estimate") {
  const std::vector<double> ws{5, 10, 20, 40, 80};
  const std::vector<double> xs{0.7, 1.0, 2.0};
  const auto lg = saturation_estimate(Kernel::bspline(2), signals::logarithm(), params(1), ws, xs);
  CHECK_FALSE(lg.degenerate);
  CHECK(lg.exponent == Approx(-1.0).epsilon(1e-9));
  CHECK(lg.intercept == Approx(std::log(0.5)).epsilon(1e-9));
  CHECK(saturation_estimate(Kernel::bspline(2), signals::constant(1.0), params(1), ws, xs).degenerate);

  const std::vector<double> tw{5, 40, 70};
  const std::vector<double> tx{1.1, 1.8, 2.9, 3.8};
  const auto t = saturation_estimate(Kernel::bspline(3), signals::f1_extended(), params(1), tw, tx);
  CHECK(t.exponent >= -1.15);
  CHECK(t.exponent <= -0.85);

  const std::vector<double> two{5, 10};
  CHECK_THROWS_AS(saturation_estimate(Kernel::bspline(2), signals::logarithm(), params(1), two, xs), DomainError);
  const std::vector<double> unsorted{5, 20, 10};
  CHECK_THROWS_AS(saturation_estimate(Kernel::bspline(2), signals::logarithm(), params(1), unsorted, xs), DomainError);
}
