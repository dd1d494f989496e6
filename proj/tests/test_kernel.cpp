#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "expsamp/kernel.hpp"
#include "expsamp/quadrature.hpp"

using namespace expsamp;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// The variant printed with exponent n+1 instead of n-1, used only to show it
// fails the checks the shipped kernel passes.
double printed_variant_log(int n, double t) {
  double sum = 0.0;
  double binom = 1.0;
  double fact = 1.0;
  for (int i = 1; i <= n - 1; ++i) fact *= i;
  for (int j = 0; j <= n; ++j) {
    const double arg = 0.5 * n + t - j;
    if (arg > 0.0) sum += ((j % 2) ? -1.0 : 1.0) * binom * std::pow(arg, n + 1);
    binom = binom * (n - j) / (j + 1);
  }
  return std::abs(t) < 0.5 * n ? sum / fact : 0.0;
}

}  // namespace

TEST_CASE("bspline values") {
  CHECK(eval_bspline(2, 1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(eval_bspline(2, std::exp(0.5)) == Approx(0.5).epsilon(1e-14));
  CHECK(eval_bspline(3, 1.0) == Approx(0.75).epsilon(1e-15));
  CHECK(eval_bspline(2, std::exp(1.0)) == 0.0);
  CHECK(eval_bspline(1, 1.0) == 1.0);
  CHECK(eval_bspline(4, 1.0) == Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("bspline matches the hat function and cubic closed form") {
  for (double t = -1.2; t <= 1.2; t += 0.01) {
    CHECK(bspline_log(2, t) == Approx(std::max(0.0, 1.0 - std::abs(t))).epsilon(1e-13).scale(1.0));
  }
  // Cardinal cubic: 2/3 - t^2 + |t|^3/2 on |t| <= 1.
  for (double t = -1.0; t <= 1.0; t += 0.05) {
    const double a = std::abs(t);
    CHECK(bspline_log(4, t) == Approx(2.0 / 3.0 - t * t + a * a * a / 2).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("bspline support is closed at n/2") {
  for (int n = 1; n <= 6; ++n) {
    CHECK(bspline_log(n, 0.5 * n) == 0.0);
    CHECK(bspline_log(n, -0.5 * n) == 0.0);
    CHECK(bspline_log(n, 0.5 * n + 1e-9) == 0.0);
    CHECK(bspline_log(n, 0.0) > 0.0);
  }
}

TEST_CASE("kernel evaluation errors") {
  CHECK_THROWS_AS(eval_bspline(2, 0.0), DomainError);
  CHECK_THROWS_AS(eval_bspline(2, -1.0), DomainError);
  CHECK_THROWS_AS(eval_bspline(0, 1.0), DomainError);
  CHECK_THROWS_AS(Kernel::bspline(0), DomainError);
  CHECK_THROWS_AS(Kernel::bspline(kMaxBSplineOrder + 1), DomainError);
  CHECK_THROWS_AS(eval_fejer(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_fejer(kPi, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(Kernel::fejer(-1.0, 0.0), DomainError);
}

TEST_CASE("fejer values") {
  CHECK(eval_fejer(kPi, 0.0, 1.0) == Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(eval_fejer(kPi, 0.0, std::exp(2.0))) < 1e-17);
  CHECK(eval_fejer(2 * kPi, 0.0, 1.0) == Approx(1.0).epsilon(1e-15));
  // Removable singularity: continuous across log x = 0.
  CHECK(fejer_log(kPi, 0.0, 1e-10) == Approx(0.5).epsilon(1e-14));
  CHECK(fejer_log(kPi, 0.0, -1e-10) == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("kernel_eval dispatch") {
  CHECK(kernel_eval(Kernel::bspline(2), 1.0) == Approx(1.0));
  CHECK(kernel_eval(Kernel::fejer(kPi, 0.0), 1.0) == Approx(0.5));
  CHECK(kernel_eval(Kernel::bspline(3), std::exp(3.0)) == 0.0);
}

TEST_CASE("sinc conventions") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-12) == Approx(1.0).epsilon(1e-15));
  for (int k = 1; k <= 5; ++k) {
    CHECK(sin_pi(k) == 0.0);
    CHECK(sinc(k) == 0.0);
  }
  CHECK(sinc(0.5) == Approx(2.0 / kPi).epsilon(1e-15));
}

TEST_CASE("spec strings") {
  CHECK(Kernel::bspline(3).spec() == "bspline:3");
  CHECK(Kernel::fejer(2.5, 0.0).spec() == "fejer:2.5:0");
  CHECK(Kernel::bspline(3).support_log_radius().value() == 1.5);
  CHECK_FALSE(Kernel::fejer(kPi, 0.0).support_log_radius().has_value());
  CHECK(Kernel::fejer(kPi, 0.0).decay() == Decay::InverseSquareLog);
}

TEST_CASE("closed-form transform") {
  for (int n = 1; n <= 6; ++n) {
    const Kernel k = Kernel::bspline(n);
    CHECK(mellin_transform_closed_form(k, 0.0) == 1.0);
    for (int c = 1; c <= 10; ++c) {
      CHECK(mellin_transform_cycles(k, c) == 0.0);
      CHECK(mellin_transform_cycles(k, -c) == 0.0);
      CHECK(std::abs(mellin_transform_closed_form(k, 2 * kPi * c)) < 1e-15);
    }
  }
  const Kernel f = Kernel::fejer(kPi, 0.0);
  CHECK(mellin_transform_closed_form(f, kPi / 2) == Approx(0.5).epsilon(1e-15));
  CHECK(mellin_transform_closed_form(f, 4.0) == 0.0);
}

TEST_CASE("numeric transform agrees with sinc^n") {
  for (int n = 1; n <= 5; ++n) {
    const Kernel k = Kernel::bspline(n);
    for (double t : {0.0, kPi, 2 * kPi, 1.3, 7.0}) {
      CHECK(std::abs(mellin_transform_numeric(k, t) - mellin_transform_closed_form(k, t)) < 1e-8);
    }
  }
  CHECK_THROWS_AS(mellin_transform_numeric(Kernel::fejer(kPi, 0.0), 1.0), PolicyError);
}

TEST_CASE("transform derivative matches central differences") {
  for (int n = 1; n <= 4; ++n) {
    for (double t : {0.7, 2.0, 2 * kPi, 9.0}) {
      const double h = 1e-5;
      const Kernel k = Kernel::bspline(n);
      const double fd =
          (mellin_transform_closed_form(k, t + h) - mellin_transform_closed_form(k, t - h)) / (2 * h);
      CHECK(bspline_transform_derivative(n, t) == Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("printed n+1 exponent fails transform and partition checks") {
  const GaussLegendre rule(16);
  for (int n = 2; n <= 4; ++n) {
    // Transform at t = 0 is the total mass; the shipped kernel has mass 1.
    double mass = 0.0;
    for (int j = 0; j < n; ++j) {
      mass += rule.integrate([&](double t) { return printed_variant_log(n, t); }, -0.5 * n + j, -0.5 * n + j + 1);
    }
    CHECK(std::abs(mass - 1.0) > 1e-2);
    double sum = 0.0;
    for (int k = -n; k <= n; ++k) sum += printed_variant_log(n, 0.3 - k);
    CHECK(std::abs(sum - 1.0) > 1e-2);
  }
}

TEST_CASE("partition of unity") {
  for (int n = 1; n <= 5; ++n) {
    const Kernel k = Kernel::bspline(n);
    for (double w : {1.0, 5.0, 40.0}) {
      for (double x = 0.1; x <= 10.0; x *= 1.07) {
        CHECK(std::abs(partition_of_unity_check(k, x, w, ExactSupport{}) - 1.0) <= 1e-12);
      }
    }
  }
  CHECK(partition_of_unity_check(Kernel::bspline(3), 2.0, 10, ExactSupport{}) == Approx(1.0).epsilon(1e-12));
  CHECK(partition_of_unity_check(Kernel::bspline(1), 1.0, 1, ExactSupport{}) == 1.0);
  const double fj = partition_of_unity_check(Kernel::fejer(kPi, 0.0), 2.0, 10, WindowTerms{1000});
  CHECK(std::abs(fj - 1.0) <= 1e-3);
  CHECK(std::abs(fj - 1.0) <= fejer_tail_bound(kPi, 0.0, 1000));
}

TEST_CASE("symmetry under x -> 1/x") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int n = 1; n <= 5; ++n) {
    const Kernel k = Kernel::bspline(n);
    for (int i = 0; i < 1000; ++i) {
      const double x = std::exp(u(gen));
      CHECK(std::abs(k(x) - k(1.0 / x)) <= 1e-15);
    }
  }
}

TEST_CASE("truncation windows") {
  const Kernel b3 = Kernel::bspline(3);
  const IndexWindow w = index_window(b3, ExactSupport{}, 0.2);
  CHECK(w.first <= -1);
  CHECK(w.last >= 1);
  CHECK(w.tail_bound == 0.0);
  const Kernel f = Kernel::fejer(kPi, 0.0);
  CHECK_THROWS_AS(index_window(f, ExactSupport{}, 0.0), PolicyError);
  const IndexWindow fw = index_window(f, WindowTerms{10}, 3.4);
  CHECK(fw.first == 3 - 10);
  CHECK(fw.last == 3 + 10);
  CHECK(fw.tail_bound == Approx(fejer_tail_bound(kPi, 0.0, 10)));
  const IndexWindow tw = index_window(f, TailTolerance{1e-6}, 0.0);
  CHECK(tw.tail_bound <= 1e-6);
  CHECK(fejer_half_width_for(kPi, 0.0, 1e-6) == tw.last);
  CHECK(std::isinf(fejer_tail_bound(kPi, 0.5, 100)));
  CHECK_THROWS_AS(fejer_half_width_for(kPi, 0.5, 1e-3), PolicyError);
  CHECK_THROWS_AS(index_window(Kernel::fejer(kPi, 0.5), TailTolerance{1e-3}, 0.0), PolicyError);
  CHECK(default_truncation(Kernel::fejer(kPi, 0.5)).index() == 1);
  CHECK(truncation_spec(WindowTerms{7}) == "terms:7");
  CHECK(truncation_spec(ExactSupport{}) == "exact");
}

TEST_CASE("fejer tail bound covers the change from doubling the window") {
  const Kernel f = Kernel::fejer(kPi, 0.0);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> lu(-2.0, 2.0);
  std::uniform_int_distribution<long> kk(5, 3000);
  for (int i = 0; i < 20; ++i) {
    const double u = std::exp(lu(gen));
    const long K = kk(gen);
    const double a = partition_of_unity_check(f, u, 1.0, WindowTerms{K});
    const double b = partition_of_unity_check(f, u, 1.0, WindowTerms{2 * K});
    CHECK(std::abs(b - a) <= fejer_tail_bound(kPi, 0.0, K));
  }
}

TEST_CASE("discrete moments") {
  const Kernel b3 = Kernel::bspline(3);
  for (double u : {0.5, 1.0, 1.7, 3.0}) {
    CHECK(discrete_moment(b3, 0, u, ExactSupport{}).algebraic == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(discrete_moment(b3, 1, u, ExactSupport{}).algebraic) <= 1e-12);
  }
  const Kernel f = Kernel::fejer(kPi, 0.0);
  const MomentValue m = discrete_moment(f, 0, 2.0, WindowTerms{2000});
  CHECK(std::abs(m.algebraic - 1.0) <= m.tail_bound);
  CHECK_THROWS_AS(discrete_moment(f, 0, 2.0, ExactSupport{}), PolicyError);
  CHECK(discrete_moment(f, 1, 2.0, WindowTerms{50}).window_dependent);
  CHECK_FALSE(discrete_moment(b3, 1, 2.0, ExactSupport{}).window_dependent);
}

TEST_CASE("moment reports") {
  std::vector<double> grid;
  for (double u = 0.5; u <= 4.0; u *= 1.05) grid.push_back(u);
  const Kernel b2 = Kernel::bspline(2);
  const auto r1 = moment_report(b2, 1, grid, ExactSupport{});
  for (double v : r1.algebraic) CHECK(std::abs(v) <= 1e-12);
  const auto r0 = moment_report(b2, 0, grid, ExactSupport{});
  for (double v : r0.algebraic) CHECK(std::abs(v - 1.0) <= 1e-12);
  const auto r2 = moment_report(b2, 2, grid, ExactSupport{});
  CHECK(std::isfinite(r2.sup_absolute));
  CHECK(r2.sup_absolute > 0.0);
  // |m_nu| <= M_nu everywhere.
  for (const Kernel& k : {Kernel::bspline(1), Kernel::bspline(4), Kernel::fejer(kPi, 0.0)}) {
    const TruncationPolicy p = k.is_bspline() ? TruncationPolicy{ExactSupport{}} : TruncationPolicy{WindowTerms{200}};
    for (int nu = 0; nu <= 3; ++nu) {
      const auto r = moment_report(k, nu, grid, p);
      for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(r.algebraic[i]) <= r.absolute[i]);
    }
  }
}

TEST_CASE("moments are periodic in log u") {
  const auto grid = moment_period_grid(16);
  REQUIRE(grid.size() == 16);
  CHECK(grid.front() == 1.0);
  const Kernel b3 = Kernel::bspline(3);
  for (double u : grid) {
    const double a = discrete_moment(b3, 2, u, ExactSupport{}).algebraic;
    const double b = discrete_moment(b3, 2, u * std::exp(3.0), ExactSupport{}).algebraic;
    CHECK(a == Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("first moment vanishes only from order 2") {
  CHECK_FALSE(Kernel::bspline(1).first_moment_vanishes());
  CHECK(Kernel::bspline(2).first_moment_vanishes());
  CHECK_FALSE(Kernel::fejer(kPi, 0.0).first_moment_vanishes());
  const double m = discrete_moment(Kernel::bspline(1), 1, std::exp(0.3), ExactSupport{}).algebraic;
  CHECK(std::abs(m) > 0.1);
}

TEST_CASE("poisson condition") {
  const PoissonReport r = poisson_condition_check(Kernel::bspline(2), 5);
  REQUIRE(r.values.size() == 11);
  for (int i = 0; i < 11; ++i) CHECK(r.values[i] == (i == 5 ? 1.0 : 0.0));
  CHECK(r.max_deviation == 0.0);
  CHECK(r.derivative_checked);
  CHECK(r.max_derivative == 0.0);
  const PoissonReport f = poisson_condition_check(Kernel::fejer(kPi, 0.0), 5);
  for (int i = 0; i < 11; ++i) CHECK(f.values[i] == (i == 5 ? 1.0 : 0.0));
  const PoissonReport f0 = poisson_condition_check(Kernel::fejer(kPi, 0.0), 0);
  REQUIRE(f0.values.size() == 1);
  CHECK(f0.values[0] == 1.0);
  // Order 1: transform derivative at 2 pi k is nonzero, so m_1 does not vanish.
  CHECK(poisson_condition_check(Kernel::bspline(1), 3).max_derivative > 0.0);
}
