#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "expsamp/operators.hpp"

using namespace expsamp;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return xs;
}

}  // namespace

TEST_CASE("parallel grid evaluation is bitwise equal to the serial reference") {
  const auto xs = log_grid(0.05, 6.0, 301);
  struct Case {
    Kernel kernel;
    PiecewiseSignal signal;
    OperatorParams params;
  };
  const std::vector<Case> cases{
      {Kernel::bspline(1), signals::f1(), {5, ExactSupport{}, 16}},
      {Kernel::bspline(3), signals::f1_extended(), {70, ExactSupport{}, 16}},
      {Kernel::bspline(5), signals::f2(), {40, ExactSupport{}, 8}},
      {Kernel::bspline(2), signals::logarithm(), {10, ExactSupport{}, 16}},
      {Kernel::fejer(std::numbers::pi, 0.0), signals::f2_extended(), {10, WindowTerms{500}, 16}},
      {Kernel::fejer(2.0, 0.0), signals::f1(), {40, TailTolerance{1e-4}, 16}},
  };
  for (const auto& c : cases) {
    CHECK(bitwise_equal(apply_on_grid(c.kernel, c.signal, c.params, xs),
                        apply_on_grid_serial(c.kernel, c.signal, c.params, xs)));
  }
}

TEST_CASE("grid values equal pointwise kantorovich_apply") {
  const auto xs = log_grid(0.5, 4.0, 37);
  const OperatorParams p{40, WindowTerms{300}, 16};
  const Kernel f = Kernel::fejer(std::numbers::pi, 0.0);
  const auto grid = apply_on_grid(f, signals::f2_extended(), p, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = kantorovich_apply(f, signals::f2_extended(), p, xs[i]);
    CHECK(std::memcmp(&v, &grid[i], sizeof v) == 0);
  }
}

TEST_CASE("parallel moment report is bitwise equal to the serial reference") {
  const auto grid = moment_period_grid(128);
  for (const Kernel& k : {Kernel::bspline(2), Kernel::bspline(5), Kernel::fejer(std::numbers::pi, 0.0)}) {
    const TruncationPolicy p = k.is_bspline() ? TruncationPolicy{ExactSupport{}} : TruncationPolicy{WindowTerms{400}};
    for (int nu = 0; nu <= 2; ++nu) {
      const auto a = moment_report(k, nu, grid, p);
      const auto b = moment_report_serial(k, nu, grid, p);
      CHECK(bitwise_equal(a.algebraic, b.algebraic));
      CHECK(bitwise_equal(a.absolute, b.absolute));
      CHECK(std::memcmp(&a.sup_absolute, &b.sup_absolute, sizeof(double)) == 0);
    }
  }
}

TEST_CASE("exceptions inside the parallel region propagate") {
  const std::vector<double> xs{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(apply_on_grid(Kernel::fejer(1.0, 0.5), signals::f2(), {10, TailTolerance{1e-3}, 16}, xs),
                  PolicyError);
}
