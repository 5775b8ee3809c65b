#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "../support/oracles.hpp"
#include "bppr/basis.hpp"
#include "bppr/error.hpp"
#include "bppr/rng.hpp"
#include "bppr/testbed.hpp"

using namespace bppr;

TEST_CASE("knot bounds") {
  SUBCASE("direct substitution") {
    const std::vector<double> proj{0.0, 1.0};
    const KnotBounds kb = knot_bounds(proj, 0.8, 2.0 / 3.0);
    CHECK(kb.upper == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(kb.lower == doctest::Approx(-0.4).epsilon(1e-14));
  }
  SUBCASE("p0 = 1 puts the lower bound at the minimum") {
    const std::vector<double> proj{3.0, -2.0, 7.5, 1.0};
    CHECK(knot_bounds(proj, 0.75, 1.0).lower == -2.0);
  }
  SUBCASE("0..99 at q = 0.9") {
    std::vector<double> proj(100);
    std::iota(proj.begin(), proj.end(), 0.0);
    std::reverse(proj.begin(), proj.end());
    const KnotBounds kb = knot_bounds(proj, 0.9, 2.0 / 3.0);
    const double U = oracle::quantile(proj, 0.9);
    CHECK(U == doctest::Approx(89.1).epsilon(1e-14));
    CHECK(kb.upper == doctest::Approx(U).epsilon(1e-14));
    CHECK(kb.lower == doctest::Approx(U - (U - 0.0) * 1.5).epsilon(1e-14));
  }
  SUBCASE("constant projections") {
    const std::vector<double> proj(10, 4.2);
    CHECK_THROWS_AS(knot_bounds(proj, 0.9, 0.5), DegenerateProjection);
  }
}

TEST_CASE("interior knots") {
  SUBCASE("five equispaced points") {
    const std::vector<double> proj{5, 0, 4, -3, 1, 2, 3};
    const auto k = interior_knots(proj, 0.5, 4);
    CHECK(k == std::vector<double>{1, 2, 3, 4, 5});
  }
  SUBCASE("exact quartiles of 0..100") {
    std::vector<double> proj(101);
    std::iota(proj.begin(), proj.end(), 0.0);
    const auto k = interior_knots(proj, -1.0, 4);
    CHECK(k == std::vector<double>{0, 25, 50, 75, 100});
  }
  SUBCASE("37 uniform draws against a sort-based oracle") {
    Rng rng(11);
    std::vector<double> proj;
    for (int i = 0; i < 37; ++i) proj.push_back(rng.uniform(0.0, 1.0));
    for (int i = 0; i < 20; ++i) proj.push_back(rng.uniform(-2.0, -0.1));
    const auto k = interior_knots(proj, 0.0, 4);
    std::vector<double> above(proj.begin(), proj.begin() + 37);
    for (int l = 0; l <= 4; ++l) CHECK(std::abs(k[l] - oracle::quantile(above, l / 4.0)) < 1e-12);
  }
  SUBCASE("too few values above t0") {
    const std::vector<double> proj{0, 1, 2, 3, 4, 5};
    CHECK_THROWS_AS(interior_knots(proj, 1.5, 4), DegenerateKnots);
  }
  SUBCASE("tied upper knots") {
    const std::vector<double> proj{2, 2, 2, 2, 2, 2, 0};
    CHECK_THROWS_AS(interior_knots(proj, 1.0, 4), DegenerateKnots);
  }
}

TEST_CASE("spline basis values") {
  const std::vector<double> knots{0.5, 0.75, 1.0};
  SUBCASE("hand evaluation") {
    const auto b = eval_spline_basis(1.0, 0.0, knots);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == doctest::Approx(1.0));
    CHECK(b[1] == doctest::Approx(0.1875).epsilon(1e-14));
  }
  SUBCASE("left of t0 is exactly zero") {
    for (double u : {-5.0, -1e-300, 0.0}) {
      for (double v : eval_spline_basis(u, 0.0, knots)) CHECK(v == 0.0);
    }
  }
  SUBCASE("only the linear term below the first knot") {
    const std::vector<double> far{3.0, 4.0, 5.0, 6.0, 7.0};
    const auto b = eval_spline_basis(2.0, 1.0, far);
    CHECK(b[0] == 1.0);
    for (std::size_t l = 1; l < b.size(); ++l) CHECK(b[l] == 0.0);
  }
  SUBCASE("agrees with the naive evaluator") {
    Rng rng(3);
    const std::vector<double> k5{0.1, 0.4, 0.45, 1.2, 2.0};
    for (int i = 0; i < 500; ++i) {
      const double u = rng.uniform(-1.0, 3.0);
      const auto a = eval_spline_basis(u, -0.3, k5);
      const auto b = oracle::spline_basis(u, -0.3, k5);
      for (std::size_t l = 0; l < a.size(); ++l) CHECK(std::abs(a[l] - b[l]) < 1e-12);
    }
  }
}

TEST_CASE("spline smoothness contract") {
  const double t0 = -0.2;
  const std::vector<double> knots{0.0, 0.3, 0.55, 0.9, 1.4};
  const double range = knots.back() - t0;
  const double h = 1e-4 * range;
  auto f = [&](double u, int l) { return eval_spline_basis(u, t0, knots)[l]; };
  const int K = 4;

  for (int l = 0; l < K; ++l) {
    // affine beyond the last knot
    for (int s = 1; s <= 10; ++s) {
      const double u = knots.back() + s * h;
      const double d2 = f(u + h, l) - 2 * f(u, l) + f(u - h, l);
      const double scale = std::max(1.0, std::abs(f(u, l)));
      CHECK(std::abs(d2) < 1e-8 * scale);
    }
    // one-sided second derivatives agree at interior knots
    double min_gap = knots.back() - knots[0];
    for (int k = 0; k < K; ++k) min_gap = std::min(min_gap, knots.back() - knots[k]);
    const double third = 12.0 / min_gap;  // bound on |f'''|
    for (int k = 0; k < K; ++k) {
      const double t = knots[k];
      const double left = (f(t, l) - 2 * f(t - h, l) + f(t - 2 * h, l)) / (h * h);
      const double right = (f(t + 2 * h, l) - 2 * f(t + h, l) + f(t, l)) / (h * h);
      CHECK(std::abs(left - right) < 4.0 * third * h + 1e-4);
    }
  }
  // continuous at t0 with a unit slope jump in b_1
  const double slope_left = (f(t0, 0) - f(t0 - h, 0)) / h;
  const double slope_right = (f(t0 + h, 0) - f(t0, 0)) / h;
  CHECK(slope_left == 0.0);
  CHECK(slope_right == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("categorical ridge column") {
  Eigen::MatrixXd D(4, 2);
  D << 1, 0,  //
      0, 0,   //
      1, 1,   //
      0, 1;
  const std::vector<int> one{0}, both{0, 1};
  const Eigen::VectorXd c1 = categorical_ridge_column(D, one);
  const Eigen::VectorXd c2 = categorical_ridge_column(D, both);
  CHECK(c1(0) == 1.0);
  CHECK(c2(1) == 0.0);
  CHECK(c2(2) == 1.0);
  for (int i = 0; i < 4; ++i) CHECK(c2(i) == D.row(i).maxCoeff());
}

TEST_CASE("component basis and design") {
  const auto split = simulate(*make_scenario("friedman"), 120, 6, 1.0, 5, 10);
  const Dataset data = prepare_dataset(split.train.X, split.train.y);

  SUBCASE("coordinate direction below the data") {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(6);
    theta(2) = 1.0;
    const double t0 = data.X.col(2).minCoeff() - 0.5;
    const RidgeComponent r = make_component(data.inputs(), {2}, theta, t0, 4);
    const Eigen::MatrixXd B = build_component_basis(data.inputs(), r);
    REQUIRE(B.cols() == 4);
    for (int i = 0; i < data.n(); ++i) CHECK(B(i, 0) == doctest::Approx(data.X(i, 2) - t0).epsilon(1e-14));
  }
  SUBCASE("empty model is the intercept") {
    const Eigen::MatrixXd B = build_design(data.inputs(), {});
    CHECK(B.cols() == 1);
    CHECK((B.array() == 1.0).all());
  }
  SUBCASE("random components against the naive evaluator") {
    Rng rng(8);
    std::vector<RidgeComponent> comps;
    for (int m = 0; m < 4; ++m) {
      std::vector<int> J{static_cast<int>(rng.index(3)), 3 + static_cast<int>(rng.index(3))};
      Eigen::VectorXd theta = Eigen::VectorXd::Zero(6);
      theta(J[0]) = rng.normal();
      theta(J[1]) = rng.normal();
      theta.normalize();
      const Eigen::VectorXd u = data.X * theta;
      const double t0 = rng.uniform(u.minCoeff() - 0.5, oracle::quantile({u.data(), u.data() + u.size()}, 0.8));
      comps.push_back(make_component(data.inputs(), J, theta, t0, 4));
    }
    const Eigen::MatrixXd B = build_design(data.inputs(), comps);
    const Eigen::MatrixXd ref = oracle::design(data, comps);
    CHECK(B.cols() == 17);
    CHECK((B - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
}
