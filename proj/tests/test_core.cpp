#include "doctest.h"
#include "support.hpp"

using namespace ddprice;

TEST_SUITE_BEGIN("core");

TEST_CASE("project_box clamps coordinatewise") {
  const FeasibleBox box(0.0, 1.0, 3);
  CHECK(project_box({-0.5, 0.25, 2.0}, box) == Vec{0.0, 0.25, 1.0});

  SUBCASE("interior points are fixed") {
    const FeasibleBox b2(0.01, 10.0, 2);
    CHECK(project_box({5.0, 0.01}, b2) == Vec{5.0, 0.01});
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(project_box({0.5, 0.5}, box), std::invalid_argument);
  }
}

TEST_CASE("project_box is idempotent and non-expansive") {
  const FeasibleBox box(-1.0, 2.5, 6);
  RngStream rng(derive_key(7, 0, stream_method::kTest, 0, 0));
  for (int trial = 0; trial < 200; ++trial) {
    Vec x(box.dim()), y(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      x[i] = rng.next_uniform(-10.0, 10.0);
      y[i] = rng.next_uniform(-10.0, 10.0);
    }
    const Vec px = project_box(x, box);
    CHECK(project_box(px, box) == px);
    CHECK(box.contains(px));
    CHECK(norm2(sub(project_box(x, box), project_box(y, box))) <= norm2(sub(x, y)) + 1e-12);
  }
}

TEST_CASE("gradient_mapping") {
  const FeasibleBox box(0.0, 1.0, 1);
  SUBCASE("reduces to the gradient when the step stays interior") {
    const Vec g = gradient_mapping({0.5}, {1.0}, 0.25, box);
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("vanishes at a boundary point pushed outward") {
    const Vec g = gradient_mapping({0.0}, {1.0}, 0.25, box);
    CHECK(g[0] == 0.0);
    const Vec g2 = gradient_mapping({1.0}, {-4.0}, 0.25, box);
    CHECK(g2[0] == 0.0);
  }
  SUBCASE("zero gradient gives a zero mapping anywhere feasible") {
    const FeasibleBox b2(0.0, 1.0, 4);
    RngStream rng(derive_key(11, 0, stream_method::kTest, 0, 0));
    for (int trial = 0; trial < 50; ++trial) {
      const Vec x = ddtest::random_feasible(b2, rng);
      const Vec g = gradient_mapping(x, Vec(4, 0.0), 0.5, b2);
      CHECK(norm2(g) == 0.0);
    }
  }
  SUBCASE("nonpositive eta throws") {
    CHECK_THROWS_AS(gradient_mapping({0.5}, {1.0}, 0.0, box), std::invalid_argument);
    CHECK_THROWS_AS(gradient_mapping({0.5}, {1.0}, -1.0, box), std::invalid_argument);
  }
}

TEST_CASE("FeasibleBox validation and geometry") {
  CHECK_THROWS_AS(FeasibleBox(1.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleBox(2.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleBox(0.0, 1.0, 0), std::invalid_argument);
  const FeasibleBox box(0.0, 2.0, 4);
  CHECK(box.diameter() == doctest::Approx(4.0));  // sqrt(4) * 2
  CHECK(box.contains({0.0, 2.0, 1.0, 0.5}));
  CHECK_FALSE(box.contains({0.0, 2.0001, 1.0, 0.5}));
}

TEST_CASE("Matrix::apply multiplies row-major") {
  Matrix m(2, 3);
  m(0, 0) = 1.0; m(0, 1) = 2.0; m(0, 2) = 3.0;
  m(1, 0) = -1.0; m(1, 1) = 0.5; m(1, 2) = 0.0;
  const Vec y = m.apply({1.0, 2.0, 3.0});
  CHECK(y[0] == doctest::Approx(14.0));
  CHECK(y[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(m.apply({1.0, 2.0}), std::invalid_argument);
}

TEST_SUITE_END();
