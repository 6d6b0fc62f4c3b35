#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "qma/errors.hpp"
#include "qma/field_io.hpp"
#include "qma/grid.hpp"
#include "qma/spectral.hpp"
#include "test_util.hpp"

using namespace qma;
using testutil::make_field;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

double rel_err(const ScalarField& got, const ScalarField& want) {
  const double scale = std::max(want.max_abs(), 1.0);
  return (got - want).max_abs() / scale;
}
} // namespace

TEST_CASE("grid construction validates shape") {
  CHECK_NOTHROW(PeriodicGrid({16, 16, 16, 16}));
  CHECK_NOTHROW(PeriodicGrid({8, 10, 12, 14, 16, 18, 20}));
  CHECK_THROWS_AS(PeriodicGrid({16, 16, 16}), ValidationError);           // dim < 4
  CHECK_THROWS_AS(PeriodicGrid({8, 8, 8, 8, 8, 8, 8, 8}), ValidationError); // dim > 7
  CHECK_THROWS_AS(PeriodicGrid({16, 15, 16, 16}), ValidationError);       // odd
  CHECK_THROWS_AS(PeriodicGrid({16, 6, 16, 16}), ValidationError);        // < 8
}

TEST_CASE("coordinates cover [-1/2, 1/2) uniformly") {
  PeriodicGrid g({16, 16, 16, 16});
  CHECK(g.coordinate(0, 0) == doctest::Approx(-0.5));
  CHECK(g.coordinate(0, 8) == doctest::Approx(0.0));
  CHECK(g.coordinate(0, 15) == doctest::Approx(0.4375));
}

TEST_CASE("non-finite values are rejected") {
  PeriodicGrid g({8, 8, 8, 8});
  std::vector<double> v(g.size(), 1.0);
  v[17] = std::nan("");
  ScalarField f(g, std::move(v));
  CHECK_THROWS_AS(require_finite(f, "f"), NonFiniteInput);
  CHECK_THROWS_AS(forward(f), NonFiniteInput);
}

TEST_CASE("mismatched grids are rejected") {
  ScalarField a{PeriodicGrid({8, 8, 8, 8})};
  ScalarField b{PeriodicGrid({8, 8, 8, 10})};
  CHECK_THROWS_AS(a + b, DimensionMismatch);
}

TEST_CASE("mean, integrate and mean-zero projection") {
  PeriodicGrid g({16, 16, 16, 16, 16});
  ScalarField c = make_field(g, [](const std::vector<double>&) { return 3.0; });
  CHECK(mean(c) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(integrate(c) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(project_mean_zero(c).max_abs() <= 1e-14);

  ScalarField f = make_field(g, [](const std::vector<double>& x) {
    return 1.0 + std::sin(kTwoPi * x[0]);
  });
  ScalarField s = make_field(g, [](const std::vector<double>& x) {
    return std::sin(kTwoPi * x[0]);
  });
  CHECK(mean(f) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((project_mean_zero(f) - s).max_abs() <= 1e-14);
  // idempotent
  ScalarField p = project_mean_zero(f);
  CHECK((project_mean_zero(p) - p).max_abs() <= 1e-14);
}

TEST_CASE("FFT round trip is accurate to 1e-13") {
  PeriodicGrid g({16, 16, 16, 16, 16});
  ScalarField f = testutil::random_band_limited(g, 3, 1.0, 42);
  ScalarField back = inverse(forward(f));
  CHECK(rel_err(back, f) <= 1e-13);
}

TEST_CASE("second derivative of a pure mode is exact") {
  PeriodicGrid g({16, 16, 16, 16, 16});
  ScalarField f = make_field(g, [](const std::vector<double>& x) {
    return std::cos(kTwoPi * x[1]);
  });
  ScalarField want = make_field(g, [](const std::vector<double>& x) {
    return -kTwoPi * kTwoPi * std::cos(kTwoPi * x[1]);
  });
  CHECK(rel_err(second_partial(f, 1, 1), want) <= 1e-12);
  // derivatives along untouched axes vanish
  CHECK(second_partial(f, 0, 0).max_abs() <= 1e-9);
  CHECK(second_partial(f, 1, 2).max_abs() <= 1e-9);
}

TEST_CASE("mixed second derivative of a product mode is exact") {
  PeriodicGrid g({16, 16, 16, 16, 16});
  ScalarField f = make_field(g, [](const std::vector<double>& x) {
    return std::sin(kTwoPi * 2 * x[0]) * std::cos(kTwoPi * x[3]);
  });
  ScalarField want = make_field(g, [](const std::vector<double>& x) {
    return -(kTwoPi * 2) * kTwoPi * std::cos(kTwoPi * 2 * x[0]) * std::sin(kTwoPi * x[3]);
  });
  CHECK(rel_err(second_partial(f, 0, 3), want) <= 1e-12);
  CHECK(rel_err(second_partial(f, 3, 0), want) <= 1e-12);
}

TEST_CASE("second derivative of a constant vanishes") {
  PeriodicGrid g({12, 12, 12, 12});
  ScalarField c = make_field(g, [](const std::vector<double>&) { return 7.5; });
  for (int r = 0; r < 4; ++r)
    for (int s = r; s < 4; ++s)
      CHECK(second_partial(c, r, s).max_abs() <= 1e-12);
}

TEST_CASE("spectral Hessian matches 4th-order finite differences") {
  // Band-limited data on a fine grid: FD error O(h^4) with small constants.
  PeriodicGrid g({32, 32, 32, 32});
  ScalarField f = testutil::random_band_limited(g, 2, 1.0, 7);
  for (auto [r, s] : {std::pair{0, 0}, {2, 2}, {0, 1}, {1, 3}}) {
    ScalarField sp = second_partial(f, r, s);
    ScalarField fd = testutil::fd_second_partial(f, r, s);
    const double scale = std::max(sp.max_abs(), 1.0);
    CHECK((sp - fd).max_abs() / scale <= 5e-3);
  }
}

TEST_CASE("hessian_combination equals the sum of individual terms") {
  PeriodicGrid g({12, 12, 12, 12, 12});
  ScalarField f = testutil::random_band_limited(g, 2, 1.0, 11);
  std::vector<HessTerm> terms = {{2.0, 0, 0}, {-1.5, 1, 4}, {0.25, 3, 3}, {1.0, 2, 4}};
  ScalarField combo = hessian_combination(forward(f), terms);
  ScalarField sum{g};
  for (const auto& t : terms) sum = sum + t.coeff * second_partial(f, t.r, t.s);
  CHECK(rel_err(combo, sum) <= 1e-12);
}

TEST_CASE("laplacian and its mean-zero inverse compose to the identity") {
  PeriodicGrid g({16, 16, 16, 16, 16});
  ScalarField u = testutil::random_band_limited(g, 3, 1.0, 23);
  ScalarField f = laplacian(u);
  CHECK(std::abs(mean(f)) <= 1e-13);
  ScalarField back = inverse_laplacian_mean_zero(f);
  CHECK(rel_err(back, u) <= 1e-12);
  CHECK(std::abs(mean(back)) <= 1e-13);
  // the zero mode of the right-hand side is discarded
  ScalarField back2 = inverse_laplacian_mean_zero(f + 5.0 * make_field(g, [](auto&) { return 1.0; }));
  CHECK(rel_err(back2, u) <= 1e-12);
}

TEST_CASE("Parseval identity holds to 1e-12") {
  PeriodicGrid g({16, 16, 16, 16, 16});
  ScalarField f = testutil::random_band_limited(g, 3, 1.0, 5) + 0.7;
  const double direct = mean(f * f);
  const double spectral = parseval_mean_square(forward(f));
  CHECK(std::abs(direct - spectral) / direct <= 1e-12);
}

TEST_CASE("differentiation commutes with mean-zero projection") {
  PeriodicGrid g({12, 12, 12, 12, 12});
  ScalarField f = testutil::random_band_limited(g, 2, 1.0, 31) + 2.0;
  ScalarField a = second_partial(project_mean_zero(f), 0, 2);
  ScalarField b = project_mean_zero(second_partial(f, 0, 2));
  CHECK((a - b).max_abs() <= 1e-13 * std::max(a.max_abs(), 1.0));
}

TEST_CASE("field files round-trip bit-exactly") {
  PeriodicGrid g({8, 8, 10, 8, 8});
  ScalarField f = testutil::random_band_limited(g, 2, 0.3, 99) + 1.0 / 3.0;
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "qma_test_roundtrip.field";
  atomic_write_field(f, path.string());
  ScalarField back = load_field(path.string());
  REQUIRE(back.grid() == f.grid());
  bool identical = true;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::memcmp(&back.values()[i], &f.values()[i], sizeof(double)) != 0) identical = false;
  CHECK(identical);
  std::filesystem::remove(path);
}

TEST_CASE("loading a corrupt header fails cleanly") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "qma_test_corrupt.field";
  {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    std::fputs("{\"version\":1,\"dim\":4}\n", fp);
    std::fclose(fp);
  }
  CHECK_THROWS_AS(load_field(path.string()), ParseError);
  std::filesystem::remove(path);
}
