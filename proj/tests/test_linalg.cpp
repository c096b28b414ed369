#include <doctest.h>

#include <cmath>
#include <limits>

#include "hbp/errors.hpp"
#include "hbp/linalg.hpp"
#include "test_support.hpp"

using namespace hbp;

TEST_CASE("dot") {
    CHECK(dot({1, 2, 3}, {4, 5, 6}) == 32.0);
    CHECK(dot({1.5, -2, 7}, RealVector(3)) == 0.0);
    CHECK(dot({1}, {1}) == 1.0);
    CHECK_THROWS_AS(dot({1, 2}, {1, 2, 3}), DimensionError);
}

TEST_CASE("matvec") {
    CHECK(matvec(RealMatrix::identity(2), {3, 4}) == RealVector{3, 4});
    CHECK(matvec(RealMatrix{{1, 2}, {3, 4}}, {1, 1}) == RealVector{3, 7});
    CHECK(matvec(RealMatrix(2, 2), {5, 6}) == RealVector{0, 0});
    CHECK_THROWS_AS(matvec(RealMatrix(2, 3), {1, 2}), DimensionError);
}

TEST_CASE("outer") {
    CHECK(outer({1, 0}, {0, 1}) == RealMatrix{{0, 1}, {0, 0}});
    CHECK(outer({1}, {1}) == RealMatrix{{1}});
    CHECK(outer(RealVector(2), {3, -4}) == RealMatrix(2, 2));
    const auto m = outer({1, 2, 3}, {4, 5});
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 2);
}

TEST_CASE("norm2") {
    CHECK(norm2({3, 4}) == 5.0);
    CHECK(norm2(RealVector(4)) == 0.0);
    CHECK(norm2({-2.5}) == 2.5);
    CHECK(norm2({1e200, 1e200}) == doctest::Approx(std::sqrt(2.0) * 1e200));
}

TEST_CASE("is_spd") {
    CHECK(is_spd(RealMatrix::identity(2), 1e-12));
    CHECK_FALSE(is_spd(RealMatrix{{1, 0}, {0, -1}}, 1e-12));
    CHECK(is_spd(RealMatrix{{2, 1}, {1, 2}}, 1e-12));
    // Eigenvalues 3 and −1.
    CHECK_FALSE(is_spd(RealMatrix{{1, 2}, {2, 1}}, 1e-12));
    CHECK_FALSE(is_spd(RealMatrix{{1e-15, 0}, {0, 1}}, 1e-14));
    CHECK_THROWS_AS(is_spd(RealMatrix(2, 3), 1e-12), DimensionError);
}

TEST_CASE("construction rejects non-finite and empty values") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(RealVector({1.0, nan}), NonFiniteError);
    CHECK_THROWS_AS(RealVector({inf}), NonFiniteError);
    CHECK_THROWS_AS(RealVector(std::vector<double>{}), DimensionError);
    CHECK_THROWS_AS(RealVector(std::size_t{0}), DimensionError);
    CHECK_THROWS_AS(RealMatrix(1, 2, {1.0, nan}), NonFiniteError);
    CHECK_THROWS_AS(RealMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
    CHECK_THROWS_AS((RealMatrix{{1, 2}, {3}}), DimensionError);
}

TEST_CASE("symmetry predicate") {
    RealMatrix m{{1, 2}, {2, 1}};
    CHECK(m.is_symmetric());
    m(0, 1) = 2.0 + 1e-9;
    CHECK_FALSE(m.is_symmetric(1e-12));
    CHECK(m.is_symmetric(1e-8));
    CHECK(m.asymmetry() == doctest::Approx(1e-9));
}

TEST_CASE("algebraic properties over random inputs") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + uniform_index(rng, 12);
        const std::size_t m = 1 + uniform_index(rng, 12);
        const RealVector a = test::random_vector(rng, n, -10, 10);
        const RealVector b = test::random_vector(rng, n, -10, 10);
        const RealVector c = test::random_vector(rng, m, -10, 10);

        CHECK(dot(a, b) == dot(b, a));
        CHECK(matvec(RealMatrix::identity(n), a) == a);
        CHECK(outer(a, c).transposed() == outer(c, a));
        const double nn = norm2(a);
        CHECK(std::abs(nn * nn - dot(a, a)) <= 1e-12 * dot(a, a));
        CHECK(is_spd(test::random_spd(rng, n), 1e-12));
    }
}
