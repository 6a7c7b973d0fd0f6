#include <catch2/catch_amalgamated.hpp>

#include "torix/generate.hpp"
#include "torix/linalg.hpp"
#include "torix/rational.hpp"

using namespace torix;

namespace {

Mat from_ints(std::initializer_list<std::initializer_list<long long>> rows) {
    Mat m(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (long long v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

} // namespace

TEST_CASE("scalar parsing and formatting round-trip") {
    CHECK(format_scalar(parse_scalar("3/4")) == "3/4");
    CHECK(format_scalar(parse_scalar("-6/8")) == "-3/4");
    CHECK(format_scalar(parse_scalar("5")) == "5");
    CHECK(format_scalar(parse_scalar("0")) == "0");
    CHECK(format_scalar(make_scalar(7, -14)) == "-1/2");
    CHECK(format_scalar(parse_scalar("4/-6")) == "-2/3");
    CHECK_THROWS_AS(parse_scalar("1/0"), validation_error);
    CHECK_THROWS_AS(parse_scalar("abc"), validation_error);
}

TEST_CASE("rank on the documented cases") {
    CHECK(rank(Mat::identity(2)) == 2);

    // 3x2 matrix with equal columns.
    CHECK(rank(from_ints({{1, 1}, {2, 2}, {5, 5}})) == 1);

    CHECK(rank(from_ints({{1, 0, 1}, {0, 1, 1}})) == 2);

    CHECK(rank(Mat(3, 4)) == 0);
}

TEST_CASE("kernel basis on the documented cases") {
    SECTION("one relation: a + c = 0, b + c = 0") {
        const Mat k = kernel_basis(from_ints({{1, 0, 1}, {0, 1, 1}}));
        REQUIRE(k.rows() == 3);
        REQUIRE(k.cols() == 1);
        CHECK(k(0, 0) == 1);
        CHECK(k(1, 0) == 1);
        CHECK(k(2, 0) == -1);
    }
    SECTION("full rank square matrix has no kernel") {
        const Mat k = kernel_basis(from_ints({{2, 1}, {1, 1}}));
        CHECK(k.rows() == 2);
        CHECK(k.cols() == 0);
    }
    SECTION("zero matrix has the identity as kernel") {
        CHECK(kernel_basis(Mat(2, 3)) == Mat::identity(3));
    }
}

TEST_CASE("projective line points normalize canonically") {
    const ProjectiveLinePoint p(Scalar(2), Scalar(4));
    CHECK(p.a() == 1);
    CHECK(p.b() == 2);

    CHECK(columns_proportional(ProjectiveLinePoint(1, 0), ProjectiveLinePoint(1, 0)));
    CHECK_FALSE(columns_proportional(ProjectiveLinePoint(1, 0), ProjectiveLinePoint(0, 1)));
    CHECK(columns_proportional(ProjectiveLinePoint(1, 2), ProjectiveLinePoint(2, 4)));

    // Normalizing twice equals normalizing once.
    const ProjectiveLinePoint again(p.a(), p.b());
    CHECK(again == p);

    CHECK_THROWS_AS(ProjectiveLinePoint(0, 0), validation_error);
}

TEST_CASE("rank respects transposition and kernel dimensions add up") {
    Rng rng(11);
    for (int iter = 0; iter < 60; ++iter) {
        const std::size_t rows = static_cast<std::size_t>(rng.range(1, 5));
        const std::size_t cols = static_cast<std::size_t>(rng.range(1, 5));
        Mat m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.range(-4, 4);

        const std::size_t r = rank(m);
        CHECK(r == rank(m.transposed()));

        const Mat k = kernel_basis(m);
        CHECK(r + k.cols() == cols);
        CHECK((m * k).is_zero());
    }
}

TEST_CASE("determinant agrees with rank degeneracy") {
    Rng rng(23);
    for (int iter = 0; iter < 40; ++iter) {
        const std::size_t n = static_cast<std::size_t>(rng.range(1, 4));
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.range(-3, 3);
        CHECK((det(m) != 0) == (rank(m) == n));
    }
}
