#include <catch2/catch_amalgamated.hpp>

#include "torix/generate.hpp"
#include "torix/resolution.hpp"
#include "torix/sheaf.hpp"

using namespace torix;

namespace {

const ProjectiveLinePoint kA(1, 0);
const ProjectiveLinePoint kB(0, 1);
const ProjectiveLinePoint kC(1, 1);
const ProjectiveLinePoint kD(1, 2);

BundleData make_bundle(const Fan& fan, std::vector<ProjectiveLinePoint> lines,
                       std::vector<long long> jumps) {
    std::vector<RayFiltration> filts;
    for (std::size_t k = 0; k < fan.ray_count(); ++k) {
        RayFiltration rf;
        rf.jump = jumps[k];
        if (jumps[k] > 0) rf.line = lines[k];
        filts.push_back(rf);
    }
    return BundleData(fan, filts);
}

MonomialMatrix fine_matrix(const Fan& fan, const std::vector<ProjectiveLinePoint>& columns) {
    const std::size_t s = fan.ray_count();
    Mat cokernel(2, s);
    for (std::size_t j = 0; j < s; ++j) {
        cokernel(0, j) = columns[j].a();
        cokernel(1, j) = columns[j].b();
    }
    MonomialMatrix mm;
    mm.coeffs = kernel_basis(cokernel);
    std::vector<std::vector<std::size_t>> parts;
    for (std::size_t j = 0; j < s; ++j) parts.push_back({j});
    mm.partition = make_partition(parts);
    for (std::size_t j = 0; j < s; ++j) {
        ExponentVector e(s, 0);
        e[j] = 1;
        mm.row_exponents.push_back(std::move(e));
    }
    return mm;
}

} // namespace

TEST_CASE("build_resolution on the generic Hirzebruch example") {
    const Fan f0 = make_hirzebruch(0);
    const BundleData b = make_bundle(f0, {kA, kC, kB, kD}, {1, 1, 1, 1});
    const MonomialResolution res = build_resolution(b);

    REQUIRE(res.matrix.partition.size() == 4);
    CHECK(res.source_rank() == 2);

    const Mat expected_cokernel{{Scalar(1), Scalar(1), Scalar(0), Scalar(1)},
                                {Scalar(0), Scalar(1), Scalar(1), Scalar(2)}};
    CHECK(res.cokernel_map == expected_cokernel);

    const Mat expected_coeffs{{Scalar(1), Scalar(1)},
                              {Scalar(-1), Scalar(-2)},
                              {Scalar(1), Scalar(0)},
                              {Scalar(0), Scalar(1)}};
    CHECK(res.matrix.coeffs == expected_coeffs);

    for (std::size_t i = 0; i < 4; ++i) {
        ExponentVector e(4, 0);
        e[i] = 1;
        CHECK(res.matrix.row_exponents[i] == e);
    }

    CHECK((res.cokernel_map * res.matrix.coeffs).is_zero());
    CHECK_NOTHROW(validate_monomial_matrix(res.matrix, f0));
    CHECK(check_local_freeness(res, f0).locally_free());
}

TEST_CASE("build_resolution on the plane has the Euler shape") {
    const Fan p2 = make_projective_plane();
    const MonomialResolution res =
        build_resolution(make_bundle(p2, {kA, kB, kC}, {1, 1, 1}));
    CHECK(res.matrix.partition.size() == 3);
    CHECK(res.matrix.coeffs.rows() == 3);
    CHECK(res.matrix.coeffs.cols() == 1);
    CHECK(res.cokernel_map.rows() == 2);
    CHECK(rank(res.cokernel_map) == 2);
}

TEST_CASE("build_resolution refuses split bundles") {
    const Fan p2 = make_projective_plane();
    try {
        build_resolution(make_bundle(p2, {kA, kA, kB}, {1, 1, 1}));
        FAIL("expected splits_error");
    } catch (const splits_error& e) {
        CHECK(e.parts() == 2);
    }
}

TEST_CASE("cokernel filtrations") {
    const Fan p2 = make_projective_plane();

    SECTION("round-trip with build_resolution") {
        const BundleData b = make_bundle(p2, {kA, kC, kB}, {2, 1, 3});
        CHECK(cokernel_filtrations(build_resolution(b), p2) == b);
    }
    SECTION("columns become the lines, ray by ray") {
        const MonomialMatrix mm = fine_matrix(p2, {kA, kC, kB});
        const MonomialResolution res{mm, Mat{{Scalar(1), Scalar(1), Scalar(0)},
                                             {Scalar(0), Scalar(1), Scalar(1)}}};
        const BundleData out = cokernel_filtrations(res, p2);
        CHECK(*out.line(0) == kA);
        CHECK(*out.line(1) == kC);
        CHECK(*out.line(2) == kB);
        CHECK(out.jump(0) == 1);
    }
    SECTION("equal adjacent columns coarsen strictly") {
        const Fan f0 = make_hirzebruch(0);
        const std::vector<ProjectiveLinePoint> cols{kA, kA, kB, kC};
        const MonomialMatrix mm = fine_matrix(f0, cols);
        Mat cokernel(2, 4);
        for (std::size_t j = 0; j < 4; ++j) {
            cokernel(0, j) = cols[j].a();
            cokernel(1, j) = cols[j].b();
        }
        const BundleData out = cokernel_filtrations(MonomialResolution{mm, cokernel}, f0);
        const Partition coarse = coarse_partition(out);
        CHECK(coarse.size() == 3);
        CHECK(coarse.parts[0] == std::vector<std::size_t>{0, 1});
        // The matrix partition refines the output's coarse partition.
        CHECK(is_refinement(mm.partition, coarse).has_value());
    }
}

TEST_CASE("local freeness criteria on hand-checked cases") {
    const Fan f0 = make_hirzebruch(0);

    SECTION("generic resolution passes all three") {
        const BundleData b = make_bundle(f0, {kA, kC, kB, kD}, {1, 1, 1, 1});
        const auto report = check_local_freeness(build_resolution(b), f0);
        REQUIRE(report.cyclic_minors.has_value());
        CHECK(*report.cyclic_minors);
        CHECK(report.fitting);
        CHECK(report.fixed_point_ranks);
        CHECK(report.locally_free());
    }
    SECTION("equal lines on adjacent rays fail all three") {
        const auto report = check_local_freeness(fine_matrix(f0, {kA, kA, kB, kC}), f0);
        REQUIRE(report.cyclic_minors.has_value());
        CHECK_FALSE(*report.cyclic_minors);
        REQUIRE(report.failing_minor.has_value());
        CHECK(*report.failing_minor == std::make_pair(std::size_t{0}, std::size_t{1}));
        CHECK_FALSE(report.fitting);
        CHECK(report.failing_cone_fitting == 0);
        CHECK_FALSE(report.fixed_point_ranks);
        CHECK(report.failing_cone_rank == 0);
        CHECK_FALSE(report.locally_free());
    }
    SECTION("equal lines on opposite rays pass all three") {
        const auto report = check_local_freeness(fine_matrix(f0, {kA, kB, kA, kC}), f0);
        CHECK(report.cyclic_minors == true);
        CHECK(report.fitting);
        CHECK(report.fixed_point_ranks);
    }
}

TEST_CASE("monomial matrix validation") {
    const Fan p2 = make_projective_plane();

    SECTION("build output validates") {
        const BundleData b = make_bundle(p2, {kA, kB, kC}, {1, 2, 1});
        CHECK_NOTHROW(validate_monomial_matrix(build_resolution(b).matrix, p2));
    }
    SECTION("exponent outside its part") {
        MonomialMatrix mm = fine_matrix(p2, {kA, kB, kC});
        mm.row_exponents[0][1] = 1;
        try {
            validate_monomial_matrix(mm, p2);
            FAIL("expected BadSupport");
        } catch (const validation_error& e) {
            CHECK(e.code() == "BadSupport");
        }
    }
    SECTION("missing exponent on a part ray") {
        MonomialMatrix mm = fine_matrix(p2, {kA, kB, kC});
        mm.row_exponents[2][2] = 0;
        CHECK_THROWS_AS(validate_monomial_matrix(mm, p2), validation_error);
    }
    SECTION("rank deficient coefficients") {
        const Fan f0 = make_hirzebruch(0);
        MonomialMatrix mm = fine_matrix(f0, {kA, kB, kC, kD});
        for (std::size_t i = 0; i < 4; ++i) mm.coeffs(i, 1) = 2 * mm.coeffs(i, 0);
        try {
            validate_monomial_matrix(mm, f0);
            FAIL("expected RankDeficient");
        } catch (const validation_error& e) {
            CHECK(e.code() == "RankDeficient");
        }
    }
}

TEST_CASE("exactness oracle: chart dims match the cokernel's sigma families") {
    Rng rng(101);
    const std::vector<Fan> fans{make_projective_plane(), make_hirzebruch(0),
                                make_hirzebruch(2), blow_up(make_hirzebruch(1), 1)};
    for (const Fan& fan : fans) {
        for (int iter = 0; iter < 6; ++iter) {
            const BundleData b = random_bundle(rng, fan, 3, 3);
            const MonomialResolution res = build_resolution(b);
            const BundleData cok = cokernel_filtrations(res, fan);
            const SheafPresentation pres(fan, res.matrix);
            const long long radius = default_box_radius(pres);
            for (std::size_t cone = 0; cone < fan.cone_count(); ++cone) {
                const GradedDimGrid grid = chart_graded_dims(pres, cone, radius);
                for (long long a = -radius; a <= radius; ++a) {
                    for (long long bb = -radius; bb <= radius; ++bb) {
                        REQUIRE(grid.at(a, bb) ==
                                sigma_family_dim(cok, cone, grid.character_at(a, bb)));
                    }
                }
            }
        }
    }
}

TEST_CASE("tri-equivalence of the local freeness criteria") {
    Rng rng(733);
    const std::vector<Fan> fans{make_hirzebruch(0), make_hirzebruch(1),
                                blow_up(make_projective_plane(), 0)};
    int disagreements = 0;
    int negatives = 0;
    for (int iter = 0; iter < 60; ++iter) {
        const Fan& fan = fans[static_cast<std::size_t>(iter) % fans.size()];
        const MonomialMatrix mm = random_interval_matrix(rng, fan, 2);
        const auto report = check_local_freeness(mm, fan);
        REQUIRE(report.cyclic_minors.has_value());
        if (*report.cyclic_minors != report.fitting ||
            report.fitting != report.fixed_point_ranks) {
            ++disagreements;
        }
        if (!report.fixed_point_ranks) ++negatives;
    }
    CHECK(disagreements == 0);
    // The sample must actually contain degenerate draws.
    CHECK(negatives > 0);
}

TEST_CASE("verdicts and filtrations are equivariant") {
    Rng rng(909);
    const Fan fan = make_hirzebruch(1);
    for (int iter = 0; iter < 10; ++iter) {
        const BundleData b = random_bundle(rng, fan, 2, 3);
        const MonomialResolution res = build_resolution(b);
        const std::size_t s = res.matrix.partition.size();

        const Mat g = random_invertible(rng, s - 2);
        std::vector<Scalar> scales(s);
        for (auto& d : scales) {
            d = Scalar(rng.range(1, 4) * (rng.range(0, 1) == 0 ? 1 : -1));
        }

        MonomialResolution other = res;
        other.matrix.coeffs = res.matrix.coeffs * g;
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j + 2 < s; ++j) other.matrix.coeffs(i, j) *= scales[i];
            for (std::size_t r = 0; r < 2; ++r) other.cokernel_map(r, i) /= scales[i];
        }

        CHECK((other.cokernel_map * other.matrix.coeffs).is_zero());
        const auto lhs = check_local_freeness(res, fan);
        const auto rhs = check_local_freeness(other, fan);
        CHECK(lhs.cyclic_minors == rhs.cyclic_minors);
        CHECK(lhs.fitting == rhs.fitting);
        CHECK(lhs.fixed_point_ranks == rhs.fixed_point_ranks);
        CHECK(cokernel_filtrations(res, fan) == cokernel_filtrations(other, fan));
    }
}

TEST_CASE("fine partitions with positive jumps reproduce the generic shape") {
    Rng rng(55);
    const Fan fan = make_hirzebruch(0);
    for (int iter = 0; iter < 20; ++iter) {
        const auto pool = random_line_pool(rng, 4);
        std::vector<long long> jumps;
        for (std::size_t k = 0; k < 4; ++k) jumps.push_back(rng.range(1, 3));
        const BundleData b = make_bundle(fan, {pool[0], pool[1], pool[2], pool[3]}, jumps);
        const MonomialResolution res = build_resolution(b);
        REQUIRE(res.matrix.partition.size() == fan.ray_count());
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(res.matrix.partition.parts[i] == std::vector<std::size_t>{i});
            CHECK(res.matrix.row_exponents[i][i] == jumps[i]);
            CHECK(res.matrix.degrees()[i][i] == jumps[i]);
        }
    }
}
