#include <catch2/catch_amalgamated.hpp>

#include "torix/generate.hpp"
#include "torix/sheaf.hpp"

using namespace torix;

namespace {

const ProjectiveLinePoint kA(1, 0);
const ProjectiveLinePoint kB(0, 1);
const ProjectiveLinePoint kC(1, 1);
const ProjectiveLinePoint kD(1, 2);

// Fine presentation over the full ray set with the given column lines and
// jumps; coefficients are the canonical kernel of the column matrix.
SheafPresentation fine_presentation(const Fan& fan,
                                    const std::vector<ProjectiveLinePoint>& columns,
                                    const std::vector<long long>& jumps) {
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
        e[j] = jumps[j];
        mm.row_exponents.push_back(std::move(e));
    }
    return SheafPresentation(fan, std::move(mm));
}

} // namespace

TEST_CASE("chart graded dimensions on the locally free Hirzebruch example") {
    const Fan f0 = make_hirzebruch(0);
    const SheafPresentation p = fine_presentation(f0, {kA, kC, kB, kD}, {1, 1, 1, 1});
    const GradedDimGrid grid = chart_graded_dims(p, 0, 3);

    CHECK(grid.at(0, 0) == 2);
    CHECK(grid.at(-1, 0) == 1);
    CHECK(grid.at(0, -1) == 1);
    CHECK(grid.at(-2, 0) == 0);
    CHECK(grid.at(3, 3) == 2);

    // Characters recover the pairing values they were indexed by.
    for (long long a = -2; a <= 2; ++a) {
        for (long long b = -2; b <= 2; ++b) {
            const Character m = grid.character_at(a, b);
            CHECK(pairing(m, f0.ray(0)) == a);
            CHECK(pairing(m, f0.ray(1)) == b);
        }
    }
}

TEST_CASE("the degreewise gap of a strict coarsening is the skyscraper") {
    const Fan f0 = make_hirzebruch(0);
    const SheafPresentation p = fine_presentation(f0, {kA, kA, kB, kC}, {1, 1, 1, 1});
    const BundleData bd = bidual(p);

    const GradedDimGrid grid = chart_graded_dims(p, 0, 3);
    const Character m = grid.character_at(-1, -1);
    CHECK(grid.at(-1, -1) == 0);
    CHECK(sigma_family_dim(bd, 0, m) == 1);
}

TEST_CASE("bidual filtration data") {
    const Fan f0 = make_hirzebruch(0);

    SECTION("locally free: bidual is the sheaf itself, up to basis") {
        Rng rng(71);
        for (int iter = 0; iter < 10; ++iter) {
            const BundleData b = random_bundle(rng, f0, 2, 3);
            const MonomialResolution res = build_resolution(b);
            const SheafPresentation p(f0, res.matrix);
            const BundleData via_columns = cokernel_filtrations(res, f0);
            const BundleData via_bidual = bidual(p);
            CHECK(equivariant_iso(via_bidual, via_columns));
            CHECK(coarse_partition(via_bidual) == coarse_partition(via_columns));
        }
    }
    SECTION("adjacent equal columns merge in the bidual's coarse partition") {
        const SheafPresentation p = fine_presentation(f0, {kA, kA, kB, kC}, {1, 1, 1, 1});
        const Partition coarse = coarse_partition(bidual(p));
        REQUIRE(coarse.size() == 3);
        CHECK(coarse.parts[0] == std::vector<std::size_t>{0, 1});
    }
    SECTION("bidual keeps the jumps") {
        const SheafPresentation p = fine_presentation(f0, {kA, kC, kB, kD}, {2, 1, 3, 1});
        CHECK(bidual(p).jumps() == DivisorVector{2, 1, 3, 1});
    }
}

TEST_CASE("skyscraper support and lengths") {
    const Fan f0 = make_hirzebruch(0);

    SECTION("locally free presentations have no skyscraper") {
        const SheafPresentation p = fine_presentation(f0, {kA, kC, kB, kD}, {1, 2, 1, 1});
        const SkyscraperReport report = skyscraper_support(p);
        CHECK(report.support.empty());
        CHECK(report.lengths.empty());
    }
    SECTION("one offending cone, jumps 1: length 1") {
        const SheafPresentation p = fine_presentation(f0, {kA, kA, kB, kC}, {1, 1, 1, 1});
        const SkyscraperReport report = skyscraper_support(p);
        REQUIRE(report.support == std::vector<std::size_t>{0});
        CHECK(report.lengths.at(0) == 1);
    }
    SECTION("one offending cone, jumps (2,2,1,1): length 4") {
        const SheafPresentation p = fine_presentation(f0, {kA, kA, kB, kC}, {2, 2, 1, 1});
        const SkyscraperReport report = skyscraper_support(p);
        REQUIRE(report.support == std::vector<std::size_t>{0});
        CHECK(report.lengths.at(0) == 4);
        CHECK(report.lengths.at(0) > 1);
    }
    SECTION("oracle lengths equal the product of the two adjacent jumps") {
        // Independent closed form: on a support cone the dimension gap sits
        // exactly on the characters with both pairings in [-i^rho, -1].
        Rng rng(907);
        const std::vector<Fan> fans{make_hirzebruch(0), make_hirzebruch(2),
                                    blow_up(make_projective_plane(), 0)};
        for (int iter = 0; iter < 20; ++iter) {
            const Fan& fan = fans[static_cast<std::size_t>(iter) % fans.size()];
            const SheafPresentation p = random_presentation(rng, fan, 3);
            const SkyscraperReport report = skyscraper_support(p);
            const DivisorVector jumps = p.jumps();
            for (std::size_t k : report.support) {
                CHECK(report.lengths.at(k) == jumps[k] * jumps[fan.next(k)]);
            }
        }
    }
    SECTION("support formula matches the oracle on random presentations") {
        Rng rng(311);
        const std::vector<Fan> fans{make_projective_plane(), make_hirzebruch(1),
                                    blow_up(make_hirzebruch(0), 2)};
        for (int iter = 0; iter < 18; ++iter) {
            const Fan& fan = fans[static_cast<std::size_t>(iter) % fans.size()];
            const SheafPresentation p = random_presentation(rng, fan, 2);
            const long long radius = default_box_radius(p);
            const SkyscraperReport report = skyscraper_support(p);
            for (std::size_t k = 0; k < fan.cone_count(); ++k) {
                const bool in_support = std::find(report.support.begin(),
                                                  report.support.end(),
                                                  k) != report.support.end();
                CHECK((chart_gap_sum(p, k, radius) > 0) == in_support);
            }
            for (const auto& [cone, len] : report.lengths) CHECK(len > 0);
        }
    }
}

TEST_CASE("degreewise inclusion: presentation dims never exceed the bidual's") {
    Rng rng(401);
    const Fan fan = make_hirzebruch(2);
    for (int iter = 0; iter < 8; ++iter) {
        const SheafPresentation p = random_presentation(rng, fan, 2);
        const BundleData bd = bidual(p);
        const long long radius = default_box_radius(p);
        for (std::size_t cone = 0; cone < fan.cone_count(); ++cone) {
            const GradedDimGrid grid = chart_graded_dims(p, cone, radius);
            for (long long a = -radius; a <= radius; ++a) {
                for (long long b = -radius; b <= radius; ++b) {
                    REQUIRE(grid.at(a, b) <=
                            sigma_family_dim(bd, cone, grid.character_at(a, b)));
                }
            }
        }
    }
}

TEST_CASE("skyscraper lengths stabilize in the box radius") {
    Rng rng(577);
    const Fan fan = make_hirzebruch(0);
    for (int iter = 0; iter < 6; ++iter) {
        const SheafPresentation p = random_presentation(rng, fan, 3);
        const long long r0 = default_box_radius(p);
        const SkyscraperReport base = skyscraper_support(p, r0);
        for (long long extra = 1; extra <= 2; ++extra) {
            const SkyscraperReport wider = skyscraper_support(p, r0 + extra);
            CHECK(wider.support == base.support);
            CHECK(wider.lengths == base.lengths);
        }
    }
}

TEST_CASE("boundary of the stabilization box matches the bidual on locally free input") {
    Rng rng(599);
    const Fan fan = make_hirzebruch(1);
    const BundleData b = random_bundle(rng, fan, 2, 3);
    const SheafPresentation p(fan, build_resolution(b).matrix);
    const BundleData bd = bidual(p);
    const long long radius = default_box_radius(p) + 1;
    for (std::size_t cone = 0; cone < fan.cone_count(); ++cone) {
        const GradedDimGrid grid = chart_graded_dims(p, cone, radius);
        for (long long t = -radius; t <= radius; ++t) {
            for (long long edge : {-radius, radius}) {
                CHECK(grid.at(edge, t) ==
                      sigma_family_dim(bd, cone, grid.character_at(edge, t)));
                CHECK(grid.at(t, edge) ==
                      sigma_family_dim(bd, cone, grid.character_at(t, edge)));
            }
        }
    }
}

TEST_CASE("coarsen_presentation") {
    const Fan f0 = make_hirzebruch(0);

    SECTION("strict coarsening assembles the selected columns") {
        const SheafPresentation p = fine_presentation(f0, {kA, kA, kB, kC}, {1, 1, 1, 1});
        const MonomialResolution res = coarsen_presentation(p);
        REQUIRE(res.matrix.partition.size() == 3);
        CHECK(res.cokernel_map.cols() == 3);
        CHECK(res.matrix.partition.parts[0] == std::vector<std::size_t>{0, 1});
        // Selected column of the merged part is the shared column line.
        CHECK(p.column_line(0) == p.column_line(1));
        CHECK(ProjectiveLinePoint(res.cokernel_map(0, 0), res.cokernel_map(1, 0)) ==
              p.column_line(0));
        CHECK((res.cokernel_map * res.matrix.coeffs).is_zero());
        CHECK(check_local_freeness(res, f0).locally_free());
    }
    SECTION("already coarse: identity coarsening") {
        const SheafPresentation p = fine_presentation(f0, {kA, kC, kB, kD}, {1, 1, 1, 1});
        const MonomialResolution res = coarsen_presentation(p);
        CHECK(res.matrix.partition == p.partition());
        CHECK(res.matrix.row_exponents == p.matrix().row_exponents);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(ProjectiveLinePoint(res.cokernel_map(0, j), res.cokernel_map(1, j)) ==
                  p.column_line(j));
        }
        CHECK(cokernel_filtrations(res, f0) == bidual(p));
    }
    SECTION("sections not sectioning the projection are rejected") {
        const SheafPresentation p = fine_presentation(f0, {kA, kA, kB, kC}, {1, 1, 1, 1});
        try {
            coarsen_presentation(p, {2, 1, 3});
            FAIL("expected BadSection");
        } catch (const validation_error& e) {
            CHECK(e.code() == "BadSection");
        }
        CHECK_THROWS_AS(coarsen_presentation(p, {0, 2}), validation_error);
    }
    SECTION("every valid section gives the same coarse resolution") {
        const SheafPresentation p = fine_presentation(f0, {kA, kA, kB, kC}, {1, 1, 1, 1});
        const MonomialResolution via0 = coarsen_presentation(p, {0, 2, 3});
        const MonomialResolution via1 = coarsen_presentation(p, {1, 2, 3});
        CHECK(via0.cokernel_map == via1.cokernel_map);
        CHECK(via0.matrix.coeffs == via1.matrix.coeffs);
        CHECK(via0.matrix.partition == via1.matrix.partition);
    }
    SECTION("coarsening always reproduces the bidual's resolution") {
        Rng rng(613);
        for (int iter = 0; iter < 10; ++iter) {
            const SheafPresentation p =
                random_presentation(rng, f0, 2, /*intervals_only=*/true);
            const BundleData bd = bidual(p);
            if (coarse_partition(bd).size() <= 2) continue;
            const MonomialResolution coarse = coarsen_presentation(p);
            const MonomialResolution direct = build_resolution(bd);
            CHECK(coarse.cokernel_map == direct.cokernel_map);
            CHECK(coarse.matrix.coeffs == direct.matrix.coeffs);
            CHECK(coarse.matrix.row_exponents == direct.matrix.row_exponents);
        }
    }
}

TEST_CASE("extension splits") {
    const Fan f0 = make_hirzebruch(0);

    SECTION("proportional columns collect into the first summand") {
        const SheafPresentation p = fine_presentation(f0, {kA, kB, kA, kC}, {1, 2, 3, 1});
        const ExtensionSplit split = extension_split(p, 0);
        CHECK(split.parts1 == std::vector<std::size_t>{0, 2});
        CHECK(split.divisor1 == DivisorVector{1, 0, 3, 0});
        CHECK(split.divisor2 == DivisorVector{0, 2, 0, 1});
    }
    SECTION("pairwise distinct columns give a singleton") {
        const SheafPresentation p = fine_presentation(f0, {kA, kB, kC, kD}, {1, 1, 1, 1});
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(extension_split(p, i).parts1 == std::vector<std::size_t>{i});
        }
    }
    SECTION("three equal columns") {
        const SheafPresentation p = fine_presentation(f0, {kA, kA, kA, kB}, {1, 1, 1, 1});
        const ExtensionSplit split = extension_split(p, 0);
        CHECK(split.parts1 == std::vector<std::size_t>{0, 1, 2});
    }
    SECTION("divisors sum to the jumps on Pi") {
        Rng rng(677);
        for (int iter = 0; iter < 12; ++iter) {
            const SheafPresentation p = random_presentation(rng, f0, 3);
            const ExtensionSplit split = extension_split(p, 0);
            const DivisorVector jumps = p.jumps();
            for (std::size_t r = 0; r < jumps.size(); ++r) {
                CHECK(split.divisor1[r] + split.divisor2[r] == jumps[r]);
            }
        }
    }
}

TEST_CASE("torsion is rejected at presentation construction") {
    const Fan f0 = make_hirzebruch(0);
    MonomialMatrix mm;
    std::vector<std::vector<std::size_t>> parts{{0}, {1}, {2}, {3}};
    mm.partition = make_partition(parts);
    for (std::size_t j = 0; j < 4; ++j) {
        ExponentVector e(4, 0);
        e[j] = 1;
        mm.row_exponents.push_back(std::move(e));
    }
    // Full rank, but both kernel vectors of the transpose vanish on the
    // first two coordinates, so two cokernel columns are zero.
    mm.coeffs = Mat{{Scalar(1), Scalar(0)},
                    {Scalar(0), Scalar(1)},
                    {Scalar(0), Scalar(0)},
                    {Scalar(0), Scalar(0)}};
    try {
        SheafPresentation p(f0, mm);
        FAIL("expected NotTorsionFree");
    } catch (const validation_error& e) {
        CHECK(e.code() == "NotTorsionFree");
    }
}
