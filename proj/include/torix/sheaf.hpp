#ifndef TORIX_SHEAF_HPP
#define TORIX_SHEAF_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "torix/bundle.hpp"
#include "torix/errors.hpp"
#include "torix/fan.hpp"
#include "torix/linalg.hpp"
#include "torix/resolution.hpp"

namespace torix {

// Torsion free sheaf of rank 2 presented by an arbitrary monomial matrix
// over a partition of Pi. The induced 2 x s cokernel map on the limit
// vector spaces is derived canonically from the coefficient matrix.
class SheafPresentation {
public:
    SheafPresentation(Fan fan, MonomialMatrix matrix)
        : fan_(std::move(fan)), matrix_(std::move(matrix)) {
        validate_monomial_matrix(matrix_, fan_);
        cokernel_ = kernel_basis(matrix_.coeffs.transposed()).transposed();
        // Torsion freeness needs more than full coefficient rank: a zero
        // cokernel column means the corresponding summand contributes a
        // divisorial torsion quotient.
        for (std::size_t j = 0; j < cokernel_.cols(); ++j) {
            if (cokernel_(0, j) == 0 && cokernel_(1, j) == 0) {
                throw validation_error("NotTorsionFree",
                                       "cokernel column " + std::to_string(j) +
                                           " vanishes; the cokernel has torsion");
            }
        }
    }

    const Fan& fan() const noexcept { return fan_; }
    const MonomialMatrix& matrix() const noexcept { return matrix_; }
    const Partition& partition() const noexcept { return matrix_.partition; }
    const Mat& cokernel_map() const noexcept { return cokernel_; }

    DivisorVector jumps() const { return derive_jumps(matrix_, fan_); }

    ProjectiveLinePoint column_line(std::size_t j) const {
        return ProjectiveLinePoint(cokernel_(0, j), cokernel_(1, j));
    }

private:
    Fan fan_;
    MonomialMatrix matrix_;
    Mat cokernel_; // 2 x s
};

// Chart-level graded dimensions of the cokernel over one maximal cone,
// indexed by the pair of pairing values (a, b) = (<m, n_k>, <m, n_{k+1}>),
// which parametrize characters bijectively since adjacent rays form a
// lattice basis.
struct GradedDimGrid {
    std::size_t cone = 0;
    long long radius = 0;
    RayVector ray0;
    RayVector ray1;
    std::vector<int> dims; // (2R+1)^2 entries, row-major by (a + R, b + R)

    int at(long long a, long long b) const {
        const long long side = 2 * radius + 1;
        return dims[static_cast<std::size_t>((a + radius) * side + (b + radius))];
    }

    Character character_at(long long a, long long b) const {
        return Character{a * ray1.y - b * ray0.y, b * ray0.x - a * ray1.x};
    }
};

// All filtration jumps happen at pairing values in [-max jump, 0], so this
// radius sees every graded piece where the presentation and its bidual can
// differ.
inline long long default_box_radius(const SheafPresentation& p) {
    long long max_jump = 0;
    for (long long j : p.jumps()) max_jump = std::max(max_jump, j);
    return max_jump + 2;
}

inline GradedDimGrid chart_graded_dims(const SheafPresentation& p, std::size_t cone,
                                       long long radius) {
    if (cone >= p.fan().cone_count()) {
        throw validation_error("BadConeIndex", "cone index out of range");
    }
    if (radius < 1) {
        throw validation_error("BadParameter", "radius must be at least 1");
    }
    const std::size_t r0 = cone;
    const std::size_t r1 = p.fan().next(cone);
    const std::size_t s = p.partition().size();

    GradedDimGrid grid;
    grid.cone = cone;
    grid.radius = radius;
    grid.ray0 = p.fan().ray(r0);
    grid.ray1 = p.fan().ray(r1);
    const long long side = 2 * radius + 1;
    grid.dims.assign(static_cast<std::size_t>(side * side), 0);

    // The degree-m map is the coefficient matrix restricted to the eligible
    // rows; its rank depends only on the row set, so cache by bitmask.
    std::map<std::uint64_t, std::size_t> rank_cache;
    const auto restricted_rank = [&](const std::vector<std::size_t>& rows,
                                     std::uint64_t mask) {
        auto it = rank_cache.find(mask);
        if (it != rank_cache.end()) return it->second;
        const std::size_t r = rank(p.matrix().coeffs.select_rows(rows));
        rank_cache.emplace(mask, r);
        return r;
    };

    for (long long a = -radius; a <= radius; ++a) {
        for (long long b = -radius; b <= radius; ++b) {
            std::vector<std::size_t> eligible;
            std::uint64_t mask = 0;
            for (std::size_t i = 0; i < s; ++i) {
                const ExponentVector& e = p.matrix().row_exponents[i];
                if (a >= -e[r0] && b >= -e[r1]) {
                    eligible.push_back(i);
                    mask |= std::uint64_t{1} << i;
                }
            }
            int dim = static_cast<int>(eligible.size());
            if (a >= 0 && b >= 0) {
                dim -= static_cast<int>(restricted_rank(eligible, mask));
            }
            grid.dims[static_cast<std::size_t>((a + radius) * side + (b + radius))] = dim;
        }
    }
    return grid;
}

// Filtration data of the bidual: the line at every ray of Pi'_i is the
// normalized i-th column of the cokernel map.
inline BundleData bidual(const SheafPresentation& p) {
    const DivisorVector jumps = p.jumps();
    std::vector<RayFiltration> filts(p.fan().ray_count());
    for (std::size_t k = 0; k < filts.size(); ++k) filts[k].jump = jumps[k];
    for (std::size_t i = 0; i < p.partition().size(); ++i) {
        const ProjectiveLinePoint line = p.column_line(i);
        for (std::size_t ray : p.partition().parts[i]) filts[ray].line = line;
    }
    return BundleData(p.fan(), std::move(filts));
}

struct SkyscraperReport {
    std::vector<std::size_t> support;            // cone indices, ascending
    std::map<std::size_t, long long> lengths;    // positive exactly on support
};

// Graded length of the cokernel of E' -> E'ˇˇ over the chart of one cone:
// the sum of the degreewise dimension gaps.
inline long long chart_gap_sum(const SheafPresentation& p, std::size_t cone,
                               long long radius) {
    const BundleData bd = bidual(p);
    const GradedDimGrid grid = chart_graded_dims(p, cone, radius);
    long long total = 0;
    for (long long a = -radius; a <= radius; ++a) {
        for (long long b = -radius; b <= radius; ++b) {
            total += sigma_family_dim(bd, cone, grid.character_at(a, b)) - grid.at(a, b);
        }
    }
    return total;
}

// Support of the quotient by the bidual embedding: cones whose two rays
// lie in two different parts carrying the same line (equal coarse image);
// lengths from the chart oracle.
inline SkyscraperReport skyscraper_support(const SheafPresentation& p, long long radius = 0) {
    if (radius <= 0) radius = default_box_radius(p);
    const Fan& fan = p.fan();

    std::vector<std::size_t> part_of(fan.ray_count(), p.partition().size());
    for (std::size_t i = 0; i < p.partition().size(); ++i) {
        for (std::size_t r : p.partition().parts[i]) part_of[r] = i;
    }

    SkyscraperReport report;
    for (std::size_t k = 0; k < fan.cone_count(); ++k) {
        const std::size_t pa = part_of[k];
        const std::size_t pb = part_of[fan.next(k)];
        if (pa == p.partition().size() || pb == p.partition().size()) continue;
        if (pa == pb) continue;
        if (columns_proportional(p.column_line(pa), p.column_line(pb))) {
            report.support.push_back(k);
            report.lengths[k] = chart_gap_sum(p, k, radius);
        }
    }
    return report;
}

// Collapses the presentation onto the coarse partition of its bidual,
// assembling the cokernel map from the section-selected columns; the
// result is the coarse resolution of the bidual.
inline MonomialResolution coarsen_presentation(const SheafPresentation& p,
                                               const std::vector<std::size_t>& section) {
    const BundleData bd = bidual(p);
    const Partition coarse = coarse_partition(bd);
    const auto refinement = is_refinement(p.partition(), coarse);
    if (!refinement) {
        throw validation_error("RefinementMismatch",
                               "presentation partition does not refine the bidual's "
                               "coarse partition");
    }
    if (section.size() != coarse.size()) {
        throw validation_error("BadSection", "section must pick one fine part per "
                                             "coarse part");
    }
    for (std::size_t j = 0; j < section.size(); ++j) {
        if (section[j] >= p.partition().size() || refinement->projection[section[j]] != j) {
            throw validation_error("BadSection",
                                   "section image " + std::to_string(section[j]) +
                                       " does not project to part " + std::to_string(j));
        }
    }

    const std::size_t s = coarse.size();
    Mat cokernel(2, s);
    for (std::size_t j = 0; j < s; ++j) {
        const ProjectiveLinePoint line = p.column_line(section[j]);
        cokernel(0, j) = line.a();
        cokernel(1, j) = line.b();
    }
    MonomialMatrix mm;
    mm.coeffs = kernel_basis(cokernel);
    mm.partition = coarse;
    mm.row_exponents.reserve(s);
    for (std::size_t j = 0; j < s; ++j) {
        ExponentVector e(p.fan().ray_count(), 0);
        for (std::size_t r : coarse.parts[j]) e[r] = bd.jump(r);
        mm.row_exponents.push_back(std::move(e));
    }
    return MonomialResolution{std::move(mm), std::move(cokernel)};
}

inline MonomialResolution coarsen_presentation(const SheafPresentation& p) {
    const Partition coarse = coarse_partition(bidual(p));
    const auto refinement = is_refinement(p.partition(), coarse);
    if (!refinement) {
        throw validation_error("RefinementMismatch",
                               "presentation partition does not refine the bidual's "
                               "coarse partition");
    }
    return coarsen_presentation(
        p, default_section(p.partition(), refinement->projection, coarse.size()));
}

// Extension 0 -> E1 -> E -> E2 -> 0 determined by the parts whose cokernel
// columns span the same line as the chosen one. Divisor vectors are the
// bidual summand twists.
struct ExtensionSplit {
    std::vector<std::size_t> parts1; // part indices with <A_i> = <A_{i1}>
    DivisorVector divisor1;
    DivisorVector divisor2;
};

inline ExtensionSplit extension_split(const SheafPresentation& p, std::size_t column) {
    const std::size_t s = p.partition().size();
    if (column >= s) {
        throw validation_error("BadParameter", "column index out of range");
    }
    ExtensionSplit split;
    split.divisor1.assign(p.fan().ray_count(), 0);
    split.divisor2.assign(p.fan().ray_count(), 0);
    const ProjectiveLinePoint pivot = p.column_line(column);
    const DivisorVector jumps = p.jumps();
    for (std::size_t i = 0; i < s; ++i) {
        const bool same = columns_proportional(p.column_line(i), pivot);
        if (same) split.parts1.push_back(i);
        for (std::size_t r : p.partition().parts[i]) {
            (same ? split.divisor1 : split.divisor2)[r] = jumps[r];
        }
    }
    return split;
}

} // namespace torix

#endif
