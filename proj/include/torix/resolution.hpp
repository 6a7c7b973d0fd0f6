#ifndef TORIX_RESOLUTION_HPP
#define TORIX_RESOLUTION_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torix/bundle.hpp"
#include "torix/errors.hpp"
#include "torix/fan.hpp"
#include "torix/linalg.hpp"

namespace torix {

// Equivariant map O^{s-2} -> (+) O(sum_{rho in Pi_i} i^rho D_rho) as data:
// the coefficient matrix A' together with one fixed monomial x^Pi-hat_i per
// row, supported exactly on the part Pi_i with exponents i^rho.
struct MonomialMatrix {
    Mat coeffs;                                // s x (s-2)
    std::vector<ExponentVector> row_exponents; // per row, one entry per ray
    Partition partition;

    std::size_t summands() const noexcept { return partition.size(); }

    // Divisor coefficient vector of row i's line bundle twist.
    std::vector<DivisorVector> degrees() const {
        std::vector<DivisorVector> d;
        d.reserve(row_exponents.size());
        for (const auto& e : row_exponents) d.emplace_back(e.begin(), e.end());
        return d;
    }
};

// The short exact sequence 0 -> O^{s-2} -> (+) O(..) -> E -> 0 on the level
// of limit vector spaces: the cokernel map is the 2 x s matrix of chosen
// line representatives, one column per part.
struct MonomialResolution {
    MonomialMatrix matrix;
    Mat cokernel_map; // 2 x s

    std::size_t source_rank() const noexcept { return matrix.coeffs.cols(); }
};

inline void validate_monomial_matrix(const MonomialMatrix& mm, const Fan& fan) {
    const std::size_t s = mm.partition.size();
    if (s < 2) {
        throw validation_error("BadShape", "monomial matrix needs at least 2 rows");
    }
    if (mm.row_exponents.size() != s || mm.coeffs.rows() != s ||
        mm.coeffs.cols() != s - 2) {
        throw validation_error("BadShape", "monomial matrix shape mismatch");
    }
    // Re-validates disjointness and nonemptiness of the parts.
    make_partition(mm.partition.parts);
    for (std::size_t i = 0; i < s; ++i) {
        const ExponentVector& e = mm.row_exponents[i];
        if (e.size() != fan.ray_count()) {
            throw validation_error("BadSupport",
                                   "row " + std::to_string(i) + ": exponent length");
        }
        const auto& part = mm.partition.parts[i];
        for (std::size_t r = 0; r < e.size(); ++r) {
            const bool in_part = std::find(part.begin(), part.end(), r) != part.end();
            if (in_part && e[r] <= 0) {
                throw validation_error("BadSupport", "row " + std::to_string(i) +
                                                         ": missing exponent on ray " +
                                                         std::to_string(r));
            }
            if (!in_part && e[r] != 0) {
                throw validation_error("BadSupport", "row " + std::to_string(i) +
                                                         ": exponent on ray " +
                                                         std::to_string(r) +
                                                         " outside its part");
            }
        }
    }
    if (rank(mm.coeffs) != s - 2) {
        throw validation_error("RankDeficient", "coefficient matrix rank below s - 2");
    }
}

// Per-ray jump widths encoded in the row exponents; rays outside Pi get 0.
inline DivisorVector derive_jumps(const MonomialMatrix& mm, const Fan& fan) {
    DivisorVector jumps(fan.ray_count(), 0);
    for (std::size_t i = 0; i < mm.partition.size(); ++i) {
        for (std::size_t r : mm.partition.parts[i]) jumps[r] = mm.row_exponents[i][r];
    }
    return jumps;
}

// Builds the generalized Euler type resolution from the coarse partition:
// the cokernel map columns are the normalized part lines and the
// coefficient matrix is their canonical kernel basis.
inline MonomialResolution build_resolution(const BundleData& b) {
    const Partition coarse = coarse_partition(b);
    const std::size_t s = coarse.size();
    if (s <= 2) throw splits_error(s);

    Mat cokernel(2, s);
    for (std::size_t j = 0; j < s; ++j) {
        const ProjectiveLinePoint& line = *b.line(coarse.parts[j].front());
        cokernel(0, j) = line.a();
        cokernel(1, j) = line.b();
    }

    MonomialMatrix mm;
    mm.coeffs = kernel_basis(cokernel);
    mm.partition = coarse;
    mm.row_exponents.reserve(s);
    for (std::size_t j = 0; j < s; ++j) {
        ExponentVector e(b.fan().ray_count(), 0);
        for (std::size_t r : coarse.parts[j]) e[r] = b.jump(r);
        mm.row_exponents.push_back(std::move(e));
    }
    return MonomialResolution{std::move(mm), std::move(cokernel)};
}

// Reads the cokernel filtrations off the resolution: at every ray of Pi_i
// the line is the normalized i-th column of the cokernel map.
inline BundleData cokernel_filtrations(const MonomialResolution& r, const Fan& fan) {
    const DivisorVector jumps = derive_jumps(r.matrix, fan);
    std::vector<RayFiltration> filts(fan.ray_count());
    for (std::size_t k = 0; k < fan.ray_count(); ++k) filts[k].jump = jumps[k];
    for (std::size_t i = 0; i < r.matrix.partition.size(); ++i) {
        const ProjectiveLinePoint line(r.cokernel_map(0, i), r.cokernel_map(1, i));
        for (std::size_t ray : r.matrix.partition.parts[i]) filts[ray].line = line;
    }
    return BundleData(fan, std::move(filts));
}

// Local freeness report. The fixed-point rank criterion decides; the cyclic
// minor criterion applies only to circularly enumerated interval partitions,
// and the Fitting criterion re-derives the same verdict through the
// monomial generators of the Fitting ideal.
struct LocalFreenessReport {
    std::optional<bool> cyclic_minors;
    bool fitting = false;
    bool fixed_point_ranks = false;
    std::optional<std::pair<std::size_t, std::size_t>> failing_minor;
    std::optional<std::size_t> failing_cone_fitting;
    std::optional<std::size_t> failing_cone_rank;

    bool locally_free() const noexcept { return fixed_point_ranks; }
};

namespace detail {

// Part indices whose rays meet the cone sigma_k.
inline std::vector<std::size_t> parts_meeting_cone(const MonomialMatrix& mm, const Fan& fan,
                                                   std::size_t cone) {
    const std::size_t r0 = cone;
    const std::size_t r1 = fan.next(cone);
    std::vector<std::size_t> meeting;
    for (std::size_t p = 0; p < mm.partition.size(); ++p) {
        const auto& part = mm.partition.parts[p];
        if (std::find(part.begin(), part.end(), r0) != part.end() ||
            std::find(part.begin(), part.end(), r1) != part.end()) {
            meeting.push_back(p);
        }
    }
    return meeting;
}

inline bool any_subset_det_nonzero(const Mat& coeffs,
                                   const std::vector<std::size_t>& eligible,
                                   std::size_t pick) {
    // Enumerates pick-subsets of `eligible`; at most C(e, 2) candidates
    // since e - pick <= 2 in every use.
    const std::size_t e = eligible.size();
    if (pick > e) return false;
    std::vector<std::size_t> idx(pick);
    std::vector<std::size_t> comb(pick);
    for (std::size_t i = 0; i < pick; ++i) comb[i] = i;
    while (true) {
        for (std::size_t i = 0; i < pick; ++i) idx[i] = eligible[comb[i]];
        if (det(coeffs.select_rows(idx)) != 0) return true;
        std::size_t i = pick;
        while (i > 0) {
            --i;
            if (comb[i] != i + e - pick) {
                ++comb[i];
                for (std::size_t j = i + 1; j < pick; ++j) comb[j] = comb[j - 1] + 1;
                break;
            }
            if (i == 0) return false;
        }
    }
}

} // namespace detail

inline LocalFreenessReport check_local_freeness(const MonomialMatrix& mm, const Fan& fan) {
    validate_monomial_matrix(mm, fan);
    const std::size_t s = mm.partition.size();
    LocalFreenessReport report;

    // (a) cyclic adjacent minors, for interval partitions only.
    if (mm.partition.intervals) {
        bool ok = true;
        for (std::size_t i = 0; i < s && ok; ++i) {
            const std::size_t j = (i + 1) % s;
            std::vector<std::size_t> keep;
            for (std::size_t r = 0; r < s; ++r) {
                if (r != i && r != j) keep.push_back(r);
            }
            if (det(mm.coeffs.select_rows(keep)) == 0) {
                ok = false;
                report.failing_minor = std::make_pair(i, j);
            }
        }
        report.cyclic_minors = ok;
    }

    // (b) Fitting ideal divisibility: for each cone generator x^sigma-hat
    // there must be a nonzero Fitting generator det(A'_S) x^Pi-hat_S whose
    // parts all avoid sigma(1).
    {
        bool ok = true;
        for (std::size_t k = 0; k < fan.cone_count() && ok; ++k) {
            const auto meeting = detail::parts_meeting_cone(mm, fan, k);
            std::vector<std::size_t> eligible;
            for (std::size_t p = 0; p < s; ++p) {
                if (std::find(meeting.begin(), meeting.end(), p) == meeting.end()) {
                    eligible.push_back(p);
                }
            }
            if (!detail::any_subset_det_nonzero(mm.coeffs, eligible, s - 2)) {
                ok = false;
                report.failing_cone_fitting = k;
            }
        }
        report.fitting = ok;
    }

    // (c) rank of the matrix evaluated at each distinguished point: rows
    // whose monomial survives x_rho = 0 on sigma(1) are exactly those whose
    // part avoids the cone.
    {
        bool ok = true;
        for (std::size_t k = 0; k < fan.cone_count() && ok; ++k) {
            const auto meeting = detail::parts_meeting_cone(mm, fan, k);
            std::vector<std::size_t> rows;
            for (std::size_t p = 0; p < s; ++p) {
                if (std::find(meeting.begin(), meeting.end(), p) == meeting.end()) {
                    rows.push_back(p);
                }
            }
            if (rank(mm.coeffs.select_rows(rows)) != s - 2) {
                ok = false;
                report.failing_cone_rank = k;
            }
        }
        report.fixed_point_ranks = ok;
    }

    return report;
}

inline LocalFreenessReport check_local_freeness(const MonomialResolution& r, const Fan& fan) {
    return check_local_freeness(r.matrix, fan);
}

} // namespace torix

#endif
