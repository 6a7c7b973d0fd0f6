#ifndef TORIX_GIT_HPP
#define TORIX_GIT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torix/bundle.hpp"
#include "torix/errors.hpp"
#include "torix/linalg.hpp"
#include "torix/sheaf.hpp"

namespace torix {

enum class Stability { Stable, ProperlySemistable, Unstable };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::ProperlySemistable: return "properly-semistable";
        case Stability::Unstable: return "unstable";
    }
    return "unstable";
}

// Witness: for an unstable verdict, an index subset spanning a violating
// subspace; for a properly semistable one, a subset realizing equality.
struct StabilityVerdict {
    Stability status = Stability::Unstable;
    std::optional<std::vector<std::size_t>> witness;
};

// An n-tuple of points of projective (m-1)-space in canonical homogeneous
// coordinates.
class PointConfig {
public:
    PointConfig(std::size_t ambient, std::vector<std::vector<Scalar>> points)
        : ambient_(ambient), points_(std::move(points)) {
        if (ambient_ < 1) {
            throw validation_error("BadParameter", "ambient dimension must be >= 1");
        }
        for (auto& p : points_) {
            if (p.size() != ambient_) {
                throw validation_error("BadShape", "point coordinate length mismatch");
            }
            normalize_homogeneous(p);
        }
    }

    std::size_t ambient() const noexcept { return ambient_; }
    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<Scalar>& point(std::size_t i) const { return points_[i]; }
    const std::vector<std::vector<Scalar>>& points() const noexcept { return points_; }

private:
    std::size_t ambient_;
    std::vector<std::vector<Scalar>> points_;
};

namespace detail {

// Aggregates subset test results into a verdict, keeping the first
// violation or equality subset (in enumeration order) as the witness.
struct VerdictBuilder {
    bool violated = false;
    bool equality = false;
    std::optional<std::vector<std::size_t>> violation_witness;
    std::optional<std::vector<std::size_t>> equality_witness;

    void observe(long long lhs, long long rhs, const std::vector<std::size_t>& subset) {
        if (lhs > rhs) {
            if (!violated) violation_witness = subset;
            violated = true;
        } else if (lhs == rhs) {
            if (!equality) equality_witness = subset;
            equality = true;
        }
    }

    StabilityVerdict verdict() const {
        if (violated) return {Stability::Unstable, violation_witness};
        if (equality) return {Stability::ProperlySemistable, equality_witness};
        return {Stability::Stable, std::nullopt};
    }
};

// Points as columns of an m x |S| matrix.
inline Mat points_as_columns(const PointConfig& c, const std::vector<std::size_t>& subset) {
    Mat m(c.ambient(), subset.size());
    for (std::size_t j = 0; j < subset.size(); ++j) {
        for (std::size_t i = 0; i < c.ambient(); ++i) m(i, j) = c.point(subset[j])[i];
    }
    return m;
}

// Coincidence classes of the configuration, in order of first appearance.
inline std::vector<std::vector<std::size_t>> coincidence_classes(const PointConfig& c) {
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < c.size(); ++i) {
        bool placed = false;
        for (auto& cls : classes) {
            if (c.point(cls.front()) == c.point(i)) {
                cls.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) classes.push_back({i});
    }
    return classes;
}

} // namespace detail

// Mumford's numerical criterion for the diagonal GL_m action on point
// configurations: stability iff #{i : p_i in L} < (n/m) dim L for every
// proper subspace L; it suffices to test spans of subsets of the points.
// For points on the projective line this reduces to coincidence counting.
inline StabilityVerdict config_stability(const PointConfig& c) {
    const std::size_t n = c.size();
    const std::size_t m = c.ambient();
    if (n == 0) {
        throw validation_error("BadParameter", "empty configuration");
    }

    // Proper nonzero subspaces of k^1 do not exist; every configuration of
    // nonzero points of projective 0-space is stable.
    if (m == 1) {
        return {Stability::Stable, std::nullopt};
    }

    if (m == 2) {
        detail::VerdictBuilder builder;
        for (const auto& cls : detail::coincidence_classes(c)) {
            // L = the point itself: dim L = 1, so compare m * count with n.
            builder.observe(static_cast<long long>(2 * cls.size()),
                            static_cast<long long>(n), cls);
        }
        return builder.verdict();
    }

    if (n > 20) {
        throw validation_error("BadParameter",
                               "configuration stability limited to 20 points for m >= 3");
    }
    detail::VerdictBuilder builder;
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i) {
            if (bits & (std::uint64_t{1} << i)) subset.push_back(i);
        }
        const Mat span = detail::points_as_columns(c, subset);
        const std::size_t dim = rank(span);
        if (dim >= m) continue; // not a proper subspace
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> with = subset;
            with.push_back(i);
            if (rank(detail::points_as_columns(c, with)) == dim) ++count;
        }
        builder.observe(static_cast<long long>(count * m),
                        static_cast<long long>(n * dim), subset);
    }
    return builder.verdict();
}

enum class GrassMode { FullGL, CoordinateTorus };

// Stability of the column span of `a` as a point of Gr(m, n). In
// coordinate-torus mode every proper coordinate subspace is tested against
// dim(A cap L) < (m/n) dim L; full-GL mode descends the other way and
// applies the configuration criterion to the rows.
inline StabilityVerdict grass_stability(const Mat& a, GrassMode mode) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    if (m == 0 || n <= m) {
        throw validation_error("BadShape", "matrix must be n x m with n > m >= 1");
    }
    if (rank(a) != m) {
        throw validation_error("RankDeficient", "matrix does not have full column rank");
    }

    if (mode == GrassMode::FullGL) {
        std::vector<std::vector<Scalar>> rows;
        rows.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Scalar> row(m);
            bool zero = true;
            for (std::size_t j = 0; j < m; ++j) {
                row[j] = a(i, j);
                if (row[j] != 0) zero = false;
            }
            if (zero) {
                throw validation_error("ZeroRow",
                                       "row " + std::to_string(i) + " is zero");
            }
            rows.push_back(std::move(row));
        }
        return config_stability(PointConfig(m, std::move(rows)));
    }

    if (n > 20) {
        throw validation_error("BadParameter", "coordinate-torus mode limited to n <= 20");
    }
    detail::VerdictBuilder builder;
    for (std::uint64_t bits = 1; bits + 1 < (std::uint64_t{1} << n); ++bits) {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i) {
            if (bits & (std::uint64_t{1} << i)) subset.push_back(i);
        }
        // dim(A cap L) = m + |S| - rank[a | e_S]
        Mat aug(n, m + subset.size());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < subset.size(); ++j) aug(subset[j], m + j) = 1;
        const long long dim_al =
            static_cast<long long>(m + subset.size()) - static_cast<long long>(rank(aug));
        builder.observe(dim_al * static_cast<long long>(n),
                        static_cast<long long>(m * subset.size()), subset);
    }
    return builder.verdict();
}

// Canonical cokernel matrix fitting into 0 -> k^m -> k^n -> k^{n-m} -> 0.
inline Mat dual_presentation(const Mat& a) {
    if (a.cols() == 0 || a.rows() <= a.cols()) {
        throw validation_error("BadShape", "matrix must be n x m with n > m >= 1");
    }
    if (rank(a) != a.cols()) {
        throw validation_error("RankDeficient", "matrix does not have full column rank");
    }
    return kernel_basis(a.transposed()).transposed();
}

// Configuration of cokernel columns labeled by the parts they belong to;
// the common ground for P-stability and P-equivalence of bundles and
// presentations.
struct LabeledConfig {
    std::vector<ProjectiveLinePoint> points; // one per part, in part order
    Partition partition;
    DivisorVector jumps; // per ray
};

inline LabeledConfig labeled_config(const BundleData& b, const Partition& partition) {
    try {
        if (!is_refinement(partition, coarse_partition(b))) {
            throw validation_error("RefinementMismatch",
                                   "partition does not refine the coarse partition");
        }
    } catch (const validation_error& e) {
        throw validation_error("RefinementMismatch", e.what());
    }
    LabeledConfig lc;
    lc.partition = partition;
    lc.jumps = b.jumps();
    lc.points.reserve(partition.size());
    for (const auto& part : partition.parts) lc.points.push_back(*b.line(part.front()));
    return lc;
}

inline LabeledConfig labeled_config(const SheafPresentation& p) {
    if (!is_refinement(p.partition(), coarse_partition(bidual(p)))) {
        throw validation_error("RefinementMismatch",
                               "partition does not refine the bidual's coarse partition");
    }
    LabeledConfig lc;
    lc.partition = p.partition();
    lc.jumps = p.jumps();
    lc.points.reserve(p.partition().size());
    for (std::size_t i = 0; i < p.partition().size(); ++i) {
        lc.points.push_back(p.column_line(i));
    }
    return lc;
}

inline PointConfig as_point_config(const LabeledConfig& lc) {
    std::vector<std::vector<Scalar>> pts;
    pts.reserve(lc.points.size());
    for (const auto& p : lc.points) pts.push_back({p.a(), p.b()});
    return PointConfig(2, std::move(pts));
}

inline StabilityVerdict p_stability(const BundleData& b, const Partition& partition) {
    return config_stability(as_point_config(labeled_config(b, partition)));
}

inline StabilityVerdict p_stability(const SheafPresentation& p) {
    return config_stability(as_point_config(labeled_config(p)));
}

namespace detail {

// The unordered balanced split {Psi, Pi \ Psi} of a properly semistable
// configuration, returned as the ray set of the half containing the
// smallest ray of Pi.
inline std::vector<std::size_t> canonical_half(const LabeledConfig& lc) {
    const std::size_t s = lc.points.size();
    std::vector<std::vector<Scalar>> pts;
    pts.reserve(s);
    for (const auto& p : lc.points) pts.push_back({p.a(), p.b()});
    const PointConfig config(2, std::move(pts));

    std::vector<std::size_t> half_parts;
    for (const auto& cls : coincidence_classes(config)) {
        if (2 * cls.size() == s) {
            half_parts = cls;
            break;
        }
    }
    std::vector<std::size_t> rays;
    for (std::size_t part : half_parts) {
        rays.insert(rays.end(), lc.partition.parts[part].begin(),
                    lc.partition.parts[part].end());
    }
    std::sort(rays.begin(), rays.end());
    const std::vector<std::size_t> ground = lc.partition.ground();
    if (rays.empty() || rays.front() != ground.front()) {
        std::vector<std::size_t> complement;
        std::set_difference(ground.begin(), ground.end(), rays.begin(), rays.end(),
                            std::back_inserter(complement));
        return complement;
    }
    return rays;
}

} // namespace detail

// P-equivalence: stable sheaves are equivalent iff a single invertible
// 2 x 2 matrix matches the column lines index-wise; properly semistable
// ones iff their balanced coincidence splits agree up to complement.
inline bool p_equivalent(const LabeledConfig& x, const LabeledConfig& y) {
    if (x.jumps != y.jumps || x.partition.parts != y.partition.parts) {
        throw validation_error("ShapeMismatch",
                               "inputs have different jumps or partition");
    }
    const StabilityVerdict vx = config_stability(as_point_config(x));
    const StabilityVerdict vy = config_stability(as_point_config(y));
    if (vx.status == Stability::Unstable || vy.status == Stability::Unstable) {
        throw validation_error("NotSemistable", "p_equivalent needs semistable inputs");
    }
    if (vx.status != vy.status) return false;

    if (vx.status == Stability::ProperlySemistable) {
        return detail::canonical_half(x) == detail::canonical_half(y);
    }

    // Stable case. A stable configuration has at least three pairwise
    // distinct points; the torus weights fix the indexing, so no
    // permutation is searched.
    const std::size_t s = x.points.size();
    std::size_t i1 = 0, i2 = 0, i3 = 0;
    bool found = false;
    for (std::size_t a = 0; a < s && !found; ++a) {
        for (std::size_t b = a + 1; b < s && !found; ++b) {
            if (x.points[a] == x.points[b]) continue;
            for (std::size_t c = b + 1; c < s && !found; ++c) {
                if (x.points[c] == x.points[a] || x.points[c] == x.points[b]) continue;
                i1 = a;
                i2 = b;
                i3 = c;
                found = true;
            }
        }
    }
    if (!found) {
        throw validation_error("NotSemistable", "stable configuration degenerate");
    }
    if (y.points[i1] == y.points[i2] || y.points[i1] == y.points[i3] ||
        y.points[i2] == y.points[i3]) {
        return false;
    }
    const Mat hx = projective_transform_through(x.points[i1], x.points[i2], x.points[i3]);
    const Mat hy = projective_transform_through(y.points[i1], y.points[i2], y.points[i3]);
    const Mat g = hy * inverse2(hx);
    for (std::size_t i = 0; i < s; ++i) {
        if (!(apply_transform(g, x.points[i]) == y.points[i])) return false;
    }
    return true;
}

inline bool p_equivalent(const BundleData& x, const Partition& px, const BundleData& y,
                         const Partition& py) {
    return p_equivalent(labeled_config(x, px), labeled_config(y, py));
}

inline bool p_equivalent(const SheafPresentation& x, const SheafPresentation& y) {
    return p_equivalent(labeled_config(x), labeled_config(y));
}

using ModuliPointS4 = ProjectiveLinePoint;

// The moduli coordinate g . p4 of a semistable four point configuration on
// the line, where g moves p1, p2, p3 to 0, 1, infinity. Evaluated as the
// projective cross ratio ((p4-p1)(p2-p3)) / ((p4-p3)(p2-p1)) on homogeneous
// pairs, which covers the three boundary classes without division by zero.
inline ModuliPointS4 moduli_coordinate_s4(const PointConfig& c) {
    if (c.ambient() != 2 || c.size() != 4) {
        throw validation_error("BadShape", "moduli coordinate needs 4 points on the line");
    }
    for (const auto& cls : detail::coincidence_classes(c)) {
        if (cls.size() >= 3) {
            throw validation_error("Unstable", "three or more points coincide");
        }
    }
    const auto bracket = [&](std::size_t i, std::size_t j) {
        return c.point(i)[0] * c.point(j)[1] - c.point(j)[0] * c.point(i)[1];
    };
    const Scalar num = bracket(3, 0) * bracket(1, 2);
    const Scalar den = bracket(3, 2) * bracket(1, 0);
    return ModuliPointS4(num, den);
}

struct BalancedSplit {
    std::vector<std::size_t> half; // part indices, containing part 0
    std::optional<bool> locally_free;
};

struct SemistableClasses {
    long long count = 0;
    std::vector<BalancedSplit> splits;
};

namespace detail {

inline void enumerate_halves(std::size_t s, std::vector<std::vector<std::size_t>>& out) {
    // All size s/2 subsets of {0..s-1} containing 0, in lexicographic order.
    const std::size_t pick = s / 2 - 1;
    std::vector<std::size_t> comb(pick);
    for (std::size_t i = 0; i < pick; ++i) comb[i] = i + 1;
    while (true) {
        std::vector<std::size_t> half{0};
        half.insert(half.end(), comb.begin(), comb.end());
        out.push_back(std::move(half));
        std::size_t i = pick;
        bool advanced = false;
        while (i > 0) {
            --i;
            if (comb[i] != i + s - pick) {
                ++comb[i];
                for (std::size_t j = i + 1; j < pick; ++j) comb[j] = comb[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
}

} // namespace detail

// Unordered balanced splits {Psi, complement}: the P-equivalence classes of
// properly semistable sheaves for partition size s.
inline SemistableClasses semistable_classes(std::size_t s) {
    if (s % 2 != 0) {
        throw validation_error("OddS", "properly semistable classes need even s");
    }
    if (s < 4) {
        throw validation_error("BadParameter", "need s >= 4");
    }
    SemistableClasses result;
    std::vector<std::vector<std::size_t>> halves;
    detail::enumerate_halves(s, halves);
    result.count = static_cast<long long>(halves.size());
    result.splits.reserve(halves.size());
    for (auto& h : halves) result.splits.push_back(BalancedSplit{std::move(h), std::nullopt});
    return result;
}

// Additionally flags which splits are represented by a locally free direct
// sum over the given fan and partition: no cone may have its two rays in
// two different parts of the same half.
inline SemistableClasses semistable_classes(std::size_t s, const Fan& fan,
                                            const Partition& partition) {
    if (partition.size() != s) {
        throw validation_error("BadShape", "partition size does not match s");
    }
    SemistableClasses result = semistable_classes(s);

    std::vector<std::size_t> part_of(fan.ray_count(), s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t r : partition.parts[i]) part_of[r] = i;
    }
    std::vector<std::pair<std::size_t, std::size_t>> cone_pairs;
    for (std::size_t k = 0; k < fan.cone_count(); ++k) {
        const std::size_t pa = part_of[k];
        const std::size_t pb = part_of[fan.next(k)];
        if (pa < s && pb < s && pa != pb) cone_pairs.emplace_back(pa, pb);
    }
    for (auto& split : result.splits) {
        bool free = true;
        const auto in_half = [&](std::size_t p) {
            return std::find(split.half.begin(), split.half.end(), p) != split.half.end();
        };
        for (const auto& [pa, pb] : cone_pairs) {
            if (in_half(pa) == in_half(pb)) {
                free = false;
                break;
            }
        }
        split.locally_free = free;
    }
    return result;
}

} // namespace torix

#endif
