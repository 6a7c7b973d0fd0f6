#ifndef TORIX_BUNDLE_HPP
#define TORIX_BUNDLE_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "torix/errors.hpp"
#include "torix/fan.hpp"
#include "torix/linalg.hpp"

namespace torix {

// Raw filtration data (i1, i2, line) for one ray; the line is the
// intermediate subspace and exists exactly when the two jump positions
// differ.
struct FiltrationTriple {
    long long i1 = 0;
    long long i2 = 0;
    std::optional<ProjectiveLinePoint> line;
};

// Normalized per-ray filtration (-jump, 0, line).
struct RayFiltration {
    long long jump = 0;
    std::optional<ProjectiveLinePoint> line;

    bool operator==(const RayFiltration&) const = default;
};

using DivisorVector = std::vector<long long>;

// Full filtration description of an equivariant rank-2 bundle, stored in
// the normalized form: per ray, a jump width i^rho >= 0 and, when the jump
// is positive, the line E^rho of the generic fiber.
class BundleData {
public:
    BundleData(Fan fan, std::vector<RayFiltration> filtrations)
        : fan_(std::move(fan)), filtrations_(std::move(filtrations)) {
        if (filtrations_.size() != fan_.ray_count()) {
            throw validation_error("BadShape", "one filtration per ray required");
        }
        for (std::size_t k = 0; k < filtrations_.size(); ++k) {
            const RayFiltration& rf = filtrations_[k];
            if (rf.jump < 0) {
                throw validation_error("BadJump",
                                       "negative jump at ray " + std::to_string(k));
            }
            if (rf.line.has_value() != (rf.jump > 0)) {
                throw validation_error("LineJumpMismatch",
                                       "ray " + std::to_string(k) +
                                           ": line must be present exactly when jump > 0");
            }
        }
    }

    const Fan& fan() const noexcept { return fan_; }
    const std::vector<RayFiltration>& filtrations() const noexcept { return filtrations_; }
    long long jump(std::size_t ray) const { return filtrations_[ray].jump; }
    const std::optional<ProjectiveLinePoint>& line(std::size_t ray) const {
        return filtrations_[ray].line;
    }

    // Pi: rays with positive jump, in ascending (= cyclic) order.
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t k = 0; k < filtrations_.size(); ++k) {
            if (filtrations_[k].jump > 0) s.push_back(k);
        }
        return s;
    }

    DivisorVector jumps() const {
        DivisorVector j(filtrations_.size());
        for (std::size_t k = 0; k < filtrations_.size(); ++k) j[k] = filtrations_[k].jump;
        return j;
    }

    bool operator==(const BundleData&) const = default;

private:
    Fan fan_;
    std::vector<RayFiltration> filtrations_;
};

// Ordered partition of Pi into disjoint nonempty ray-index sets. Each part
// is listed in circular run order. The interval flag records that every
// part is a circular interval of Pi and that the parts themselves are
// enumerated in circular order.
struct Partition {
    std::vector<std::vector<std::size_t>> parts;
    bool intervals = false;

    std::size_t size() const noexcept { return parts.size(); }

    std::vector<std::size_t> ground() const {
        std::vector<std::size_t> g;
        for (const auto& p : parts) g.insert(g.end(), p.begin(), p.end());
        std::sort(g.begin(), g.end());
        return g;
    }

    bool operator==(const Partition&) const = default;
};

// Projection from a finer partition's part indices onto a coarser one's,
// with an optional section picking one fine part per coarse part.
struct Refinement {
    std::vector<std::size_t> projection;
    std::optional<std::vector<std::size_t>> section;
};

namespace detail {

// True when every part is a set of consecutive elements in the circular
// order of the ground set and the parts are listed in circular order.
inline bool parts_are_circular_intervals(const std::vector<std::vector<std::size_t>>& parts,
                                         const std::vector<std::size_t>& ground) {
    if (parts.empty()) return true;
    const std::size_t n = ground.size();
    std::vector<std::size_t> pos_of(ground.back() + 1, 0);
    for (std::size_t i = 0; i < n; ++i) pos_of[ground[i]] = i;

    // Walk the circle once starting at the first element of part 0; the
    // positions must sweep each listed part contiguously, in order.
    std::vector<std::size_t> order;
    order.reserve(n);
    for (const auto& part : parts) {
        if (part.empty()) return false;
        for (std::size_t r : part) order.push_back(pos_of[r]);
    }
    if (order.size() != n) return false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (order[i + 1] != (order[i] + 1) % n) return false;
    }
    return true;
}

} // namespace detail

// Computes the interval flag for externally supplied parts.
inline Partition make_partition(std::vector<std::vector<std::size_t>> parts) {
    std::vector<std::size_t> ground;
    std::set<std::size_t> seen;
    for (const auto& p : parts) {
        if (p.empty()) {
            throw validation_error("EmptyPart", "partition parts must be nonempty");
        }
        for (std::size_t r : p) {
            if (!seen.insert(r).second) {
                throw validation_error("Overlap",
                                       "ray " + std::to_string(r) + " in two parts");
            }
            ground.push_back(r);
        }
    }
    std::sort(ground.begin(), ground.end());
    Partition result;
    result.intervals = detail::parts_are_circular_intervals(parts, ground);
    result.parts = std::move(parts);
    return result;
}

struct TwistResult {
    BundleData bundle;
    DivisorVector twist;
};

// Normalizes each triple (i1, i2, line) to (-jump, 0, line) by twisting with
// n_rho = -i2; applying the inverse twist recovers the input.
inline TwistResult normalize_twist(const Fan& fan, const std::vector<FiltrationTriple>& raw) {
    if (raw.size() != fan.ray_count()) {
        throw validation_error("BadShape", "one triple per ray required");
    }
    std::vector<RayFiltration> filts;
    DivisorVector twist;
    filts.reserve(raw.size());
    twist.reserve(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const FiltrationTriple& t = raw[k];
        if (t.i1 > t.i2) {
            throw validation_error("BadTriple", "i1 > i2 at ray " + std::to_string(k));
        }
        if (t.line.has_value() != (t.i1 < t.i2)) {
            throw validation_error("BadTriple",
                                   "ray " + std::to_string(k) +
                                       ": line must be present exactly when i1 < i2");
        }
        filts.push_back(RayFiltration{t.i2 - t.i1, t.line});
        twist.push_back(-t.i2);
    }
    return TwistResult{BundleData(fan, std::move(filts)), std::move(twist)};
}

// Dimension of E^rho(i) for the normalized filtration (-jump, 0, line).
inline int filtration_dim(const BundleData& b, std::size_t ray, long long level) {
    const long long jump = b.jump(ray);
    if (level >= 0) return 2;
    if (level >= -jump) return 1;
    return 0;
}

// Dimension of the sigma-family piece E^sigma_m for the maximal cone k:
// the intersection of the two ray filtrations at their pairing levels.
inline int sigma_family_dim(const BundleData& b, std::size_t cone, const Character& m) {
    const std::size_t r0 = cone;
    const std::size_t r1 = b.fan().next(cone);
    const int d0 = filtration_dim(b, r0, pairing(m, b.fan().ray(r0)));
    const int d1 = filtration_dim(b, r1, pairing(m, b.fan().ray(r1)));
    if (d0 == 0 || d1 == 0) return 0;
    if (d0 == 2) return d1;
    if (d1 == 2) return d0;
    return *b.line(r0) == *b.line(r1) ? 1 : 0;
}

// Maximal circular runs of Pi carrying equal lines. The first part listed
// is the one containing the smallest ray index of Pi; subsequent parts
// follow in circular order, each listed from its run start.
inline Partition coarse_partition(const BundleData& b) {
    const std::vector<std::size_t> pi = b.support();
    Partition result;
    result.intervals = true;
    const std::size_t n = pi.size();
    if (n == 0) return result;

    const auto line_at = [&](std::size_t pos) { return *b.line(pi[pos]); };

    std::vector<std::size_t> run_starts;
    for (std::size_t j = 0; j < n; ++j) {
        if (!(line_at(j) == line_at((j + n - 1) % n))) run_starts.push_back(j);
    }
    if (run_starts.empty()) {
        // A single run around the whole circle; start at the smallest ray.
        result.parts.push_back(pi);
        return result;
    }

    std::vector<std::vector<std::size_t>> runs;
    for (std::size_t s = 0; s < run_starts.size(); ++s) {
        const std::size_t begin = run_starts[s];
        const std::size_t end = run_starts[(s + 1) % run_starts.size()];
        std::vector<std::size_t> run;
        for (std::size_t j = begin; j != end; j = (j + 1) % n) run.push_back(pi[j]);
        runs.push_back(std::move(run));
    }

    // Rotate so the part containing pi[0] (the smallest ray of Pi) is first.
    std::size_t first = 0;
    for (std::size_t s = 0; s < runs.size(); ++s) {
        if (std::find(runs[s].begin(), runs[s].end(), pi[0]) != runs[s].end()) {
            first = s;
            break;
        }
    }
    for (std::size_t s = 0; s < runs.size(); ++s) {
        result.parts.push_back(std::move(runs[(first + s) % runs.size()]));
    }
    return result;
}

// The projection map when `fine` refines `coarse`; absent when some fine
// part crosses two coarse parts. Both partitions must share the ground set.
inline std::optional<Refinement> is_refinement(const Partition& fine, const Partition& coarse) {
    if (fine.ground() != coarse.ground()) {
        throw validation_error("GroundMismatch",
                               "partitions have different underlying ray sets");
    }
    std::vector<std::size_t> projection(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < coarse.size() && !found; ++j) {
            const auto& cp = coarse.parts[j];
            const bool contained =
                std::all_of(fine.parts[i].begin(), fine.parts[i].end(), [&](std::size_t r) {
                    return std::find(cp.begin(), cp.end(), r) != cp.end();
                });
            if (contained) {
                projection[i] = j;
                found = true;
            }
        }
        if (!found) return std::nullopt;
    }
    return Refinement{std::move(projection), std::nullopt};
}

// Canonical section of a refinement projection: in each coarse part, the
// fine part with the smallest minimal ray index.
inline std::vector<std::size_t> default_section(const Partition& fine,
                                                const std::vector<std::size_t>& projection,
                                                std::size_t coarse_size) {
    std::vector<std::size_t> section(coarse_size, fine.size());
    std::vector<std::size_t> best(coarse_size, 0);
    for (std::size_t i = 0; i < fine.size(); ++i) {
        const std::size_t j = projection[i];
        const std::size_t min_ray =
            *std::min_element(fine.parts[i].begin(), fine.parts[i].end());
        if (section[j] == fine.size() || min_ray < best[j]) {
            section[j] = i;
            best[j] = min_ray;
        }
    }
    return section;
}

// Equivariant isomorphism of two bundles on the same fan: equal jumps and
// a single change of basis of the generic fiber matching the lines ray by
// ray. With at most two distinct lines any two configurations with the
// same coincidence pattern match; from three on, the transform through the
// first three distinct lines is unique and is verified on the rest.
inline bool equivariant_iso(const BundleData& x, const BundleData& y) {
    if (!(x.fan() == y.fan()) || x.jumps() != y.jumps()) return false;
    const std::vector<std::size_t> pi = x.support();
    for (std::size_t i = 0; i < pi.size(); ++i) {
        for (std::size_t j = i + 1; j < pi.size(); ++j) {
            const bool same_x = *x.line(pi[i]) == *x.line(pi[j]);
            const bool same_y = *y.line(pi[i]) == *y.line(pi[j]);
            if (same_x != same_y) return false;
        }
    }
    std::vector<std::size_t> reps; // rays carrying pairwise distinct x-lines
    for (std::size_t r : pi) {
        bool fresh = true;
        for (std::size_t seen : reps) {
            if (*x.line(seen) == *x.line(r)) {
                fresh = false;
                break;
            }
        }
        if (fresh) reps.push_back(r);
        if (reps.size() == 3) break;
    }
    if (reps.size() < 3) return true;
    const Mat g = projective_transform_through(*y.line(reps[0]), *y.line(reps[1]),
                                               *y.line(reps[2])) *
                  inverse2(projective_transform_through(
                      *x.line(reps[0]), *x.line(reps[1]), *x.line(reps[2])));
    for (std::size_t r : pi) {
        if (!(apply_transform(g, *x.line(r)) == *y.line(r))) return false;
    }
    return true;
}

// When the coarse partition has at most two parts the bundle splits into
// line bundles; returns their divisor coefficient vectors.
inline std::optional<std::pair<DivisorVector, DivisorVector>> split_summands(
    const BundleData& b) {
    const Partition coarse = coarse_partition(b);
    if (coarse.size() > 2) return std::nullopt;
    DivisorVector d1(b.fan().ray_count(), 0);
    DivisorVector d2(b.fan().ray_count(), 0);
    if (coarse.size() >= 1) {
        for (std::size_t r : coarse.parts[0]) d1[r] = b.jump(r);
    }
    if (coarse.size() == 2) {
        for (std::size_t r : coarse.parts[1]) d2[r] = b.jump(r);
    }
    return std::make_pair(std::move(d1), std::move(d2));
}

} // namespace torix

#endif
