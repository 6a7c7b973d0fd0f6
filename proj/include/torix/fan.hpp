#ifndef TORIX_FAN_HPP
#define TORIX_FAN_HPP

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "torix/errors.hpp"

namespace torix {

// Primitive lattice vector spanning a ray of the fan.
struct RayVector {
    long long x = 0;
    long long y = 0;

    bool operator==(const RayVector&) const = default;
};

// An element of the character lattice M.
struct Character {
    long long m1 = 0;
    long long m2 = 0;

    bool operator==(const Character&) const = default;
};

// One nonnegative exponent per ray; a monomial of the homogeneous
// coordinate ring in the fine grading.
using ExponentVector = std::vector<long long>;

inline long long pairing(const Character& m, const RayVector& n) {
    return m.m1 * n.x + m.m2 * n.y;
}

inline long long ray_det(const RayVector& u, const RayVector& v) {
    return u.x * v.y - u.y * v.x;
}

// Fan of a smooth complete toric surface, given by its rays in
// counterclockwise cyclic order. The maximal cone sigma_k is spanned by
// rays k and k+1 (mod m), so cones are indexed like rays.
class Fan {
public:
    explicit Fan(std::vector<RayVector> rays) : rays_(std::move(rays)) {}

    std::size_t ray_count() const noexcept { return rays_.size(); }
    std::size_t cone_count() const noexcept { return rays_.size(); }
    const RayVector& ray(std::size_t k) const { return rays_[k]; }
    const std::vector<RayVector>& rays() const noexcept { return rays_; }

    std::size_t next(std::size_t k) const { return (k + 1) % rays_.size(); }
    std::size_t prev(std::size_t k) const { return (k + rays_.size() - 1) % rays_.size(); }

    bool operator==(const Fan&) const = default;

private:
    std::vector<RayVector> rays_;
};

inline Fan make_projective_plane() {
    return Fan({{1, 0}, {0, 1}, {-1, -1}});
}

inline Fan make_hirzebruch(long long a) {
    if (a < 0) {
        throw validation_error("BadParameter", "Hirzebruch parameter must be nonnegative");
    }
    return Fan({{1, 0}, {0, 1}, {-1, a}, {0, -1}});
}

// Inserts the ray n(rho_k) + n(rho_{k+1}) between positions k and k+1.
inline Fan blow_up(const Fan& f, std::size_t k) {
    if (k >= f.ray_count()) {
        throw validation_error("BadConeIndex",
                               "cone index " + std::to_string(k) + " out of range");
    }
    const RayVector a = f.ray(k);
    const RayVector b = f.ray(f.next(k));
    std::vector<RayVector> rays = f.rays();
    rays.insert(rays.begin() + static_cast<std::ptrdiff_t>(k) + 1,
                RayVector{a.x + b.x, a.y + b.y});
    return Fan(std::move(rays));
}

namespace detail {

// 0 for the upper half plane (including the positive x-axis), 1 for the
// lower half (including the negative x-axis).
inline int half_plane(const RayVector& v) {
    return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1;
}

// Strict angular order counterclockwise from the positive x-axis, decided
// with integer arithmetic only.
inline bool angle_less(const RayVector& u, const RayVector& v) {
    if (half_plane(u) != half_plane(v)) return half_plane(u) < half_plane(v);
    return ray_det(u, v) > 0;
}

} // namespace detail

inline void validate(const Fan& f) {
    const std::size_t m = f.ray_count();
    if (m < 3) {
        throw validation_error("TooFewRays",
                               "fan needs at least 3 rays, got " + std::to_string(m));
    }
    for (std::size_t k = 0; k < m; ++k) {
        const RayVector& r = f.ray(k);
        if ((r.x == 0 && r.y == 0) ||
            std::gcd(r.x < 0 ? -r.x : r.x, r.y < 0 ? -r.y : r.y) != 1) {
            throw validation_error("NotPrimitive", "ray " + std::to_string(k) + " = (" +
                                                       std::to_string(r.x) + ", " +
                                                       std::to_string(r.y) +
                                                       ") is not primitive");
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        const long long d = ray_det(f.ray(k), f.ray(f.next(k)));
        if (d != 1) {
            throw validation_error("NotSmooth",
                                   "adjacent rays " + std::to_string(k) + ", " +
                                       std::to_string(f.next(k)) + " have determinant " +
                                       std::to_string(d));
        }
    }
    // Completeness: starting at the ray of minimal angle, the stored cyclic
    // order must be strictly increasing by angle, which forces the rays to
    // wind exactly once.
    std::size_t start = 0;
    for (std::size_t k = 1; k < m; ++k) {
        if (detail::angle_less(f.ray(k), f.ray(start))) start = k;
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const RayVector& u = f.ray((start + j) % m);
        const RayVector& v = f.ray((start + j + 1) % m);
        if (!detail::angle_less(u, v)) {
            throw validation_error("NotComplete", "rays do not wind exactly once");
        }
    }
}

// One generator x^sigma-hat per maximal cone: exponent 1 on every ray not
// in the cone, 0 on its two rays.
inline std::vector<ExponentVector> irrelevant_generators(const Fan& f) {
    const std::size_t m = f.ray_count();
    std::vector<ExponentVector> gens;
    gens.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        ExponentVector e(m, 1);
        e[k] = 0;
        e[f.next(k)] = 0;
        gens.push_back(std::move(e));
    }
    return gens;
}

} // namespace torix

#endif
