#ifndef TORIX_GENERATE_HPP
#define TORIX_GENERATE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "torix/bundle.hpp"
#include "torix/errors.hpp"
#include "torix/fan.hpp"
#include "torix/git.hpp"
#include "torix/linalg.hpp"
#include "torix/resolution.hpp"
#include "torix/sheaf.hpp"

namespace torix {

// Deterministic seeded source of small integers. mt19937_64 is fully
// specified by the standard; avoiding distribution objects keeps the
// streams identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    long long range(long long lo, long long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long long>(engine_() % span);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(range(0, static_cast<long long>(i) - 1))]);
        }
    }

private:
    std::mt19937_64 engine_;
};

inline ProjectiveLinePoint random_line(Rng& rng, long long bound = 5) {
    while (true) {
        const Scalar a(rng.range(-bound, bound));
        const Scalar b(rng.range(-bound, bound));
        if (a != 0 || b != 0) return ProjectiveLinePoint(a, b);
    }
}

// Pool of pairwise distinct lines to draw coincidence patterns from.
inline std::vector<ProjectiveLinePoint> random_line_pool(Rng& rng, std::size_t count,
                                                         long long bound = 7) {
    std::vector<ProjectiveLinePoint> pool;
    while (pool.size() < count) {
        const ProjectiveLinePoint candidate = random_line(rng, bound);
        bool fresh = true;
        for (const auto& p : pool) {
            if (p == candidate) {
                fresh = false;
                break;
            }
        }
        if (fresh) pool.push_back(candidate);
    }
    return pool;
}

// Bundle with jumps in [0, max_jump] and lines drawn from a small pool;
// resamples until the coarse partition has at least `min_parts` parts.
inline BundleData random_bundle(Rng& rng, const Fan& fan, long long max_jump,
                                std::size_t min_parts, std::size_t pool_size = 4) {
    while (true) {
        const auto pool = random_line_pool(rng, pool_size);
        std::vector<RayFiltration> filts(fan.ray_count());
        for (auto& rf : filts) {
            rf.jump = rng.range(0, max_jump);
            if (rf.jump > 0) {
                rf.line = pool[static_cast<std::size_t>(
                    rng.range(0, static_cast<long long>(pool.size()) - 1))];
            }
        }
        BundleData b(fan, std::move(filts));
        if (coarse_partition(b).size() >= min_parts) return b;
    }
}

// Interval partition of all rays into s circular arcs, enumerated in
// circular order (interval flag set).
inline Partition random_interval_partition(Rng& rng, std::size_t ray_count, std::size_t s) {
    std::vector<std::size_t> cuts;
    while (cuts.size() < s) {
        const std::size_t c =
            static_cast<std::size_t>(rng.range(0, static_cast<long long>(ray_count) - 1));
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::vector<std::size_t>> parts;
    for (std::size_t i = 0; i < s; ++i) {
        const std::size_t begin = cuts[i];
        const std::size_t end = cuts[(i + 1) % s];
        std::vector<std::size_t> part;
        for (std::size_t r = begin; r != end; r = (r + 1) % ray_count) part.push_back(r);
        parts.push_back(std::move(part));
    }
    return make_partition(std::move(parts));
}

// Monomial matrix over an interval partition of the full ray set, all
// jumps positive. Coefficients come either from a random full-rank matrix
// or from the kernel of a column configuration with planted coincidences,
// which produces the degenerate cases.
inline MonomialMatrix random_interval_matrix(Rng& rng, const Fan& fan, long long max_jump) {
    const std::size_t m = fan.ray_count();
    const std::size_t s =
        static_cast<std::size_t>(rng.range(3, static_cast<long long>(m)));
    MonomialMatrix mm;
    mm.partition = random_interval_partition(rng, m, s);

    DivisorVector jumps(m);
    for (auto& j : jumps) j = rng.range(1, max_jump);
    for (std::size_t i = 0; i < s; ++i) {
        ExponentVector e(m, 0);
        for (std::size_t r : mm.partition.parts[i]) e[r] = jumps[r];
        mm.row_exponents.push_back(std::move(e));
    }

    if (rng.range(0, 1) == 0) {
        while (true) {
            Mat coeffs(s, s - 2);
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t j = 0; j + 2 < s; ++j) coeffs(i, j) = rng.range(-3, 3);
            if (rank(coeffs) == s - 2) {
                mm.coeffs = std::move(coeffs);
                break;
            }
        }
    } else {
        const std::size_t pool_size =
            static_cast<std::size_t>(rng.range(2, static_cast<long long>(s)));
        const auto pool = random_line_pool(rng, pool_size);
        Mat cokernel(2, s);
        for (std::size_t j = 0; j < s; ++j) {
            const auto& line = pool[static_cast<std::size_t>(
                rng.range(0, static_cast<long long>(pool.size()) - 1))];
            cokernel(0, j) = line.a();
            cokernel(1, j) = line.b();
        }
        if (rank(cokernel) != 2) return random_interval_matrix(rng, fan, max_jump);
        mm.coeffs = kernel_basis(cokernel);
    }
    return mm;
}

// Presentation over an arbitrary partition of Pi (interval or not), with
// column lines from a small pool so that strict refinements of the bidual's
// coarse partition occur frequently.
inline SheafPresentation random_presentation(Rng& rng, const Fan& fan, long long max_jump,
                                             bool intervals_only = false) {
    const std::size_t m = fan.ray_count();
    while (true) {
        DivisorVector jumps(m);
        std::vector<std::size_t> pi;
        for (std::size_t r = 0; r < m; ++r) {
            jumps[r] = rng.range(0, max_jump);
            if (jumps[r] > 0) pi.push_back(r);
        }
        if (pi.size() < 2) continue;

        const std::size_t s = static_cast<std::size_t>(
            rng.range(2, static_cast<long long>(pi.size())));
        std::vector<std::vector<std::size_t>> parts(s);
        if (intervals_only) {
            // Arcs of Pi in circular order.
            std::vector<std::size_t> cuts;
            while (cuts.size() < s) {
                const std::size_t c = static_cast<std::size_t>(
                    rng.range(0, static_cast<long long>(pi.size()) - 1));
                if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
            }
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t i = 0; i < s; ++i) {
                for (std::size_t p = cuts[i]; p != cuts[(i + 1) % s];
                     p = (p + 1) % pi.size()) {
                    parts[i].push_back(pi[p]);
                }
            }
        } else {
            std::vector<std::size_t> shuffled = pi;
            rng.shuffle(shuffled);
            for (std::size_t i = 0; i < s; ++i) parts[i].push_back(shuffled[i]);
            for (std::size_t i = s; i < shuffled.size(); ++i) {
                parts[static_cast<std::size_t>(rng.range(0, static_cast<long long>(s) - 1))]
                    .push_back(shuffled[i]);
            }
            for (auto& part : parts) std::sort(part.begin(), part.end());
        }

        MonomialMatrix mm;
        mm.partition = make_partition(std::move(parts));
        for (std::size_t i = 0; i < s; ++i) {
            ExponentVector e(m, 0);
            for (std::size_t r : mm.partition.parts[i]) e[r] = jumps[r];
            mm.row_exponents.push_back(std::move(e));
        }

        const std::size_t pool_size = static_cast<std::size_t>(
            rng.range(2, std::max<long long>(2, static_cast<long long>(s) - 1)));
        const auto pool = random_line_pool(rng, pool_size);
        Mat cokernel(2, s);
        for (std::size_t j = 0; j < s; ++j) {
            const auto& line = pool[static_cast<std::size_t>(
                rng.range(0, static_cast<long long>(pool.size()) - 1))];
            cokernel(0, j) = line.a();
            cokernel(1, j) = line.b();
        }
        if (rank(cokernel) != 2) continue;
        mm.coeffs = kernel_basis(cokernel);
        return SheafPresentation(fan, std::move(mm));
    }
}

// Full-rank n x m matrix with small entries and no zero rows.
inline Mat random_full_rank_matrix(Rng& rng, std::size_t n, std::size_t m,
                                   long long bound = 3) {
    while (true) {
        Mat a(n, m);
        bool zero_row = false;
        for (std::size_t i = 0; i < n; ++i) {
            bool zero = true;
            for (std::size_t j = 0; j < m; ++j) {
                a(i, j) = rng.range(-bound, bound);
                if (a(i, j) != 0) zero = false;
            }
            if (zero) zero_row = true;
        }
        if (!zero_row && rank(a) == m) return a;
    }
}

inline Mat random_invertible(Rng& rng, std::size_t n, long long bound = 3) {
    while (true) {
        Mat g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.range(-bound, bound);
        if (det(g) != 0) return g;
    }
}

enum class ConfigShape { Any, Stable, Semistable, Unstable };

// n-point configurations on the projective line with a requested stability
// shape; coincidences are planted and the draw rejected until the verdict
// matches.
inline PointConfig random_config(Rng& rng, std::size_t n, ConfigShape shape,
                                 long long bound = 7) {
    if (shape == ConfigShape::Semistable && n % 2 != 0) {
        throw validation_error("OddS", "properly semistable configurations need even n");
    }
    while (true) {
        std::vector<std::vector<Scalar>> pts;
        if (shape == ConfigShape::Semistable || shape == ConfigShape::Unstable) {
            const auto pool = random_line_pool(rng, 2, bound);
            const std::size_t copies = shape == ConfigShape::Semistable ? n / 2 : n / 2 + 1;
            std::vector<std::size_t> order(n);
            for (std::size_t i = 0; i < n; ++i) order[i] = i;
            rng.shuffle(order);
            pts.assign(n, {});
            for (std::size_t i = 0; i < n; ++i) {
                if (i < copies) {
                    pts[order[i]] = {pool[0].a(), pool[0].b()};
                } else {
                    ProjectiveLinePoint p = random_line(rng, bound);
                    while (p == pool[0]) p = random_line(rng, bound);
                    pts[order[i]] = {p.a(), p.b()};
                }
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const ProjectiveLinePoint p = random_line(rng, bound);
                pts.push_back({p.a(), p.b()});
            }
        }
        PointConfig config(2, std::move(pts));
        const Stability status = config_stability(config).status;
        if (shape == ConfigShape::Any || (shape == ConfigShape::Stable && status == Stability::Stable) ||
            (shape == ConfigShape::Semistable && status == Stability::ProperlySemistable) ||
            (shape == ConfigShape::Unstable && status == Stability::Unstable)) {
            return config;
        }
    }
}

} // namespace torix

#endif
