#ifndef TORIX_JSON_IO_HPP
#define TORIX_JSON_IO_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "torix/bundle.hpp"
#include "torix/errors.hpp"
#include "torix/fan.hpp"
#include "torix/git.hpp"
#include "torix/linalg.hpp"
#include "torix/resolution.hpp"
#include "torix/sheaf.hpp"

namespace torix {

using json = nlohmann::json;

// All scalars serialize as canonical strings "p/q" (or "p"); projective
// points as two-element arrays of such strings. Object keys come out
// sorted, so serialization is byte deterministic.

inline json scalar_to_json(const Scalar& x) { return format_scalar(x); }

inline Scalar scalar_from_json(const json& j) {
    if (!j.is_string()) {
        throw validation_error("BadInput", "scalar must be a string like \"p/q\"");
    }
    return parse_scalar(j.get<std::string>());
}

inline json point_to_json(const ProjectiveLinePoint& p) {
    return json::array({format_scalar(p.a()), format_scalar(p.b())});
}

inline ProjectiveLinePoint point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw validation_error("BadInput", "projective point must be a 2-element array");
    }
    return ProjectiveLinePoint(scalar_from_json(j[0]), scalar_from_json(j[1]));
}

inline json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Mat mat_from_json(const json& j, std::size_t expect_cols = SIZE_MAX) {
    if (!j.is_array()) {
        throw validation_error("BadInput", "matrix must be an array of rows");
    }
    const std::size_t rows = j.size();
    std::size_t cols = expect_cols;
    if (cols == SIZE_MAX) cols = rows == 0 ? 0 : j[0].size();
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw validation_error("BadInput", "ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = scalar_from_json(j[i][c]);
    }
    return m;
}

inline json fan_to_json(const Fan& f) {
    json rays = json::array();
    for (const RayVector& r : f.rays()) rays.push_back(json::array({r.x, r.y}));
    return json{{"rays", std::move(rays)}};
}

inline Fan fan_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rays") || !j["rays"].is_array()) {
        throw validation_error("BadInput", "fan must be {\"rays\": [[x, y], ...]}");
    }
    std::vector<RayVector> rays;
    for (const json& r : j["rays"]) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() ||
            !r[1].is_number_integer()) {
            throw validation_error("BadInput", "ray must be a pair of integers");
        }
        rays.push_back(RayVector{r[0].get<long long>(), r[1].get<long long>()});
    }
    Fan f(std::move(rays));
    validate(f);
    return f;
}

inline json bundle_to_json(const BundleData& b) {
    json filts = json::array();
    for (const RayFiltration& rf : b.filtrations()) {
        json entry{{"jump", rf.jump}};
        if (rf.line) entry["line"] = point_to_json(*rf.line);
        filts.push_back(std::move(entry));
    }
    return json{{"fan", fan_to_json(b.fan())}, {"filtrations", std::move(filts)}};
}

// Accepts both the normalized form {"jump": j, "line": ...} and raw
// filtration triples {"i1": ..., "i2": ..., "line": ...}; raw entries are
// normalized by twisting.
inline BundleData bundle_from_json(const json& j) {
    if (!j.is_object() || !j.contains("fan") || !j.contains("filtrations") ||
        !j["filtrations"].is_array()) {
        throw validation_error("BadInput",
                               "bundle must be {\"fan\": ..., \"filtrations\": [...]}");
    }
    Fan fan = fan_from_json(j["fan"]);
    std::vector<FiltrationTriple> triples;
    for (const json& e : j["filtrations"]) {
        if (!e.is_object()) {
            throw validation_error("BadInput", "filtration entry must be an object");
        }
        FiltrationTriple t;
        if (e.contains("jump")) {
            if (!e["jump"].is_number_integer()) {
                throw validation_error("BadInput", "jump must be an integer");
            }
            t.i1 = -e["jump"].get<long long>();
            t.i2 = 0;
        } else if (e.contains("i1") && e.contains("i2")) {
            t.i1 = e["i1"].get<long long>();
            t.i2 = e["i2"].get<long long>();
        } else {
            throw validation_error("BadInput",
                                   "filtration entry needs \"jump\" or \"i1\"/\"i2\"");
        }
        if (e.contains("line")) t.line = point_from_json(e["line"]);
        triples.push_back(std::move(t));
    }
    return normalize_twist(fan, triples).bundle;
}

inline json partition_to_json(const Partition& p) {
    json parts = json::array();
    for (const auto& part : p.parts) {
        json indices = json::array();
        for (std::size_t r : part) indices.push_back(r);
        parts.push_back(std::move(indices));
    }
    return parts;
}

inline Partition partition_from_json(const json& j) {
    if (!j.is_array()) {
        throw validation_error("BadInput", "partition must be an array of index arrays");
    }
    std::vector<std::vector<std::size_t>> parts;
    for (const json& part : j) {
        if (!part.is_array()) {
            throw validation_error("BadInput", "partition part must be an index array");
        }
        std::vector<std::size_t> indices;
        for (const json& r : part) {
            if (!r.is_number_unsigned() && !r.is_number_integer()) {
                throw validation_error("BadInput", "ray index must be an integer");
            }
            const long long v = r.get<long long>();
            if (v < 0) throw validation_error("BadInput", "ray index must be nonnegative");
            indices.push_back(static_cast<std::size_t>(v));
        }
        parts.push_back(std::move(indices));
    }
    return make_partition(std::move(parts));
}

inline json jumps_to_json(const DivisorVector& jumps) {
    json out = json::array();
    for (long long v : jumps) out.push_back(v);
    return out;
}

inline DivisorVector jumps_from_json(const json& j) {
    if (!j.is_array()) {
        throw validation_error("BadInput", "jumps must be an array of integers");
    }
    DivisorVector jumps;
    for (const json& v : j) {
        if (!v.is_number_integer()) {
            throw validation_error("BadInput", "jump must be an integer");
        }
        jumps.push_back(v.get<long long>());
    }
    return jumps;
}

// Monomial matrix from the shared presentation schema: the row exponents
// are reconstructed from the partition and the per-ray jumps.
inline MonomialMatrix monomial_matrix_from_json(const json& j, const Fan& fan) {
    if (!j.is_object() || !j.contains("partition") || !j.contains("jumps") ||
        !j.contains("coeffs")) {
        throw validation_error(
            "BadInput", "need \"partition\", \"jumps\" and \"coeffs\" fields");
    }
    MonomialMatrix mm;
    mm.partition = partition_from_json(j["partition"]);
    const DivisorVector jumps = jumps_from_json(j["jumps"]);
    if (jumps.size() != fan.ray_count()) {
        throw validation_error("BadInput", "jumps length must match the ray count");
    }
    for (std::size_t i = 0; i < mm.partition.size(); ++i) {
        ExponentVector e(fan.ray_count(), 0);
        for (std::size_t r : mm.partition.parts[i]) {
            if (r >= fan.ray_count()) {
                throw validation_error("BadInput", "partition ray index out of range");
            }
            e[r] = jumps[r];
        }
        mm.row_exponents.push_back(std::move(e));
    }
    mm.coeffs = mat_from_json(j["coeffs"],
                              mm.partition.size() >= 2 ? mm.partition.size() - 2 : 0);
    if (mm.coeffs.rows() != mm.partition.size()) {
        throw validation_error("BadInput", "coeffs must have one row per part");
    }
    validate_monomial_matrix(mm, fan);
    return mm;
}

inline json resolution_to_json(const MonomialResolution& r, const Fan& fan) {
    return json{{"coeffs", mat_to_json(r.matrix.coeffs)},
                {"cokernel_map", mat_to_json(r.cokernel_map)},
                {"fan", fan_to_json(fan)},
                {"jumps", jumps_to_json(derive_jumps(r.matrix, fan))},
                {"partition", partition_to_json(r.matrix.partition)}};
}

inline json presentation_to_json(const SheafPresentation& p) {
    return json{{"coeffs", mat_to_json(p.matrix().coeffs)},
                {"fan", fan_to_json(p.fan())},
                {"jumps", jumps_to_json(p.jumps())},
                {"partition", partition_to_json(p.partition())}};
}

// A resolution document (with its cokernel_map) parses as a presentation
// too; the stored map is ignored and the canonical one recomputed.
inline SheafPresentation presentation_from_json(const json& j) {
    if (!j.is_object() || !j.contains("fan")) {
        throw validation_error("BadInput", "presentation needs a \"fan\" field");
    }
    Fan fan = fan_from_json(j["fan"]);
    MonomialMatrix mm = monomial_matrix_from_json(j, fan);
    return SheafPresentation(std::move(fan), std::move(mm));
}

inline MonomialResolution resolution_from_json(const json& j, Fan* fan_out = nullptr) {
    if (!j.is_object() || !j.contains("fan") || !j.contains("cokernel_map")) {
        throw validation_error("BadInput",
                               "resolution needs \"fan\" and \"cokernel_map\" fields");
    }
    Fan fan = fan_from_json(j["fan"]);
    MonomialMatrix mm = monomial_matrix_from_json(j, fan);
    Mat cokernel = mat_from_json(j["cokernel_map"], mm.partition.size());
    if (cokernel.rows() != 2) {
        throw validation_error("BadInput", "cokernel_map must have 2 rows");
    }
    if (!(cokernel * mm.coeffs).is_zero() || rank(cokernel) != 2) {
        throw validation_error("BadInput", "cokernel_map is not a rank-2 cokernel of "
                                           "coeffs");
    }
    if (fan_out) *fan_out = fan;
    return MonomialResolution{std::move(mm), std::move(cokernel)};
}

inline json config_to_json(const PointConfig& c) {
    json points = json::array();
    for (const auto& p : c.points()) {
        json coords = json::array();
        for (const Scalar& x : p) coords.push_back(scalar_to_json(x));
        points.push_back(std::move(coords));
    }
    return json{{"m", c.ambient()}, {"points", std::move(points)}};
}

inline PointConfig config_from_json(const json& j) {
    if (!j.is_object() || !j.contains("m") || !j.contains("points") ||
        !j["points"].is_array()) {
        throw validation_error("BadInput", "config must be {\"m\": ..., \"points\": [...]}");
    }
    const std::size_t m = j["m"].get<std::size_t>();
    std::vector<std::vector<Scalar>> points;
    for (const json& p : j["points"]) {
        if (!p.is_array()) {
            throw validation_error("BadInput", "point must be an array of scalars");
        }
        std::vector<Scalar> coords;
        for (const json& x : p) coords.push_back(scalar_from_json(x));
        points.push_back(std::move(coords));
    }
    return PointConfig(m, std::move(points));
}

inline json verdict_to_json(const StabilityVerdict& v) {
    json out{{"status", to_string(v.status)}};
    if (v.witness) {
        json w = json::array();
        for (std::size_t i : *v.witness) w.push_back(i);
        out["witness"] = std::move(w);
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

inline json skyscraper_to_json(const SkyscraperReport& r) {
    json support = json::array();
    for (std::size_t k : r.support) support.push_back(k);
    json lengths = json::object();
    for (const auto& [cone, len] : r.lengths) lengths[std::to_string(cone)] = len;
    return json{{"lengths", std::move(lengths)}, {"support", std::move(support)}};
}

inline json local_freeness_to_json(const LocalFreenessReport& r) {
    json out;
    out["cyclic_minors"] = r.cyclic_minors ? json(*r.cyclic_minors) : json(nullptr);
    out["fitting"] = r.fitting;
    out["fixed_point_ranks"] = r.fixed_point_ranks;
    out["locally_free"] = r.locally_free();
    json witness = json::object();
    if (r.failing_minor) {
        witness["minor"] = json::array({r.failing_minor->first, r.failing_minor->second});
    }
    if (r.failing_cone_fitting) witness["fitting_cone"] = *r.failing_cone_fitting;
    if (r.failing_cone_rank) witness["rank_cone"] = *r.failing_cone_rank;
    out["witness"] = std::move(witness);
    return out;
}

} // namespace torix

#endif
