// torix: equivariant rank-2 bundles on smooth complete toric surfaces.
// Every subcommand reads JSON files, writes canonical JSON (sorted keys,
// normalized scalars) to stdout and exits 0 for verdict payloads, 2 for
// rejected input, 1 for internal errors.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "torix/torix.hpp"

using namespace torix;

namespace {

bool g_color = false;

std::string color(const std::string& text, const char* code) {
    if (!g_color) return text;
    return std::string("\033[") + code + "m" + text + "\033[0m";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw validation_error("BadInput", "cannot read file '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw validation_error("BadInput", "invalid JSON in '" + path + "': " + e.what());
    }
}

void emit_json(const json& payload) { std::cout << payload.dump(2) << "\n"; }

struct FanOptions {
    std::string spec;
    std::string blowups;
};

Fan fan_from_options(const FanOptions& opts) {
    Fan fan = [&]() {
        if (opts.spec == "p2") return make_projective_plane();
        if (opts.spec.rfind("hirzebruch:", 0) == 0) {
            try {
                return make_hirzebruch(std::stoll(opts.spec.substr(11)));
            } catch (const validation_error&) {
                throw;
            } catch (const std::exception&) {
                throw validation_error("BadInput", "bad Hirzebruch parameter in --fan");
            }
        }
        if (opts.spec.rfind("file:", 0) == 0) {
            return fan_from_json(read_json_file(opts.spec.substr(5)));
        }
        throw validation_error("BadInput",
                               "--fan must be p2, hirzebruch:<a> or file:<path>");
    }();
    if (!opts.blowups.empty()) {
        std::stringstream ss(opts.blowups);
        std::string token;
        while (std::getline(ss, token, ',')) {
            try {
                fan = blow_up(fan, static_cast<std::size_t>(std::stoull(token)));
            } catch (const validation_error&) {
                throw;
            } catch (const std::exception&) {
                throw validation_error("BadInput", "bad --blowup index '" + token + "'");
            }
        }
    }
    validate(fan);
    return fan;
}

LabeledConfig labeled_from_file(const std::string& path) {
    const json doc = read_json_file(path);
    if (doc.contains("filtrations")) {
        const BundleData b = bundle_from_json(doc);
        return labeled_config(b, coarse_partition(b));
    }
    if (doc.contains("coeffs")) {
        return labeled_config(presentation_from_json(doc));
    }
    throw validation_error("BadInput",
                           "'" + path + "' is neither a bundle nor a presentation");
}

std::string divisor_text(const DivisorVector& d) {
    std::string out;
    for (std::size_t r = 0; r < d.size(); ++r) {
        if (d[r] == 0) continue;
        if (!out.empty()) out += " + ";
        if (d[r] != 1) out += std::to_string(d[r]) + " ";
        out += "D" + std::to_string(r);
    }
    return out.empty() ? "0" : out;
}

std::string monomial_text(const ExponentVector& e) {
    std::string out;
    for (std::size_t r = 0; r < e.size(); ++r) {
        if (e[r] == 0) continue;
        if (!out.empty()) out += "*";
        out += "x" + std::to_string(r);
        if (e[r] != 1) out += "^" + std::to_string(e[r]);
    }
    return out.empty() ? "1" : out;
}

std::string point_text(const ProjectiveLinePoint& p) {
    return "(" + format_scalar(p.a()) + " : " + format_scalar(p.b()) + ")";
}

void print_resolution_text(const MonomialResolution& res) {
    const std::size_t s = res.matrix.partition.size();
    std::string middle;
    for (std::size_t i = 0; i < s; ++i) {
        if (i) middle += " (+) ";
        middle += "O(" + divisor_text(res.matrix.degrees()[i]) + ")";
    }
    std::printf("0 -> O^%zu -> %s -> E -> 0\n\n", s - 2, middle.c_str());
    std::printf("matrix A (coefficient rows, monomial factors):\n");
    for (std::size_t i = 0; i < s; ++i) {
        std::string row = "  [";
        for (std::size_t j = 0; j + 2 < s; ++j) {
            row += " " + format_scalar(res.matrix.coeffs(i, j));
        }
        row += " ]  " + monomial_text(res.matrix.row_exponents[i]);
        std::printf("%s\n", row.c_str());
    }
    std::printf("\ncokernel map columns:");
    for (std::size_t j = 0; j < s; ++j) {
        std::printf(" %s",
                    point_text(ProjectiveLinePoint(res.cokernel_map(0, j),
                                                   res.cokernel_map(1, j)))
                        .c_str());
    }
    std::printf("\n");
}

void print_verdict_text(const StabilityVerdict& v) {
    const char* code = v.status == Stability::Stable ? "32"
                       : v.status == Stability::ProperlySemistable ? "33" : "31";
    std::printf("status: %s\n", color(to_string(v.status), code).c_str());
    if (v.witness) {
        std::string w;
        for (std::size_t i : *v.witness) w += (w.empty() ? "" : ", ") + std::to_string(i);
        std::printf("witness: {%s}\n", w.c_str());
    }
}

int dispatch(CLI::App& app, int argc, char** argv) {
    // fan ------------------------------------------------------------------
    auto* cmd_fan = app.add_subcommand("fan", "build or inspect a fan");
    FanOptions fan_opts;
    std::string output_mode = "json";
    cmd_fan->add_option("--fan", fan_opts.spec, "p2 | hirzebruch:<a> | file:<path>")
        ->required();
    cmd_fan->add_option("--blowup", fan_opts.blowups, "cone indices, applied left to right");
    cmd_fan->add_option("--output", output_mode, "json | text");

    // bundle ---------------------------------------------------------------
    auto* cmd_bundle = app.add_subcommand("bundle", "normalize, partition and split");
    std::string bundle_path;
    cmd_bundle->add_option("--bundle", bundle_path, "bundle JSON file")->required();
    cmd_bundle->add_option("--output", output_mode, "json | text");

    // resolve ----------------------------------------------------------------
    auto* cmd_resolve = app.add_subcommand("resolve", "build the Euler type resolution");
    std::string resolve_bundle;
    cmd_resolve->add_option("--bundle", resolve_bundle, "bundle JSON file")->required();
    cmd_resolve->add_option("--output", output_mode, "json | text");

    // check ------------------------------------------------------------------
    auto* cmd_check = app.add_subcommand("check", "local freeness report");
    std::string check_path;
    cmd_check->add_option("--presentation", check_path, "presentation or resolution JSON")
        ->required();
    cmd_check->add_option("--output", output_mode, "json | text");

    // bidual -----------------------------------------------------------------
    auto* cmd_bidual = app.add_subcommand("bidual", "bidual bundle of a presentation");
    std::string bidual_path;
    cmd_bidual->add_option("--presentation", bidual_path, "presentation JSON")->required();
    cmd_bidual->add_option("--output", output_mode, "json | text");

    // skyscraper ---------------------------------------------------------------
    auto* cmd_sky = app.add_subcommand("skyscraper", "skyscraper support and lengths");
    std::string sky_path;
    long long sky_radius = 0;
    cmd_sky->add_option("--presentation", sky_path, "presentation JSON")->required();
    cmd_sky->add_option("--radius", sky_radius, "box radius (default: max jump + 2)");
    cmd_sky->add_option("--output", output_mode, "json | text");

    // stability ---------------------------------------------------------------
    auto* cmd_stab = app.add_subcommand("stability", "GIT stability verdicts");
    std::string stab_path;
    std::string stab_mode = "config";
    cmd_stab->add_option("--config", stab_path, "configuration or matrix JSON")->required();
    cmd_stab->add_option("--mode", stab_mode, "config | grass-torus | grass-gl");
    cmd_stab->add_option("--output", output_mode, "json | text");

    // equiv -------------------------------------------------------------------
    auto* cmd_equiv = app.add_subcommand("equiv", "P-equivalence of two inputs");
    std::vector<std::string> equiv_paths;
    cmd_equiv->add_option("inputs", equiv_paths, "two bundle or presentation files")
        ->expected(2);
    cmd_equiv->add_option("--output", output_mode, "json | text");

    // moduli ------------------------------------------------------------------
    auto* cmd_moduli = app.add_subcommand("moduli", "moduli coordinate (s = 4)");
    std::string moduli_path;
    cmd_moduli->add_option("--bundle", moduli_path, "bundle JSON file")->required();
    cmd_moduli->add_option("--output", output_mode, "json | text");

    // classes -----------------------------------------------------------------
    auto* cmd_classes = app.add_subcommand("classes", "properly semistable classes");
    long long classes_s = 0;
    FanOptions classes_fan;
    cmd_classes->add_option("--s", classes_s, "partition size (even, >= 4)")->required();
    cmd_classes->add_option("--fan", classes_fan.spec, "flag locally free splits over this fan");
    cmd_classes->add_option("--blowup", classes_fan.blowups, "cone indices");
    cmd_classes->add_option("--output", output_mode, "json | text");

    // oracle ------------------------------------------------------------------
    auto* cmd_oracle = app.add_subcommand("oracle", "chart grid and bidual comparison");
    std::string oracle_path;
    long long oracle_cone = 0;
    long long oracle_radius = 0;
    cmd_oracle->add_option("--presentation", oracle_path, "presentation JSON")->required();
    cmd_oracle->add_option("--cone", oracle_cone, "maximal cone index")->required();
    cmd_oracle->add_option("--radius", oracle_radius, "box radius (default: max jump + 2)");
    cmd_oracle->add_option("--output", output_mode, "json | text");

    // gen ---------------------------------------------------------------------
    auto* cmd_gen = app.add_subcommand("gen", "seeded test data");
    std::uint64_t gen_seed = 0;
    std::string gen_kind = "config";
    std::string gen_shape = "any";
    long long gen_n = 4;
    long long gen_rows = 4, gen_cols = 2, gen_max_jump = 2;
    FanOptions gen_fan{"p2", ""};
    cmd_gen->add_option("--seed", gen_seed, "PRNG seed")->required();
    cmd_gen->add_option("--kind", gen_kind, "config | bundle | presentation | matrix");
    cmd_gen->add_option("--shape", gen_shape, "any | stable | semistable | unstable");
    cmd_gen->add_option("--n", gen_n, "number of points (config)");
    cmd_gen->add_option("--rows", gen_rows, "rows (matrix)");
    cmd_gen->add_option("--cols", gen_cols, "columns (matrix)");
    cmd_gen->add_option("--max-jump", gen_max_jump, "maximal jump width");
    cmd_gen->add_option("--fan", gen_fan.spec, "fan for bundle/presentation kinds");
    cmd_gen->add_option("--blowup", gen_fan.blowups, "cone indices");

    app.require_subcommand(1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const bool text = output_mode == "text";
    if (output_mode != "json" && output_mode != "text") {
        throw validation_error("BadInput", "--output must be json or text");
    }

    if (*cmd_fan) {
        const Fan fan = fan_from_options(fan_opts);
        json irrelevant = json::array();
        for (const auto& gen : irrelevant_generators(fan)) {
            json e = json::array();
            for (long long v : gen) e.push_back(v);
            irrelevant.push_back(std::move(e));
        }
        json out = fan_to_json(fan);
        out["irrelevant"] = std::move(irrelevant);
        if (text) {
            for (std::size_t k = 0; k < fan.ray_count(); ++k) {
                std::printf("ray %zu: (%lld, %lld)\n", k, fan.ray(k).x, fan.ray(k).y);
            }
            std::printf("%zu maximal cones, irrelevant ideal with %zu generators\n",
                        fan.cone_count(), fan.cone_count());
        } else {
            emit_json(out);
        }
        return 0;
    }

    if (*cmd_bundle) {
        const json doc = read_json_file(bundle_path);
        if (!doc.is_object() || !doc.contains("fan")) {
            throw validation_error("BadInput", "bundle needs a \"fan\" field");
        }
        const Fan fan = fan_from_json(doc["fan"]);
        // Re-run the normalization to surface the applied twist.
        const BundleData normalized = bundle_from_json(doc);
        DivisorVector twist(fan.ray_count(), 0);
        if (doc.contains("filtrations")) {
            std::size_t k = 0;
            for (const json& e : doc["filtrations"]) {
                if (e.contains("i2")) twist[k] = -e["i2"].get<long long>();
                ++k;
            }
        }
        const Partition coarse = coarse_partition(normalized);
        const auto split = split_summands(normalized);
        json out{{"bundle", bundle_to_json(normalized)},
                 {"coarse_partition", partition_to_json(coarse)},
                 {"twist", jumps_to_json(twist)}};
        if (split) {
            out["split"] = json{{"divisor1", jumps_to_json(split->first)},
                                {"divisor2", jumps_to_json(split->second)}};
        } else {
            out["split"] = nullptr;
        }
        if (text) {
            std::printf("coarse partition: %s\n",
                        partition_to_json(coarse).dump().c_str());
            std::printf("splits: %s\n", split ? "yes" : "no");
        } else {
            emit_json(out);
        }
        return 0;
    }

    if (*cmd_resolve) {
        const BundleData b = bundle_from_json(read_json_file(resolve_bundle));
        const MonomialResolution res = build_resolution(b);
        if (text) {
            print_resolution_text(res);
        } else {
            emit_json(resolution_to_json(res, b.fan()));
        }
        return 0;
    }

    if (*cmd_check) {
        const json doc = read_json_file(check_path);
        if (!doc.is_object() || !doc.contains("fan")) {
            throw validation_error("BadInput", "presentation needs a \"fan\" field");
        }
        const Fan fan = fan_from_json(doc["fan"]);
        const MonomialMatrix mm = monomial_matrix_from_json(doc, fan);
        const LocalFreenessReport report = check_local_freeness(mm, fan);
        if (text) {
            const auto say = [&](const char* what, bool ok) {
                std::printf("%s: %s\n", what,
                            color(ok ? "ok" : "fails", ok ? "32" : "31").c_str());
            };
            if (report.cyclic_minors) say("cyclic minors", *report.cyclic_minors);
            say("fitting ideal", report.fitting);
            say("fixed point ranks", report.fixed_point_ranks);
            std::printf("locally free: %s\n", report.locally_free() ? "yes" : "no");
        } else {
            emit_json(local_freeness_to_json(report));
        }
        return 0;
    }

    if (*cmd_bidual) {
        const SheafPresentation p = presentation_from_json(read_json_file(bidual_path));
        emit_json(bundle_to_json(bidual(p)));
        return 0;
    }

    if (*cmd_sky) {
        const SheafPresentation p = presentation_from_json(read_json_file(sky_path));
        const SkyscraperReport report = skyscraper_support(p, sky_radius);
        if (text) {
            if (report.support.empty()) {
                std::printf("no skyscraper: the presentation is already reflexive\n");
            }
            for (const auto& [cone, len] : report.lengths) {
                std::printf("cone %zu: length %lld\n", cone, len);
            }
        } else {
            emit_json(skyscraper_to_json(report));
        }
        return 0;
    }

    if (*cmd_stab) {
        const json doc = read_json_file(stab_path);
        StabilityVerdict verdict;
        if (stab_mode == "config") {
            const PointConfig c = config_from_json(doc);
            if (c.ambient() > 2 && c.size() > 12) {
                throw validation_error("BadParameter",
                                       "configuration stability limited to 12 points");
            }
            verdict = config_stability(c);
        } else if (stab_mode == "grass-torus" || stab_mode == "grass-gl") {
            if (!doc.is_object() || !doc.contains("matrix")) {
                throw validation_error("BadInput", "grass modes need a \"matrix\" field");
            }
            const Mat a = mat_from_json(doc["matrix"]);
            if (a.rows() > 12) {
                throw validation_error("BadParameter",
                                       "Grassmannian stability limited to 12 rows");
            }
            verdict = grass_stability(a, stab_mode == "grass-torus"
                                             ? GrassMode::CoordinateTorus
                                             : GrassMode::FullGL);
        } else {
            throw validation_error("BadInput",
                                   "--mode must be config, grass-torus or grass-gl");
        }
        if (text) {
            print_verdict_text(verdict);
        } else {
            emit_json(verdict_to_json(verdict));
        }
        return 0;
    }

    if (*cmd_equiv) {
        const LabeledConfig x = labeled_from_file(equiv_paths[0]);
        const LabeledConfig y = labeled_from_file(equiv_paths[1]);
        const bool eq = p_equivalent(x, y);
        if (text) {
            std::printf("%s\n", eq ? "equivalent" : "not equivalent");
        } else {
            emit_json(json{{"equivalent", eq}});
        }
        return 0;
    }

    if (*cmd_moduli) {
        const BundleData b = bundle_from_json(read_json_file(moduli_path));
        const Partition coarse = coarse_partition(b);
        const LabeledConfig lc = labeled_config(b, coarse);
        if (coarse.size() == 4) {
            const ModuliPointS4 value = moduli_coordinate_s4(as_point_config(lc));
            if (text) {
                std::printf("moduli coordinate: %s\n", point_text(value).c_str());
            } else {
                emit_json(json{{"moduli", point_to_json(value)}});
            }
        } else {
            const StabilityVerdict verdict = config_stability(as_point_config(lc));
            json out{{"class", json{{"s", coarse.size()},
                                    {"verdict", verdict_to_json(verdict)}}}};
            if (text) {
                std::printf("s = %zu\n", coarse.size());
                print_verdict_text(verdict);
            } else {
                emit_json(out);
            }
        }
        return 0;
    }

    if (*cmd_classes) {
        SemistableClasses classes = [&]() {
            if (classes_fan.spec.empty()) {
                return semistable_classes(static_cast<std::size_t>(classes_s));
            }
            const Fan fan = fan_from_options(classes_fan);
            std::vector<std::vector<std::size_t>> parts;
            for (std::size_t r = 0; r < fan.ray_count(); ++r) parts.push_back({r});
            return semistable_classes(static_cast<std::size_t>(classes_s), fan,
                                      make_partition(parts));
        }();
        json splits = json::array();
        for (const auto& split : classes.splits) {
            json half = json::array();
            for (std::size_t i : split.half) half.push_back(i);
            json entry{{"half", std::move(half)}};
            entry["locally_free"] =
                split.locally_free ? json(*split.locally_free) : json(nullptr);
            splits.push_back(std::move(entry));
        }
        if (text) {
            std::printf("count: %lld\n", classes.count);
        } else {
            emit_json(json{{"count", classes.count}, {"splits", std::move(splits)}});
        }
        return 0;
    }

    if (*cmd_oracle) {
        const SheafPresentation p = presentation_from_json(read_json_file(oracle_path));
        if (oracle_cone < 0 ||
            static_cast<std::size_t>(oracle_cone) >= p.fan().cone_count()) {
            throw validation_error("BadConeIndex", "cone index out of range");
        }
        const long long radius =
            oracle_radius > 0 ? oracle_radius : default_box_radius(p);
        const std::size_t cone = static_cast<std::size_t>(oracle_cone);
        const GradedDimGrid grid = chart_graded_dims(p, cone, radius);
        const BundleData bd = bidual(p);
        json entries = json::array();
        bool equal = true;
        for (long long a = -radius; a <= radius; ++a) {
            for (long long b = -radius; b <= radius; ++b) {
                const Character m = grid.character_at(a, b);
                const int chart = grid.at(a, b);
                const int bidual_dim = sigma_family_dim(bd, cone, m);
                if (chart != bidual_dim) equal = false;
                entries.push_back(json{{"bidual", bidual_dim},
                                       {"chart", chart},
                                       {"m", json::array({m.m1, m.m2})},
                                       {"pairings", json::array({a, b})}});
            }
        }
        if (text) {
            std::printf("cone %zu, radius %lld: %s\n", cone, radius,
                        equal ? "chart dims equal the bidual" : "chart dims differ");
        } else {
            emit_json(json{{"cone", cone},
                           {"entries", std::move(entries)},
                           {"equal", equal},
                           {"radius", radius}});
        }
        return 0;
    }

    if (*cmd_gen) {
        Rng rng(gen_seed);
        if (gen_kind == "config") {
            ConfigShape shape = ConfigShape::Any;
            if (gen_shape == "stable") shape = ConfigShape::Stable;
            else if (gen_shape == "semistable") shape = ConfigShape::Semistable;
            else if (gen_shape == "unstable") shape = ConfigShape::Unstable;
            else if (gen_shape != "any") {
                throw validation_error("BadInput", "unknown --shape");
            }
            emit_json(config_to_json(
                random_config(rng, static_cast<std::size_t>(gen_n), shape)));
        } else if (gen_kind == "bundle") {
            const Fan fan = fan_from_options(gen_fan);
            emit_json(bundle_to_json(random_bundle(rng, fan, gen_max_jump, 0)));
        } else if (gen_kind == "presentation") {
            const Fan fan = fan_from_options(gen_fan);
            emit_json(presentation_to_json(random_presentation(rng, fan, gen_max_jump)));
        } else if (gen_kind == "matrix") {
            const Mat a = random_full_rank_matrix(rng, static_cast<std::size_t>(gen_rows),
                                                  static_cast<std::size_t>(gen_cols));
            emit_json(json{{"matrix", mat_to_json(a)}});
        } else {
            throw validation_error("BadInput", "unknown --kind");
        }
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    g_color = isatty(fileno(stdout)) != 0 && std::getenv("TORIX_NO_COLOR") == nullptr;
    CLI::App app{"equivariant rank-2 bundles on smooth complete toric surfaces"};
    app.name("torix");
    try {
        return dispatch(app, argc, argv);
    } catch (const validation_error& e) {
        emit_json(json{{"error", json{{"code", e.code()}, {"message", e.what()}}}});
        return 2;
    } catch (const std::exception& e) {
        emit_json(json{{"error", json{{"code", "Internal"}, {"message", e.what()}}}});
        return 1;
    }
}
