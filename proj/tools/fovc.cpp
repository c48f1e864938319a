/**
 * @file fovc.cpp
 * @brief Command-line front end: fc, arch, foveate, pifc, ffc, score, eval,
 *        sweep. Every run echoes the resolved config hash; artifacts are
 *        deterministic given (inputs, flags, seed).
 *
 * Exit codes: 0 ok, 1 I/O failure, 2 validation failure, 3 internal error.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fovc/alt_models.hpp"
#include "fovc/eval_stats.hpp"
#include "fovc/feature_congestion.hpp"
#include "fovc/field.hpp"
#include "fovc/foveation.hpp"
#include "fovc/image_io.hpp"
#include "fovc/peripheral_arch.hpp"
#include "fovc/pyramid.hpp"
#include "fovc/run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
    double deg_per_px = 0.044;
    std::string out_dir = ".";
    std::string config_path;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string format = "json";
};

struct PairFlag {
    double x = 0.0, y = 0.0;
    bool set = false;
};

void add_pair_option(CLI::App* cmd, const std::string& name, PairFlag& value,
                     const std::string& help) {
    cmd->add_option_function<std::string>(
           name,
           [&value, name](const std::string& s) {
               const auto comma = s.find(',');
               if (comma == std::string::npos)
                   throw CLI::ValidationError(name, "expected 'x,y'");
               try {
                   value.x = std::stod(s.substr(0, comma));
                   value.y = std::stod(s.substr(comma + 1));
               } catch (const std::exception&) {
                   throw CLI::ValidationError(name, "expected numeric 'x,y'");
               }
               value.set = true;
           },
           help)
        ->type_name("X,Y");
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--deg-per-px", flags.deg_per_px, "Degrees of visual angle per pixel")
        ->capture_default_str();
    cmd->add_option("--out", flags.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--seed", flags.seed, "RNG seed for statistical commands")
        ->capture_default_str();
    cmd->add_option("--jobs", flags.jobs, "Worker threads for batch stages")
        ->capture_default_str();
    cmd->add_option("--format", flags.format, "Primary stdout format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

/// defaults <- config file <- flags, in that order.
fovc::cfg::RunConfig resolve_config(const CommonFlags& flags, const CLI::App* cmd) {
    fovc::cfg::RunConfig rc;
    if (!flags.config_path.empty()) rc.apply_file(flags.config_path);
    if (cmd->count("--deg-per-px")) rc.deg_per_px = flags.deg_per_px;
    if (cmd->count("--seed")) rc.seed = flags.seed;
    if (cmd->count("--jobs")) rc.jobs = flags.jobs;
    if (!cmd->count("--deg-per-px") && flags.config_path.empty())
        rc.deg_per_px = flags.deg_per_px;  // built-in default
    return rc;
}

json config_echo(const fovc::cfg::RunConfig& rc) { return json::parse(rc.to_json_string()); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw fovc::IoError("cannot create " + path.string());
    out << text;
    if (!out) throw fovc::IoError("failed to write " + path.string());
}

void write_json_file(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw fovc::IoError("cannot create output directory " + p.string());
    return p;
}

std::string stem_of(const std::string& image_path) { return fs::path(image_path).stem().string(); }

json heatmap_sidecar(const fovc::io::HeatmapRange& range, const std::string& hash) {
    return json{{"min", range.min_value}, {"max", range.max_value}, {"config_hash", hash}};
}

json report_json(const fovc::stats::CorrelationReport& r) {
    return json{{"r_point", r.r_point}, {"r_mean", r.r_mean},
                {"r_std", r.r_std},     {"p_value", r.p_value},
                {"n", r.n},             {"df", r.df},
                {"bootstrap_B", r.bootstrap_B}};
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int run_fc(const std::string& image_path, const CommonFlags& flags, const CLI::App* cmd) {
    fovc::cfg::RunConfig rc = resolve_config(flags, cmd);
    const fs::path out = ensure_out_dir(flags.out_dir);
    const std::string hash = rc.hash();
    std::cout << "config_hash " << hash << "\n";

    const fovc::RasterImage img = fovc::io::read_png(image_path, rc.deg_per_px);
    const fovc::fc::FcResult res = fovc::fc::fc_map(img, rc.pipeline.fc);

    const std::string stem = stem_of(image_path);
    fovc::io::write_cmap((out / (stem + "_fc.cmap")).string(), res.map);
    const auto range = fovc::io::write_heatmap_png((out / (stem + "_fc.png")).string(), res.map);
    write_json_file(out / (stem + "_fc_heatmap.json"), heatmap_sidecar(range, hash));
    write_json_file(out / (stem + "_fc.json"), json{{"score", res.score},
                                                    {"deg_per_px", rc.deg_per_px},
                                                    {"config", config_echo(rc)},
                                                    {"config_hash", hash}});
    std::cout << "fc " << res.score << "\n";
    return 0;
}

int run_arch(const CommonFlags& flags, const CLI::App* cmd, int width, int height,
             const PairFlag& fix) {
    fovc::cfg::RunConfig rc = resolve_config(flags, cmd);
    const fs::path out = ensure_out_dir(flags.out_dir);
    const std::string hash = rc.hash();
    std::cout << "config_hash " << hash << "\n";

    const fovc::PeripheralArchitecture arch = fovc::build_architecture(rc.pipeline.arch);
    const double fx = fix.set ? fix.x : (width - 1) / 2.0;
    const double fy = fix.set ? fix.y : (height - 1) / 2.0;
    const fovc::RasterizedArch raster =
        fovc::rasterize(arch, width, height, fx, fy, rc.deg_per_px);
    fovc::io::write_label_png((out / "arch_labels.png").string(), raster);

    json regions = json::array();
    for (const fovc::PoolingRegion& r : arch.regions()) {
        regions.push_back(json{{"n_theta", r.n_theta},
                               {"n_e", r.n_e},
                               {"theta_center", r.theta_center},
                               {"theta_width", r.theta_width},
                               {"log_e_center", r.log_e_center},
                               {"log_e_width", r.log_e_width}});
    }
    const fovc::ArchParams& p = arch.params();
    write_json_file(out / "arch.json",
                    json{{"n_theta", p.n_theta()},
                         {"n_e", p.n_e()},
                         {"w_theta", p.w_theta()},
                         {"w_e", p.w_e()},
                         {"kept_bands", arch.kept_bands()},
                         {"region_count", arch.regions().size()},
                         {"regions", regions},
                         {"config", config_echo(rc)},
                         {"config_hash", hash}});
    std::cout << "arch n_theta " << p.n_theta() << " n_e " << p.n_e() << " regions "
              << arch.regions().size() << "\n";
    return 0;
}

struct FoveationFlags {
    PairFlag fix, target;
    double roi_deg = -1.0;  // <0 keeps the config value
    std::string metric;
    std::optional<bool> half_res;
    double target_size_deg = -1.0;
    bool maps = false;
};

void apply_foveation_flags(fovc::cfg::RunConfig& rc, const FoveationFlags& f) {
    if (f.roi_deg > 0) rc.pipeline.roi_side_deg = f.roi_deg;
    if (!f.metric.empty()) rc.pipeline.metric = fovc::fov::metric_from_string(f.metric);
    if (f.half_res.has_value()) rc.pipeline.half_resolution = *f.half_res;
    if (f.target_size_deg >= 0) rc.pipeline.target_size_deg = f.target_size_deg;
}

int run_foveate(const std::string& image_path, const CommonFlags& flags, const CLI::App* cmd,
                const FoveationFlags& ff, const std::string& model_name) {
    fovc::cfg::RunConfig rc = resolve_config(flags, cmd);
    apply_foveation_flags(rc, ff);
    if (!model_name.empty()) rc.model = fovc::models::model_from_string(model_name);
    if (!ff.fix.set) throw fovc::ValidationError("foveate: --fix x,y is required");
    const fs::path out = ensure_out_dir(flags.out_dir);
    const std::string hash = rc.hash();
    std::cout << "config_hash " << hash << "\n";

    fovc::RasterImage img = fovc::io::read_png(image_path, rc.deg_per_px);
    double sx = 1.0, sy = 1.0;
    if (rc.pipeline.half_resolution) {
        fovc::RasterImage half = fovc::half_resolution(img);
        sx = static_cast<double>(half.width) / img.width;
        sy = static_cast<double>(half.height) / img.height;
        img = std::move(half);
    }
    rc.model_cfg.fc = rc.pipeline.fc;
    const fovc::models::DenseResult dense = fovc::models::dense_map(rc.model, img, rc.model_cfg);
    const fovc::PeripheralArchitecture arch = fovc::build_architecture(rc.pipeline.arch);
    const fovc::RasterizedArch raster = fovc::rasterize(
        arch, dense.map.width, dense.map.height, ff.fix.x * sx, ff.fix.y * sy,
        dense.map.deg_per_px);
    const fovc::ScalarField pooled = fovc::fov::foveate_map(dense.map, raster);

    const std::string stem = stem_of(image_path);
    fovc::io::write_cmap((out / (stem + "_foveated.cmap")).string(), pooled);
    const auto range =
        fovc::io::write_heatmap_png((out / (stem + "_foveated.png")).string(), pooled);
    write_json_file(out / (stem + "_foveated_heatmap.json"), heatmap_sidecar(range, hash));
    write_json_file(out / (stem + "_foveated.json"),
                    json{{"model", fovc::models::model_name(rc.model)},
                         {"fix", {ff.fix.x, ff.fix.y}},
                         {"mean_plain", dense.map.mean()},
                         {"mean_foveated", pooled.mean()},
                         {"config", config_echo(rc)},
                         {"config_hash", hash}});
    std::cout << "foveated mean " << pooled.mean() << "\n";
    return 0;
}

int run_pifc_or_ffc(const std::string& image_path, const CommonFlags& flags, const CLI::App* cmd,
                    const FoveationFlags& ff, const std::string& model_name, bool emit_ffc) {
    fovc::cfg::RunConfig rc = resolve_config(flags, cmd);
    apply_foveation_flags(rc, ff);
    if (!model_name.empty()) rc.model = fovc::models::model_from_string(model_name);
    if (!ff.fix.set) throw fovc::ValidationError("--fix x,y is required");
    if (!ff.target.set) throw fovc::ValidationError("--target x,y is required");
    const fs::path out = ensure_out_dir(flags.out_dir);
    const std::string hash = rc.hash();
    std::cout << "config_hash " << hash << "\n";

    const fovc::RasterImage img = fovc::io::read_png(image_path, rc.deg_per_px);
    rc.model_cfg.fc = rc.pipeline.fc;

    fovc::fov::FfcArtifacts art;
    if (rc.model == fovc::models::ModelKind::FeatureCongestion) {
        art = fovc::fov::ffc_artifacts(img, ff.fix.x, ff.fix.y, ff.target.x, ff.target.y,
                                       rc.pipeline);
    } else {
        // Same pipeline with the alternate dense map.
        fovc::RasterImage operating =
            rc.pipeline.half_resolution ? fovc::half_resolution(img) : img;
        const double sx = static_cast<double>(operating.width) / img.width;
        const double sy = static_cast<double>(operating.height) / img.height;
        const fovc::models::DenseResult dense =
            fovc::models::dense_map(rc.model, operating, rc.model_cfg);
        const fovc::PeripheralArchitecture arch = fovc::build_architecture(rc.pipeline.arch);
        const double fx = ff.fix.x * sx, fy = ff.fix.y * sy;
        const double tx = ff.target.x * sx, ty = ff.target.y * sy;
        fovc::TargetMask mask = fovc::TargetMask::none();
        if (rc.pipeline.target_size_deg > 0.0)
            mask = fovc::TargetMask::centered(tx, ty, rc.pipeline.target_size_deg,
                                              dense.map.deg_per_px, dense.map.width,
                                              dense.map.height);
        const fovc::RasterizedArch raster = fovc::rasterize(
            arch, dense.map.width, dense.map.height, fx, fy, dense.map.deg_per_px);
        art.dense_map = dense.map;
        art.foveated = fovc::fov::foveate_map(dense.map, raster, mask);
        art.pifc = fovc::fov::pifc_from_pooled(dense.map, art.foveated,
                                               fovc::RoiSpec{tx, ty, rc.pipeline.roi_side_deg},
                                               mask, rc.pipeline.metric, rc.pipeline.kl_epsilon,
                                               rc.pipeline.kl_direction);
        art.score.fc = fovc::fc::masked_mean(dense.map, mask);
        art.score.pifc = art.pifc.coefficient;
        art.score.ffc = art.score.fc * art.score.pifc;
    }

    const std::string stem = stem_of(image_path);
    json j{{"pifc", art.score.pifc},
           {"metric", fovc::fov::metric_name(rc.pipeline.metric)},
           {"model", fovc::models::model_name(rc.model)},
           {"config", config_echo(rc)},
           {"config_hash", hash}};
    std::string label = "pifc";
    if (emit_ffc) {
        j["fc"] = art.score.fc;
        j["ffc"] = art.score.ffc;
        label = "ffc";
    }
    write_json_file(out / (stem + "_" + label + ".json"), j);

    const fovc::ScalarField diff = fovc::fov::pifc_map_export(art.pifc);
    fovc::io::write_cmap((out / (stem + "_pifc_diff.cmap")).string(), diff);
    const auto range =
        fovc::io::write_heatmap_png((out / (stem + "_pifc_diff.png")).string(), diff);
    write_json_file(out / (stem + "_pifc_diff_heatmap.json"), heatmap_sidecar(range, hash));
    if (ff.maps) {
        fovc::io::write_cmap((out / (stem + "_foveated.cmap")).string(), art.foveated);
        const auto r2 =
            fovc::io::write_heatmap_png((out / (stem + "_foveated.png")).string(), art.foveated);
        write_json_file(out / (stem + "_foveated_heatmap.json"), heatmap_sidecar(r2, hash));
    }
    if (emit_ffc)
        std::cout << "fc " << art.score.fc << " pifc " << art.score.pifc << " ffc "
                  << art.score.ffc << "\n";
    else
        std::cout << "pifc " << art.score.pifc << "\n";
    return 0;
}

int run_score(const std::string& image_path, const CommonFlags& flags, const CLI::App* cmd,
              const FoveationFlags& ff, const std::string& model_name, bool foveated) {
    if (foveated)
        return run_pifc_or_ffc(image_path, flags, cmd, ff, model_name, /*emit_ffc=*/true);

    fovc::cfg::RunConfig rc = resolve_config(flags, cmd);
    if (!model_name.empty()) rc.model = fovc::models::model_from_string(model_name);
    const fs::path out = ensure_out_dir(flags.out_dir);
    const std::string hash = rc.hash();
    std::cout << "config_hash " << hash << "\n";

    const fovc::RasterImage img = fovc::io::read_png(image_path, rc.deg_per_px);
    rc.model_cfg.fc = rc.pipeline.fc;
    double score = 0.0;
    switch (rc.model) {
        case fovc::models::ModelKind::FeatureCongestion:
            score = fovc::fc::fc_map(img, rc.pipeline.fc).score;
            break;
        case fovc::models::ModelKind::EdgeDensity:
            score = fovc::models::edge_density_score(img, rc.model_cfg.edge);
            break;
        case fovc::models::ModelKind::SubbandEnergy:
            score = fovc::models::subband_entropy_score(img, rc.model_cfg.subband);
            break;
    }
    write_json_file(out / (stem_of(image_path) + "_score.json"),
                    json{{"model", fovc::models::model_name(rc.model)},
                         {"score", score},
                         {"config", config_echo(rc)},
                         {"config_hash", hash}});
    std::cout << "score " << score << "\n";
    return 0;
}

fovc::stats::SweepOptions sweep_options(const fovc::cfg::RunConfig& rc,
                                        const std::string& image_dir) {
    fovc::stats::SweepOptions opt;
    opt.roi_sides_deg = rc.sweep_roi_deg;
    opt.model = rc.model;
    opt.model_cfg = rc.model_cfg;
    opt.model_cfg.fc = rc.pipeline.fc;
    opt.pipeline = rc.pipeline;
    opt.image_dir = image_dir;
    opt.bootstrap_B = rc.bootstrap_B;
    opt.seed = rc.seed;
    opt.jobs = rc.jobs;
    return opt;
}

fovc::stats::ImageLoader dir_loader(const std::string& dir, double deg_per_px) {
    return [dir, deg_per_px](const std::string& id) {
        const fs::path p = fs::path(dir) / (id + ".png");
        if (!fs::exists(p)) throw fovc::IoError("missing image for id '" + id + "': " + p.string());
        return fovc::io::read_png(p.string(), deg_per_px);
    };
}

int run_eval(const std::string& trials_path, const CommonFlags& flags, const CLI::App* cmd,
             const FoveationFlags& ff, const std::string& model_name,
             const std::string& image_dir) {
    fovc::cfg::RunConfig rc = resolve_config(flags, cmd);
    apply_foveation_flags(rc, ff);
    if (!model_name.empty()) rc.model = fovc::models::model_from_string(model_name);
    if (cmd->count("--bootstrap")) rc.bootstrap_B = static_cast<int>(cmd->get_option("--bootstrap")->as<int>());
    const fs::path out = ensure_out_dir(flags.out_dir);
    const std::string hash = rc.hash();
    std::cout << "config_hash " << hash << "\n";

    fovc::stats::LoadDiagnostics diag;
    const auto trials = fovc::stats::load_trials(trials_path, rc.deg_per_px, &diag);
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& r : diag.rejected) std::cerr << "rejected: " << r << "\n";

    fovc::stats::SweepOptions opt = sweep_options(rc, image_dir);
    opt.roi_sides_deg = {rc.pipeline.roi_side_deg};
    opt.metrics = {rc.pipeline.metric};
    const fovc::stats::SweepTable table =
        fovc::stats::sweep(trials, opt, dir_loader(image_dir, rc.deg_per_px));

    const json j{{"model", fovc::models::model_name(rc.model)},
                 {"metric", fovc::fov::metric_name(rc.pipeline.metric)},
                 {"roi_deg", rc.pipeline.roi_side_deg},
                 {"foveated", report_json(table.cells.at(0).report)},
                 {"baseline", report_json(table.baseline)},
                 {"n_trials", trials.size()},
                 {"n_warnings", diag.warnings.size()},
                 {"n_rejected", diag.rejected.size()},
                 {"config", config_echo(rc)},
                 {"config_hash", hash}};
    write_json_file(out / "eval.json", j);
    write_text(out / "eval.csv", fovc::stats::format_sweep_csv(table));
    if (flags.format == "csv")
        std::cout << fovc::stats::format_sweep_csv(table);
    else
        std::cout << j.dump(2) << "\n";
    return 0;
}

int run_sweep(const std::string& trials_path, const CommonFlags& flags, const CLI::App* cmd,
              const FoveationFlags& ff, const std::string& model_name,
              const std::string& image_dir) {
    fovc::cfg::RunConfig rc = resolve_config(flags, cmd);
    apply_foveation_flags(rc, ff);
    if (!model_name.empty()) rc.model = fovc::models::model_from_string(model_name);
    if (cmd->count("--bootstrap")) rc.bootstrap_B = static_cast<int>(cmd->get_option("--bootstrap")->as<int>());
    const fs::path out = ensure_out_dir(flags.out_dir);
    const std::string hash = rc.hash();
    std::cout << "config_hash " << hash << "\n";

    fovc::stats::LoadDiagnostics diag;
    const auto trials = fovc::stats::load_trials(trials_path, rc.deg_per_px, &diag);
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& r : diag.rejected) std::cerr << "rejected: " << r << "\n";

    const fovc::stats::SweepOptions opt = sweep_options(rc, image_dir);
    const fovc::stats::SweepTable table =
        fovc::stats::sweep(trials, opt, dir_loader(image_dir, rc.deg_per_px));

    json cells = json::array();
    for (const auto& cell : table.cells) {
        json c = report_json(cell.report);
        c["roi_deg"] = cell.roi_deg;
        c["metric"] = fovc::fov::metric_name(cell.metric);
        cells.push_back(c);
    }
    const json j{{"model", fovc::models::model_name(rc.model)},
                 {"cells", cells},
                 {"baseline", report_json(table.baseline)},
                 {"config", config_echo(rc)},
                 {"config_hash", hash}};
    write_json_file(out / "sweep.json", j);
    write_text(out / "sweep.csv", fovc::stats::format_sweep_csv(table));
    write_text(out / "sweep.txt", fovc::stats::format_sweep_text(table));
    if (flags.format == "csv")
        std::cout << fovc::stats::format_sweep_csv(table);
    else
        std::cout << fovc::stats::format_sweep_text(table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Foveated visual-clutter scoring"};
    app.require_subcommand(1);

    CommonFlags flags;
    FoveationFlags ff;
    std::string image_path, trials_path, image_dir, model_name;
    bool foveated = false;
    int arch_width = 512, arch_height = 380;
    int bootstrap_B = 10000;

    CLI::App* c_fc = app.add_subcommand("fc", "Dense Feature Congestion map and score");
    c_fc->add_option("image", image_path, "Input PNG")->required();
    add_common(c_fc, flags);

    CLI::App* c_arch = app.add_subcommand("arch", "Peripheral architecture JSON and label map");
    add_common(c_arch, flags);
    c_arch->add_option("--width", arch_width, "Label raster width")->capture_default_str();
    c_arch->add_option("--height", arch_height, "Label raster height")->capture_default_str();
    add_pair_option(c_arch, "--fix", ff.fix, "Fixation in pixels (default: center)");

    auto add_fov_flags = [&](CLI::App* cmd, bool with_target) {
        add_pair_option(cmd, "--fix", ff.fix, "Fixation in pixels");
        if (with_target) add_pair_option(cmd, "--target", ff.target, "Target in pixels");
        cmd->add_option("--roi-deg", ff.roi_deg, "ROI side in degrees");
        cmd->add_option("--metric", ff.metric, "Distance metric: l1, l2 or kl")
            ->check(CLI::IsMember({"l1", "l2", "kl"}));
        cmd->add_flag_callback("--half-res", [&] { ff.half_res = true; },
                               "Force the half-resolution operating point");
        cmd->add_flag_callback("--no-half-res", [&] { ff.half_res = false; },
                               "Process the image at its native resolution");
        cmd->add_option("--target-size-deg", ff.target_size_deg,
                        "Square target mask side in degrees (0 disables removal)");
    };

    CLI::App* c_fov = app.add_subcommand("foveate", "Max-pool a dense map through the architecture");
    c_fov->add_option("image", image_path, "Input PNG")->required();
    add_common(c_fov, flags);
    add_fov_flags(c_fov, false);
    c_fov->add_option("--model", model_name, "Dense model: fc, ed or se")
        ->check(CLI::IsMember({"fc", "ed", "se"}));

    CLI::App* c_pifc = app.add_subcommand("pifc", "Peripheral integration coefficient");
    c_pifc->add_option("image", image_path, "Input PNG")->required();
    add_common(c_pifc, flags);
    add_fov_flags(c_pifc, true);
    c_pifc->add_option("--model", model_name, "Dense model: fc, ed or se")
        ->check(CLI::IsMember({"fc", "ed", "se"}));
    c_pifc->add_flag("--maps", ff.maps, "Also write the foveated map artifacts");

    CLI::App* c_ffc = app.add_subcommand("ffc", "Foveated Feature Congestion score");
    c_ffc->add_option("image", image_path, "Input PNG")->required();
    add_common(c_ffc, flags);
    add_fov_flags(c_ffc, true);
    c_ffc->add_flag("--maps", ff.maps, "Also write the foveated map artifacts");

    CLI::App* c_score = app.add_subcommand("score", "Model score, plain or foveated");
    c_score->add_option("image", image_path, "Input PNG")->required();
    add_common(c_score, flags);
    c_score->add_option("--model", model_name, "Model: fc, ed or se")
        ->check(CLI::IsMember({"fc", "ed", "se"}));
    c_score->add_flag("--foveated", foveated, "Run the foveated pipeline");
    add_fov_flags(c_score, true);
    c_score->add_flag("--maps", ff.maps, "Also write the foveated map artifacts");

    CLI::App* c_eval = app.add_subcommand("eval", "Score-vs-hit-rate correlation for one cell");
    c_eval->add_option("trials", trials_path, "Trials CSV")->required();
    add_common(c_eval, flags);
    c_eval->add_option("--images", image_dir, "Directory with <image_id>.png")->required();
    add_fov_flags(c_eval, false);
    c_eval->add_option("--model", model_name, "Model: fc, ed or se")
        ->check(CLI::IsMember({"fc", "ed", "se"}));
    c_eval->add_option("--bootstrap", bootstrap_B, "Bootstrap resamples")->capture_default_str();

    CLI::App* c_sweep = app.add_subcommand("sweep", "ROI x metric correlation sweep");
    c_sweep->add_option("trials", trials_path, "Trials CSV")->required();
    add_common(c_sweep, flags);
    c_sweep->add_option("--images", image_dir, "Directory with <image_id>.png")->required();
    add_fov_flags(c_sweep, false);
    c_sweep->add_option("--model", model_name, "Model: fc, ed or se")
        ->check(CLI::IsMember({"fc", "ed", "se"}));
    c_sweep->add_option("--bootstrap", bootstrap_B, "Bootstrap resamples")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // bad flags are validation failures
    }

    try {
        if (c_fc->parsed()) return run_fc(image_path, flags, c_fc);
        if (c_arch->parsed()) return run_arch(flags, c_arch, arch_width, arch_height, ff.fix);
        if (c_fov->parsed()) return run_foveate(image_path, flags, c_fov, ff, model_name);
        if (c_pifc->parsed())
            return run_pifc_or_ffc(image_path, flags, c_pifc, ff, model_name, false);
        if (c_ffc->parsed()) return run_pifc_or_ffc(image_path, flags, c_ffc, ff, "fc", true);
        if (c_score->parsed()) return run_score(image_path, flags, c_score, ff, model_name, foveated);
        if (c_eval->parsed()) return run_eval(trials_path, flags, c_eval, ff, model_name, image_dir);
        if (c_sweep->parsed())
            return run_sweep(trials_path, flags, c_sweep, ff, model_name, image_dir);
    } catch (const fovc::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fovc::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const fovc::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
