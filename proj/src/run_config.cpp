#include "fovc/run_config.hpp"

#include <fstream>

#include <json.hpp>

namespace fovc {
namespace cfg {

using nlohmann::json;

namespace {

json pipeline_json(const fov::FfcConfig& p) {
    const fc::FcConfig& f = p.fc;
    return json{
        {"roi_deg", p.roi_side_deg},
        {"metric", fov::metric_name(p.metric)},
        {"kl_epsilon", p.kl_epsilon},
        {"kl_direction",
         p.kl_direction == fov::KlDirection::FoveatedFromPlain ? "foveated_from_plain"
                                                               : "plain_from_foveated"},
        {"half_resolution", p.half_resolution},
        {"target_size_deg", p.target_size_deg},
        {"fc",
         {{"n_scales", f.n_scales},
          {"w_color", f.w_color},
          {"w_contrast", f.w_contrast},
          {"w_orient", f.w_orient},
          {"norm_color", f.norm_color},
          {"norm_contrast", f.norm_contrast},
          {"norm_orient", f.norm_orient},
          {"pool_sigma_deg", f.pool_sigma_deg},
          {"dog_center_sigma_px", f.dog_center_sigma_px},
          {"dog_surround_ratio", f.dog_surround_ratio},
          {"orient_sigma_px", f.orient_sigma_px},
          {"n_orientations", f.n_orientations},
          {"color_stat", f.color_stat == fc::ColorStat::TraceSqrt ? "trace_sqrt" : "cov_volume"}}},
        {"arch",
         {{"scale", p.arch.scale},
          {"e_r", p.arch.e_r},
          {"fovea", p.arch.fovea},
          {"e_0", p.arch.e_0},
          {"t_0", p.arch.t_0},
          {"n_theta_override", p.arch.n_theta_override},
          {"n_e_override", p.arch.n_e_override},
          {"theta_offset", p.arch.theta_offset}}},
    };
}

}  // namespace

std::string RunConfig::to_json_string() const {
    json j = pipeline_json(pipeline);
    j["deg_per_px"] = deg_per_px;
    j["model"] = models::model_name(model);
    j["edge"] = {{"high_frac", model_cfg.edge.high_frac}, {"low_frac", model_cfg.edge.low_frac}};
    j["subband"] = {{"n_scales", model_cfg.subband.n_scales},
                    {"n_orientations", model_cfg.subband.n_orientations},
                    {"chroma_weight", model_cfg.subband.chroma_weight},
                    {"sigma_px", model_cfg.subband.sigma_px},
                    {"histogram_bins", model_cfg.subband.histogram_bins}};
    j["sweep_roi_deg"] = sweep_roi_deg;
    j["seed"] = seed;
    j["bootstrap_B"] = bootstrap_B;
    // jobs deliberately excluded: thread count never changes output values.
    return j.dump();
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string RunConfig::hash() const {
    const std::uint64_t h = fnv1a64(to_json_string());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

namespace {

void require_known_keys(const json& obj, std::initializer_list<const char*> known,
                        const char* scope) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok)
            throw ValidationError(std::string("config: unknown key '") + key + "' in " + scope);
    }
}

}  // namespace

void RunConfig::apply_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("config file " + path + ": " + e.what());
    }
    require_known_keys(j,
                       {"deg_per_px", "roi_deg", "metric", "kl_epsilon", "kl_direction",
                        "half_resolution", "target_size_deg", "model", "seed", "bootstrap_B",
                        "sweep_roi_deg", "fc", "arch", "edge", "subband"},
                       "config root");

    auto num = [&](const json& obj, const char* key, double& out) {
        if (obj.contains(key)) out = obj.at(key).get<double>();
    };
    auto integer = [&](const json& obj, const char* key, int& out) {
        if (obj.contains(key)) out = obj.at(key).get<int>();
    };

    num(j, "deg_per_px", deg_per_px);
    num(j, "roi_deg", pipeline.roi_side_deg);
    if (j.contains("metric")) pipeline.metric = fov::metric_from_string(j.at("metric"));
    num(j, "kl_epsilon", pipeline.kl_epsilon);
    if (j.contains("kl_direction")) {
        const std::string d = j.at("kl_direction");
        if (d == "foveated_from_plain")
            pipeline.kl_direction = fov::KlDirection::FoveatedFromPlain;
        else if (d == "plain_from_foveated")
            pipeline.kl_direction = fov::KlDirection::PlainFromFoveated;
        else
            throw ValidationError("config: unknown kl_direction '" + d + "'");
    }
    if (j.contains("half_resolution")) pipeline.half_resolution = j.at("half_resolution").get<bool>();
    num(j, "target_size_deg", pipeline.target_size_deg);
    if (j.contains("model")) model = models::model_from_string(j.at("model"));
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    integer(j, "bootstrap_B", bootstrap_B);
    if (j.contains("sweep_roi_deg")) sweep_roi_deg = j.at("sweep_roi_deg").get<std::vector<double>>();

    if (j.contains("fc")) {
        const json& f = j.at("fc");
        require_known_keys(f,
                           {"n_scales", "w_color", "w_contrast", "w_orient", "norm_color",
                            "norm_contrast", "norm_orient", "pool_sigma_deg",
                            "dog_center_sigma_px", "dog_surround_ratio", "orient_sigma_px",
                            "n_orientations", "color_stat"},
                           "fc");
        fc::FcConfig& c = pipeline.fc;
        integer(f, "n_scales", c.n_scales);
        num(f, "w_color", c.w_color);
        num(f, "w_contrast", c.w_contrast);
        num(f, "w_orient", c.w_orient);
        num(f, "norm_color", c.norm_color);
        num(f, "norm_contrast", c.norm_contrast);
        num(f, "norm_orient", c.norm_orient);
        num(f, "pool_sigma_deg", c.pool_sigma_deg);
        num(f, "dog_center_sigma_px", c.dog_center_sigma_px);
        num(f, "dog_surround_ratio", c.dog_surround_ratio);
        num(f, "orient_sigma_px", c.orient_sigma_px);
        integer(f, "n_orientations", c.n_orientations);
        if (f.contains("color_stat")) {
            const std::string s = f.at("color_stat");
            if (s == "trace_sqrt")
                c.color_stat = fc::ColorStat::TraceSqrt;
            else if (s == "cov_volume")
                c.color_stat = fc::ColorStat::CovVolume;
            else
                throw ValidationError("config: unknown color_stat '" + s + "'");
        }
    }
    if (j.contains("arch")) {
        const json& a = j.at("arch");
        require_known_keys(a,
                           {"scale", "e_r", "fovea", "e_0", "t_0", "n_theta_override",
                            "n_e_override", "theta_offset"},
                           "arch");
        ArchParams& p = pipeline.arch;
        num(a, "scale", p.scale);
        num(a, "e_r", p.e_r);
        num(a, "fovea", p.fovea);
        num(a, "e_0", p.e_0);
        num(a, "t_0", p.t_0);
        integer(a, "n_theta_override", p.n_theta_override);
        integer(a, "n_e_override", p.n_e_override);
        num(a, "theta_offset", p.theta_offset);
    }
    if (j.contains("edge")) {
        require_known_keys(j.at("edge"), {"high_frac", "low_frac"}, "edge");
        num(j.at("edge"), "high_frac", model_cfg.edge.high_frac);
        num(j.at("edge"), "low_frac", model_cfg.edge.low_frac);
    }
    if (j.contains("subband")) {
        const json& s = j.at("subband");
        require_known_keys(
            s, {"n_scales", "n_orientations", "chroma_weight", "sigma_px", "histogram_bins"},
            "subband");
        integer(s, "n_scales", model_cfg.subband.n_scales);
        integer(s, "n_orientations", model_cfg.subband.n_orientations);
        num(s, "chroma_weight", model_cfg.subband.chroma_weight);
        num(s, "sigma_px", model_cfg.subband.sigma_px);
        integer(s, "histogram_bins", model_cfg.subband.histogram_bins);
    }
    // Keep the FC config inside model_cfg in lockstep with the pipeline's.
    model_cfg.fc = pipeline.fc;
}

}  // namespace cfg
}  // namespace fovc
