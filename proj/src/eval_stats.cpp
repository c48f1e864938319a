#include "fovc/eval_stats.hpp"

#include "fovc/pyramid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace fovc {
namespace stats {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, int line_no, const char* field) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw IoError("trials CSV line " + std::to_string(line_no) + ": field '" + field +
                      "' is not a number: '" + s + "'");
    }
}

}  // namespace

std::vector<TrialRecord> load_trials(const std::string& path, double deg_per_px,
                                     LoadDiagnostics* diagnostics) {
    if (!(deg_per_px > 0.0)) throw ValidationError("load_trials: deg_per_px must be positive");
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trials CSV: " + path);

    std::string line;
    if (!std::getline(in, line)) throw IoError("trials CSV is empty: " + path);
    const std::string expected = "image_id,fix_x,fix_y,tgt_x,tgt_y,ecc_deg,hit_rate";
    {
        std::string header = line;
        header.erase(std::remove(header.begin(), header.end(), '\r'), header.end());
        header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
        if (header != expected)
            throw IoError("trials CSV line 1: expected header '" + expected + "'");
    }

    std::vector<TrialRecord> records;
    LoadDiagnostics local;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 7)
            throw IoError("trials CSV line " + std::to_string(line_no) + ": expected 7 fields, got " +
                          std::to_string(fields.size()));
        TrialRecord rec;
        rec.image_id = fields[0];
        rec.fix_x = parse_double(fields[1], line_no, "fix_x");
        rec.fix_y = parse_double(fields[2], line_no, "fix_y");
        rec.tgt_x = parse_double(fields[3], line_no, "tgt_x");
        rec.tgt_y = parse_double(fields[4], line_no, "tgt_y");
        rec.ecc_deg = parse_double(fields[5], line_no, "ecc_deg");
        rec.hit_rate = parse_double(fields[6], line_no, "hit_rate");

        if (!(rec.hit_rate >= 0.0 && rec.hit_rate <= 1.0)) {
            local.rejected.push_back("line " + std::to_string(line_no) +
                                     ": hit_rate outside [0,1]: " + fields[6]);
            continue;
        }
        if (rec.ecc_deg < 0.0) {
            local.rejected.push_back("line " + std::to_string(line_no) + ": negative eccentricity");
            continue;
        }
        const double geo_ecc =
            std::hypot(rec.fix_x - rec.tgt_x, rec.fix_y - rec.tgt_y) * deg_per_px;
        if (std::fabs(geo_ecc - rec.ecc_deg) > 0.5) {
            std::ostringstream os;
            os << "line " << line_no << ": stated eccentricity " << rec.ecc_deg
               << " deg differs from fixation-target geometry (" << geo_ecc << " deg)";
            local.warnings.push_back(os.str());
        }
        records.push_back(std::move(rec));
    }
    if (diagnostics) *diagnostics = std::move(local);
    return records;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("pearson_r: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw ValidationError("pearson_r: need at least 3 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw ValidationError("pearson_r: constant input");
    return sxy / std::sqrt(sxx * syy);
}

CorrelationReport bootstrap_correlation(std::span<const double> x, std::span<const double> y,
                                        int B, std::uint64_t seed) {
    if (x.size() != y.size()) throw ValidationError("bootstrap_correlation: length mismatch");
    const std::size_t n = x.size();
    if (n < 5) throw ValidationError("bootstrap_correlation: need at least 5 points");
    if (B < 1) throw ValidationError("bootstrap_correlation: B must be positive");

    CorrelationReport rep;
    rep.n = static_cast<int>(n);
    rep.df = static_cast<int>(n) - 2;
    rep.bootstrap_B = B;
    rep.r_point = pearson_r(x, y);

    Rng rng(seed);
    std::vector<double> rx(n), ry(n);
    double sum = 0.0, sum2 = 0.0;
    for (int b = 0; b < B; ++b) {
        // Degenerate resamples (constant in either variable) are redrawn;
        // determinism is preserved because redraws consume the same stream.
        double r = 0.0;
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = rng.index(n);
                rx[i] = x[j];
                ry[i] = y[j];
            }
            try {
                r = pearson_r(rx, ry);
                break;
            } catch (const ValidationError&) {
                continue;
            }
        }
        sum += r;
        sum2 += r * r;
    }
    rep.r_mean = sum / B;
    rep.r_std = std::sqrt(std::max(0.0, sum2 / B - rep.r_mean * rep.r_mean));

    // One-sided permutation test against the null of no (negative) association.
    std::vector<double> perm(y.begin(), y.end());
    int at_most = 0;
    for (int b = 0; b < B; ++b) {
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.index(i + 1)]);
        double r;
        try {
            r = pearson_r(x, perm);
        } catch (const ValidationError&) {
            r = 0.0;
        }
        if (r <= rep.r_point) ++at_most;
    }
    rep.p_value = (1.0 + at_most) / (B + 1.0);
    return rep;
}

namespace {

struct TrialScores {
    // cells[c][t]: score of trial t in cell c; baseline[t]: plain score.
    std::vector<std::vector<double>> cells;
    std::vector<double> baseline;
};

TrialScores score_trials(const std::vector<TrialRecord>& trials, const SweepOptions& opt,
                         const ImageLoader& loader) {
    const std::size_t n_cells = opt.metrics.size() * opt.roi_sides_deg.size();
    TrialScores out;
    out.cells.assign(n_cells, std::vector<double>(trials.size(), 0.0));
    out.baseline.assign(trials.size(), 0.0);

    // Dense maps are pure per image; compute each once.
    std::vector<std::string> ids;
    for (const auto& t : trials) ids.push_back(t.image_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    struct ImageData {
        ScalarField map;
        double sx = 1.0, sy = 1.0;
    };
    std::map<std::string, ImageData> images;
    for (const auto& id : ids) images.emplace(id, ImageData{});

    auto prepare_image = [&](const std::string& id) {
        const RasterImage raw = loader(id);
        RasterImage operating = opt.pipeline.half_resolution ? fovc::half_resolution(raw) : raw;
        ImageData data;
        data.sx = static_cast<double>(operating.width) / raw.width;
        data.sy = static_cast<double>(operating.height) / raw.height;
        data.map = models::dense_map(opt.model, operating, opt.model_cfg).map;
        images[id] = std::move(data);
    };
    if (opt.jobs > 1 && ids.size() > 1) {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> cursor{0};
        const int jobs = std::min<int>(opt.jobs, static_cast<int>(ids.size()));
        for (int j = 0; j < jobs; ++j) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= ids.size()) return;
                    prepare_image(ids[i]);
                }
            });
        }
        for (auto& t : pool) t.join();
    } else {
        for (const auto& id : ids) prepare_image(id);
    }

    const PeripheralArchitecture arch = build_architecture(opt.pipeline.arch);

    auto score_trial = [&](std::size_t t) {
        const TrialRecord& trial = trials[t];
        const ImageData& data = images.at(trial.image_id);
        const ScalarField& map = data.map;
        const double fx = trial.fix_x * data.sx, fy = trial.fix_y * data.sy;
        const double tx = trial.tgt_x * data.sx, ty = trial.tgt_y * data.sy;

        TargetMask mask = TargetMask::none();
        if (opt.pipeline.target_size_deg > 0.0)
            mask = TargetMask::centered(tx, ty, opt.pipeline.target_size_deg, map.deg_per_px,
                                        map.width, map.height);
        const double plain = fc::masked_mean(map, mask);
        out.baseline[t] = plain;

        // One rasterization + foveation serves every (roi, metric) cell.
        const RasterizedArch raster = rasterize(arch, map.width, map.height, fx, fy,
                                                map.deg_per_px);
        const ScalarField pooled = fov::foveate_map(map, raster, mask);
        std::size_t c = 0;
        for (const fov::Metric metric : opt.metrics) {
            for (const double roi_deg : opt.roi_sides_deg) {
                RoiSpec roi{tx, ty, roi_deg};
                const fov::PifcResult p =
                    fov::pifc_from_pooled(map, pooled, roi, mask, metric,
                                          opt.pipeline.kl_epsilon, opt.pipeline.kl_direction);
                out.cells[c][t] = plain * p.coefficient;
                ++c;
            }
        }
    };
    if (opt.jobs > 1 && trials.size() > 1) {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> cursor{0};
        const int jobs = std::min<int>(opt.jobs, static_cast<int>(trials.size()));
        for (int j = 0; j < jobs; ++j) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= trials.size()) return;
                    score_trial(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t t = 0; t < trials.size(); ++t) score_trial(t);
    }
    return out;
}

}  // namespace

SweepTable sweep(const std::vector<TrialRecord>& trials, const SweepOptions& options,
                 const ImageLoader& loader) {
    if (trials.empty()) throw ValidationError("sweep: no trials");
    const TrialScores scores = score_trials(trials, options, loader);

    std::vector<double> hits;
    hits.reserve(trials.size());
    for (const auto& t : trials) hits.push_back(t.hit_rate);

    SweepTable table;
    table.roi_sides_deg = options.roi_sides_deg;
    table.metrics = options.metrics;
    table.model = options.model;
    std::size_t c = 0;
    for (const fov::Metric metric : options.metrics) {
        for (const double roi_deg : options.roi_sides_deg) {
            SweepCell cell;
            cell.roi_deg = roi_deg;
            cell.metric = metric;
            cell.report =
                bootstrap_correlation(scores.cells[c], hits, options.bootstrap_B, options.seed);
            table.cells.push_back(std::move(cell));
            ++c;
        }
    }
    table.baseline =
        bootstrap_correlation(scores.baseline, hits, options.bootstrap_B, options.seed);
    return table;
}

std::string format_sweep_text(const SweepTable& table) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "Foveated " << models::model_name(table.model)
       << " vs hit rate correlation (r_mean +- r_std)\n";
    os << "Distance      ";
    for (double roi : table.roi_sides_deg) {
        std::ostringstream h;
        h.setf(std::ios::fixed);
        h.precision(0);
        h << roi << " deg";
        os << " | " << h.str();
        for (std::size_t pad = h.str().size(); pad < 14; ++pad) os << ' ';
    }
    os << "\n";
    std::size_t c = 0;
    for (const fov::Metric metric : table.metrics) {
        std::string name;
        switch (metric) {
            case fov::Metric::L1: name = "L1-norm"; break;
            case fov::Metric::L2: name = "L2-norm"; break;
            case fov::Metric::KL: name = "KL-divergence"; break;
        }
        os << name;
        for (std::size_t pad = name.size(); pad < 14; ++pad) os << ' ';
        for (std::size_t i = 0; i < table.roi_sides_deg.size(); ++i) {
            const CorrelationReport& r = table.cells[c].report;
            std::ostringstream v;
            v.setf(std::ios::fixed);
            v.precision(2);
            v << r.r_mean << " +- " << r.r_std;
            os << " | " << v.str();
            for (std::size_t pad = v.str().size(); pad < 14; ++pad) os << ' ';
            ++c;
        }
        os << "\n";
    }
    os << "non-foveated baseline: " << table.baseline.r_mean << " +- " << table.baseline.r_std
       << " (p=" << table.baseline.p_value << ")\n";
    return os.str();
}

std::string format_sweep_csv(const SweepTable& table) {
    std::ostringstream os;
    os.precision(17);
    os << "roi_deg,metric,r_mean,r_std,p_value,n,df,bootstrap_B\n";
    for (const SweepCell& cell : table.cells) {
        os << cell.roi_deg << ',' << fov::metric_name(cell.metric) << ',' << cell.report.r_mean
           << ',' << cell.report.r_std << ',' << cell.report.p_value << ',' << cell.report.n
           << ',' << cell.report.df << ',' << cell.report.bootstrap_B << "\n";
    }
    os << "baseline,none," << table.baseline.r_mean << ',' << table.baseline.r_std << ','
       << table.baseline.p_value << ',' << table.baseline.n << ',' << table.baseline.df << ','
       << table.baseline.bootstrap_B << "\n";
    return os.str();
}

}  // namespace stats
}  // namespace fovc
