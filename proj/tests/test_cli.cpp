#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "fovc/image_io.hpp"
#include "support/fixtures.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace fovc;

namespace {

const std::string kCli = FOVC_CLI_PATH;

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "fovc_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args, std::string* out_text = nullptr) {
    const fs::path log = work_dir() / "last_stdout.txt";
    const std::string cmd = kCli + " " + args + " > " + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (out_text) {
        std::ifstream in(log);
        out_text->assign((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    }
    return WEXITSTATUS(rc);
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    json j;
    in >> j;
    return j;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

fs::path blank_png() {
    static fs::path p = [] {
        const fs::path path = work_dir() / "blank.png";
        io::write_png(path.string(), testing::make_constant_image(128, 96, 0.044, 0.5));
        return path;
    }();
    return p;
}

fs::path textured_png() {
    static fs::path p = [] {
        const fs::path path = work_dir() / "textured.png";
        io::write_png(path.string(), testing::make_fixture_image(7, 256, 192, 0.044));
        return path;
    }();
    return p;
}

}  // namespace

TEST_CASE("fc: blank image scores ~0 and echoes defaults") {
    const fs::path out = work_dir() / "fc_blank";
    std::string text;
    const int rc = run("fc " + blank_png().string() + " --out " + out.string(), &text);
    CHECK(rc == 0);
    CHECK(text.find("config_hash") != std::string::npos);
    const json j = read_json(out / "blank_fc.json");
    CHECK(j.at("score").get<double>() < 1e-6);
    // The paper's operating point is the built-in default.
    CHECK(j.at("deg_per_px").get<double>() == doctest::Approx(0.044));
    CHECK(j.contains("config_hash"));
    CHECK(j.at("config").at("fc").contains("w_color"));
}

TEST_CASE("fc: byte-identical CMAP across runs") {
    const fs::path out1 = work_dir() / "fc_det1";
    const fs::path out2 = work_dir() / "fc_det2";
    REQUIRE(run("fc " + textured_png().string() + " --out " + out1.string()) == 0);
    REQUIRE(run("fc " + textured_png().string() + " --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "textured_fc.cmap") == slurp(out2 / "textured_fc.cmap"));
    CHECK(slurp(out1 / "textured_fc.png") == slurp(out2 / "textured_fc.png"));
}

TEST_CASE("arch: default geometry in JSON") {
    const fs::path out = work_dir() / "arch";
    REQUIRE(run("arch --out " + out.string()) == 0);
    const json j = read_json(out / "arch.json");
    CHECK(j.at("n_theta") == 25);
    CHECK(j.at("n_e") == 18);
    CHECK(j.at("regions").size() == j.at("region_count").get<std::size_t>());
    CHECK(j.at("region_count").get<int>() <= 25 * 18);
    // Every region id names its angular and eccentricity window.
    const auto& first = j.at("regions").at(0);
    CHECK(first.contains("theta_center"));
    CHECK(first.contains("log_e_center"));
    CHECK(fs::exists(out / "arch_labels.png"));
}

TEST_CASE("ffc: target at fixation gives zero, JSON carries the triplet") {
    const fs::path out = work_dir() / "ffc_zero";
    std::string text;
    const int rc = run("ffc " + textured_png().string() +
                           " --fix 128,96 --target 128,96 --roi-deg 2 --out " + out.string(),
                       &text);
    CHECK(rc == 0);
    const json j = read_json(out / "textured_ffc.json");
    CHECK(j.at("ffc").get<double>() == 0.0);
    CHECK(j.at("pifc").get<double>() == 0.0);
    CHECK(j.at("metric") == "l1");
    CHECK(j.at("fc").get<double>() > 0.0);
    CHECK(j.contains("config_hash"));
}

TEST_CASE("ffc: eccentric fixation produces a positive score and maps") {
    const fs::path out = work_dir() / "ffc_pos";
    const int rc = run("ffc " + textured_png().string() +
                       " --fix 30,96 --target 200,96 --maps --out " + out.string());
    CHECK(rc == 0);
    const json j = read_json(out / "textured_ffc.json");
    CHECK(j.at("ffc").get<double>() > 0.0);
    CHECK(j.at("ffc").get<double>() ==
          doctest::Approx(j.at("fc").get<double>() * j.at("pifc").get<double>()));
    const ScalarField fov = io::read_cmap((out / "textured_foveated.cmap").string());
    CHECK(fov.width > 0);
    const ScalarField diff = io::read_cmap((out / "textured_pifc_diff.cmap").string());
    for (double v : diff.values) CHECK(v >= 0.0);
}

TEST_CASE("score: plain and foveated schemas") {
    const fs::path out = work_dir() / "score";
    REQUIRE(run("score " + textured_png().string() + " --model ed --out " + out.string()) == 0);
    json j = read_json(out / "textured_score.json");
    CHECK(j.at("model") == "ed");
    CHECK(j.at("score").get<double>() > 0.0);
    CHECK(j.at("score").get<double>() <= 1.0);

    REQUIRE(run("score " + textured_png().string() +
                " --model se --foveated --fix 30,96 --target 200,96 --out " + out.string()) == 0);
    j = read_json(out / "textured_ffc.json");
    CHECK(j.at("model") == "se");
    CHECK(j.at("ffc").get<double>() > 0.0);
}

TEST_CASE("exit codes: 1 for IO, 2 for validation") {
    CHECK(run("fc /nonexistent/image.png") == 1);
    CHECK(run("ffc " + textured_png().string() + " --fix 10,10") == 2);  // missing --target
    CHECK(run("ffc " + textured_png().string() +
              " --fix 9999,10 --target 10,10") == 2);  // fixation out of bounds
    CHECK(run("fc " + textured_png().string() + " --deg-per-px oops") == 2);
    CHECK(run("score " + textured_png().string() + " --model bogus") == 2);
}

TEST_CASE("sweep: csv has 5x3 cells plus baseline, seed-stable") {
    const fs::path img_dir = work_dir() / "sweep_imgs";
    const auto ids = testing::write_fixture_set(img_dir.string(), 3);
    REQUIRE(ids.size() == 3);
    REQUIRE(fs::exists(img_dir / "fixture_00.png"));
    const fs::path trials = work_dir() / "trials.csv";
    {
        std::ofstream out(trials);
        out << "image_id,fix_x,fix_y,tgt_x,tgt_y,ecc_deg,hit_rate\n";
        for (int i = 0; i < 9; ++i) {
            const double ecc = (i % 3) ? ((i % 3 == 1) ? 4.0 : 6.0) : 1.0;
            char line[160];
            std::snprintf(line, sizeof line, "fixture_%02d,%g,96,60,96,%g,%g\n", i % 3,
                          60 + ecc / 0.044, ecc, 0.9 - 0.07 * i);
            out << line;
        }
    }
    const fs::path out1 = work_dir() / "sweep1";
    const fs::path out2 = work_dir() / "sweep2";
    const std::string base = "sweep " + trials.string() + " --images " + img_dir.string() +
                             " --seed 11 --bootstrap 200 --out ";
    REQUIRE(run(base + out1.string()) == 0);
    REQUIRE(run(base + out2.string()) == 0);
    const std::string csv = slurp(out1 / "sweep.csv");
    // Header + 15 cells + baseline row.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
    CHECK(csv == slurp(out2 / "sweep.csv"));
    CHECK(slurp(out1 / "sweep.json") == slurp(out2 / "sweep.json"));
    const json j = read_json(out1 / "sweep.json");
    CHECK(j.at("cells").size() == 15);
    CHECK(j.at("baseline").contains("r_mean"));
}

TEST_CASE("config precedence: defaults < file < flags") {
    const fs::path cfg_file = work_dir() / "run.json";
    std::ofstream(cfg_file) << R"({"roi_deg": 4.0, "metric": "l2", "deg_per_px": 0.088})";

    // File overrides defaults.
    const fs::path out1 = work_dir() / "cfg1";
    REQUIRE(run("ffc " + textured_png().string() + " --fix 30,96 --target 200,96 --config " +
                cfg_file.string() + " --out " + out1.string()) == 0);
    json j = read_json(out1 / "textured_ffc.json");
    CHECK(j.at("config").at("roi_deg").get<double>() == 4.0);
    CHECK(j.at("metric") == "l2");
    CHECK(j.at("config").at("deg_per_px").get<double>() == 0.088);

    // Flags override the file.
    const fs::path out2 = work_dir() / "cfg2";
    REQUIRE(run("ffc " + textured_png().string() + " --fix 30,96 --target 200,96 --config " +
                cfg_file.string() + " --roi-deg 8 --metric kl --deg-per-px 0.044 --out " +
                out2.string()) == 0);
    j = read_json(out2 / "textured_ffc.json");
    CHECK(j.at("config").at("roi_deg").get<double>() == 8.0);
    CHECK(j.at("metric") == "kl");
    CHECK(j.at("config").at("deg_per_px").get<double>() == 0.044);
    // Different resolved configs hash differently.
    CHECK(read_json(out1 / "textured_ffc.json").at("config_hash") != j.at("config_hash"));

    // Misspelled keys are validation failures, not silent no-ops.
    const fs::path bad = work_dir() / "bad.json";
    std::ofstream(bad) << R"({"roi_degrees": 4.0})";
    CHECK(run("ffc " + textured_png().string() + " --fix 30,96 --target 200,96 --config " +
              bad.string()) == 2);
}

TEST_CASE("eval: single cell report with diagnostics on stderr") {
    const fs::path img_dir = work_dir() / "sweep_imgs";  // reuse images
    const fs::path trials = work_dir() / "trials_warn.csv";
    {
        std::ofstream out(trials);
        out << "image_id,fix_x,fix_y,tgt_x,tgt_y,ecc_deg,hit_rate\n";
        for (int i = 0; i < 6; ++i) {
            const double ecc = (i % 2) ? 4.0 : 1.0;
            char line[160];
            std::snprintf(line, sizeof line, "fixture_%02d,%g,96,60,96,%g,%g\n", i % 3,
                          60 + ecc / 0.044, ecc, 0.85 - 0.1 * i);
            out << line;
        }
        // One row with a 2-degree eccentricity mismatch: warned, kept.
        out << "fixture_00,151,96,60,96,6.0,0.5\n";
    }
    const fs::path out = work_dir() / "eval";
    std::string text;
    const int rc = run("eval " + trials.string() + " --images " + img_dir.string() +
                           " --seed 3 --bootstrap 200 --out " + out.string(),
                       &text);
    CHECK(rc == 0);
    CHECK(text.find("warning") != std::string::npos);
    const json j = read_json(out / "eval.json");
    CHECK(j.at("n_trials") == 7);
    CHECK(j.at("n_warnings") == 1);
    CHECK(j.at("foveated").contains("r_mean"));
    CHECK(j.at("baseline").contains("r_mean"));
}
