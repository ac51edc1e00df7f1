#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <sys/wait.h>

// End-to-end checks through the actual binary. The ctest harness provides
// FGT_CLI (binary path) and FGT_PAPER_JSON (bundled scenario).

namespace {

namespace fs = std::filesystem;

std::string cli() {
  const char* path = std::getenv("FGT_CLI");
  REQUIRE_MESSAGE(path != nullptr, "FGT_CLI must point at the fgt binary");
  return path;
}

int run(const std::string& args) {
  const std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const fs::path& path) {
  return nlohmann::json::parse(slurp(path));
}

}  // namespace

TEST_CASE("sweep produces the full output set") {
  const auto dir = fresh_dir("fgt_cli_sweep");
  CHECK(run("sweep --seed 11 --out " + dir.string()) == 0);
  for (const char* name :
       {"dataset.csv", "dataset_meta.json", "report.json", "calibration_report.json",
        "calibration_points.csv", "plot_pitch_torque.csv", "plot_roll_torque.csv",
        "plot_planar_residual_pitch.csv", "plot_planar_residual_roll.csv",
        "plot_planar_residual_thrust.csv", "plot_thrust_deviation.csv"})
    CHECK_MESSAGE(fs::exists(dir / name), name);

  const auto report = load_json(dir / "report.json");
  CHECK(report.at("pitch_fit").at("r_squared").get<double>() > 0.9);
  CHECK(report.at("metadata").contains("config_hash"));
  CHECK(report.at("metadata").at("seed").get<std::uint64_t>() == 11);
  CHECK(report.at("trim_results").size() == 1);
}

TEST_CASE("identical seeds give byte-identical datasets") {
  const auto dir1 = fresh_dir("fgt_cli_det1");
  const auto dir2 = fresh_dir("fgt_cli_det2");
  CHECK(run("sweep --seed 7 --out " + dir1.string()) == 0);
  CHECK(run("sweep --seed 7 --out " + dir2.string()) == 0);
  CHECK(slurp(dir1 / "dataset.csv") == slurp(dir2 / "dataset.csv"));
  CHECK(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"));

  // Re-running in place overwrites with identical bytes.
  const auto before = slurp(dir1 / "dataset.csv");
  CHECK(run("sweep --seed 7 --out " + dir1.string()) == 0);
  CHECK(slurp(dir1 / "dataset.csv") == before);
}

TEST_CASE("noise-free override reports perfect regressions") {
  const auto dir = fresh_dir("fgt_cli_nonoise");
  CHECK(run("sweep --no-noise --out " + dir.string()) == 0);
  // The residual pendulum nonlinearity at the largest deflections leaves a
  // relative scatter around 1e-4, so R^2 sits within 1e-5 of one.
  const auto report = load_json(dir / "report.json");
  CHECK(report.at("pitch_fit").at("r_squared").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-5));
  CHECK(report.at("roll_fit").at("r_squared").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-5));

  const auto calibration = load_json(dir / "calibration_report.json");
  CHECK(calibration.at("roll").at("r_squared").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("coupling override fires the residual cross-correlation") {
  const auto dir = fresh_dir("fgt_cli_coupling");
  CHECK(run("sweep --coupling 0.1 --seed 3 --out " + dir.string()) == 0);
  const auto report = load_json(dir / "report.json");
  CHECK(std::abs(report.at("cross_correlation_residual")
                     .at("pitch_cmd_vs_roll_torque")
                     .get<double>()) > 0.3);
  CHECK(std::abs(report.at("planar_fits")
                     .at("roll_torque")
                     .at("c_pitch_per_v")
                     .get<double>() -
                 0.1) < 0.05);
}

TEST_CASE("validate consumes the sweep report and writes the trim table") {
  const auto dir = fresh_dir("fgt_cli_validate");
  CHECK(run("sweep --seed 21 --out " + dir.string()) == 0);
  CHECK(run("validate --seed 21 --out " + dir.string()) == 0);
  const auto validation = load_json(dir / "validation_report.json");
  CHECK(validation.at("trims").size() == 3);  // no load + two offset loads
  CHECK(validation.at("consistency").size() == 6);
  const double implied =
      validation.at("load_shift_info").at("slope_implied_shift_v").get<double>();
  CHECK(implied < 0.0);
  CHECK(validation.at("load_shift_info").at("reported_shift_v").get<double>() ==
        doctest::Approx(1.5));
}

TEST_CASE("report verb reanalyzes an existing dataset") {
  const auto dir = fresh_dir("fgt_cli_report");
  CHECK(run("sweep --seed 5 --out " + dir.string()) == 0);
  const auto first = load_json(dir / "report.json");
  CHECK(run("report --seed 5 --out " + dir.string()) == 0);
  const auto second = load_json(dir / "report.json");
  CHECK(first.at("pitch_fit").at("slope_uNm_per_v").get<double>() ==
        doctest::Approx(second.at("pitch_fit").at("slope_uNm_per_v").get<double>())
            .epsilon(1e-9));
}

TEST_CASE("exit codes separate config from runtime failures") {
  CHECK(run("sweep --config /does/not/exist.json") == 2);
  const auto dir = fresh_dir("fgt_cli_exitcodes");
  CHECK(run("validate --out " + dir.string()) == 3);  // no sweep report yet
  CHECK(run("report --out " + dir.string()) == 3);    // no dataset yet
  CHECK(run("") == 2);                                // subcommand required
}

TEST_CASE("the bundled scenario file loads and runs") {
  const char* config = std::getenv("FGT_PAPER_JSON");
  REQUIRE_MESSAGE(config != nullptr, "FGT_PAPER_JSON must point at configs/paper.json");
  const auto dir = fresh_dir("fgt_cli_bundled");
  CHECK(run(std::string("calibrate --config ") + config + " --out " + dir.string()) == 0);
  const auto calibration = load_json(dir / "calibration_report.json");
  CHECK(calibration.at("roll").at("k_s_uNm_per_deg").get<double>() ==
        doctest::Approx(1.52).epsilon(0.02));
  CHECK(calibration.at("pitch").at("resolution_uNm").get<double>() ==
        doctest::Approx(0.27).epsilon(0.05));
}

TEST_CASE("parallel sweeps match sequential output") {
  const auto serial = fresh_dir("fgt_cli_serial");
  const auto parallel = fresh_dir("fgt_cli_parallel");
  CHECK(run("sweep --seed 13 --out " + serial.string()) == 0);
  CHECK(run("sweep --seed 13 --parallel --out " + parallel.string()) == 0);
  CHECK(slurp(serial / "dataset.csv") == slurp(parallel / "dataset.csv"));
}
