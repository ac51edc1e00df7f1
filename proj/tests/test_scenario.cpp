#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fgt/error.hpp"
#include "fgt/scenario.hpp"

using namespace fgt;
using namespace fgt::scenario;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("the built-in scenario validates") {
  const auto config = paper_scenario();
  CHECK_NOTHROW(config.validate());
  CHECK(config.flies.count("mapping") == 1);
  CHECK(config.flies.count("validation") == 1);
  CHECK(config.active().baseline_amplitude_v == doctest::Approx(192.0));
}

TEST_CASE("the built-in gimbals hit the calibrated stiffness targets") {
  const auto config = paper_scenario();
  const double ks_roll = gimbalsim::total_stiffness_unm_per_rad(config.gimbal_roll);
  const double ks_pitch = gimbalsim::total_stiffness_unm_per_rad(config.gimbal_pitch);
  CHECK(ks_roll * units::deg_to_rad(1.0) == doctest::Approx(1.52).epsilon(1e-9));
  CHECK(ks_pitch * units::deg_to_rad(1.0) == doctest::Approx(1.88).epsilon(1e-9));
}

TEST_CASE("save and load round-trip the configuration") {
  const auto path = temp_file("fgt_scenario_roundtrip.json");
  const auto config = paper_scenario();
  save(config, path);
  const auto loaded = load(path);

  CHECK(config_hash(loaded) == config_hash(config));
  CHECK(loaded.seed == config.seed);
  CHECK(loaded.flies.at("validation").character.roll_slope_unm_per_v ==
        doctest::Approx(0.38));
  CHECK(loaded.sweep.baseline_amplitude_v == doctest::Approx(192.0));
  CHECK(loaded.calibration.loads.size() == config.calibration.loads.size());
  CHECK(loaded.validation.loads.size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("config hash tracks content changes") {
  auto config = paper_scenario();
  const auto base = config_hash(config);
  config.seed += 1;
  CHECK(config_hash(config) != base);
}

TEST_CASE("missing files and malformed json raise config errors") {
  CHECK_THROWS_AS(load("/nonexistent/fgt.json"), ConfigError);

  const auto path = temp_file("fgt_scenario_bad.json");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load(path), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("unknown and missing keys are rejected with context") {
  const auto path = temp_file("fgt_scenario_strict.json");
  {
    const auto config = paper_scenario();
    save(config, path);
    // Inject an unknown key into the balance section.
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    in.close();
    const auto pos = text.find("\"report_rate_hz\"");
    REQUIRE(pos != std::string::npos);
    text.insert(pos, "\"reading_sd\": 1.0, ");
    std::ofstream(path) << text;
  }
  try {
    load(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("reading_sd") != std::string::npos);
  }
  std::filesystem::remove(path);

  const auto path2 = temp_file("fgt_scenario_missing.json");
  {
    const auto config = paper_scenario();
    save(config, path2);
    std::ifstream in(path2);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    in.close();
    const std::string needle = ",\n    \"tare_mg\": 0.0";
    const auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    text.erase(pos, needle.size());
    std::ofstream(path2) << text;
  }
  CHECK_THROWS_AS(load(path2), ConfigError);
  std::filesystem::remove(path2);
}

TEST_CASE("unknown active fly is rejected") {
  auto config = paper_scenario();
  config.active_fly = "prototype";
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("roll levels beyond the baseline amplitude are rejected") {
  auto config = paper_scenario();
  config.flies.at("mapping").baseline_amplitude_v = 20.0;  // below the 25 V level
  config.sweep.baseline_amplitude_v = 20.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("plant bundle mirrors the scenario") {
  const auto config = paper_scenario();
  const auto plant = plant_bundle(config);
  CHECK(plant.fir.roll_slope_unm_per_v == doctest::Approx(0.49));
  CHECK(plant.supported_mass_mg == doctest::Approx(config.supported_mass_mg));
  CHECK(plant.calibrated_ks_unm_per_rad.pitch == 0.0);  // calibration not yet run

  const auto cmd = baseline_command(config);
  CHECK(cmd.baseline_amplitude_v == doctest::Approx(192.0));
  CHECK(cmd.offset_voltage_v == 0.0);
  CHECK(cmd.amplitude_difference_v == 0.0);
}
