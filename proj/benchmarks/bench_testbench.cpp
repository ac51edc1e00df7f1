#include <benchmark/benchmark.h>

#include "fgt/analysis.hpp"
#include "fgt/gimbalsim.hpp"
#include "fgt/mapper.hpp"
#include "fgt/scenario.hpp"
#include "fgt/units.hpp"

using namespace fgt;

namespace {

mapper::PlantBundle calibrated_plant() {
  const auto config = scenario::paper_scenario();
  mapper::PlantBundle plant = scenario::plant_bundle(config);
  plant.calibrated_ks_unm_per_rad =
      AxisPair{gimbalsim::total_stiffness_unm_per_rad(plant.gimbal_pitch),
               gimbalsim::total_stiffness_unm_per_rad(plant.gimbal_roll)};
  return plant;
}

void BM_integrator_step(benchmark::State& state) {
  const auto p = scenario::paper_scenario().gimbal_roll;
  gimbalsim::GimbalState s;
  s.theta_rad = units::deg_to_rad(2.0);
  for (auto _ : state) {
    s = gimbalsim::step(p, s, 1.0, 1e-3);
    benchmark::DoNotOptimize(s.theta_rad);
    if (s.t_s > 1e6) s.t_s = 0;
  }
}
BENCHMARK(BM_integrator_step);

void BM_step_response_15s(benchmark::State& state) {
  const auto p = scenario::paper_scenario().gimbal_roll;
  for (auto _ : state) {
    const auto traj = gimbalsim::step_response(p, units::deg_to_rad(4.0), 15.0, 1e-3);
    benchmark::DoNotOptimize(traj.theta_rad.back());
  }
}
BENCHMARK(BM_step_response_15s);

void BM_measure_point(benchmark::State& state) {
  const auto plant = calibrated_plant();
  mapper::SweepSpec spec;
  const auto cmd = mapper::command_for(spec, 5.0, -10.0);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    auto rngs = mapper::point_rngs(17, rng_domain::kGrid, rep++);
    const auto point =
        mapper::measure_point(plant, cmd, 0.0, plant.supported_mass_mg,
                              spec.average_window_s, spec.integrator_dt_s, rngs);
    benchmark::DoNotOptimize(point.tau_roll_unm);
  }
}
BENCHMARK(BM_measure_point);

void BM_run_grid(benchmark::State& state) {
  const auto plant = calibrated_plant();
  mapper::SweepSpec spec;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const auto ds = mapper::run_grid(plant, spec, seed++);
    benchmark::DoNotOptimize(ds.points.size());
  }
}
BENCHMARK(BM_run_grid);

void BM_analyze(benchmark::State& state) {
  const auto plant = calibrated_plant();
  const auto ds = mapper::run_grid(plant, mapper::SweepSpec{}, 5);
  for (auto _ : state) {
    const auto report = analysis::analyze(ds);
    benchmark::DoNotOptimize(report.roll_fit.slope_unm_per_v);
  }
}
BENCHMARK(BM_analyze);

void BM_trim_search(benchmark::State& state) {
  const auto config = scenario::paper_scenario();
  const auto fir = config.flies.at("mapping").character;
  const auto baseline = scenario::baseline_command(config);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(derive_stream(seed++, rng_domain::kTrim, 0));
    const auto trim =
        mapper::trim_search(fir, baseline, std::nullopt, config.trim, 0.0, rng);
    benchmark::DoNotOptimize(trim.delta_a_v);
  }
}
BENCHMARK(BM_trim_search);

}  // namespace

BENCHMARK_MAIN();
