#pragma once

// Driver tying a scenario to the time stepper, the diagnostics engine and
// the output directory. Also rebuilds velocity histories from a finished
// run's snapshot files for trajectory work.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hillfila/config.hpp"
#include "hillfila/diagnostics.hpp"
#include "hillfila/evolution.hpp"
#include "hillfila/flow_map.hpp"
#include "hillfila/io.hpp"
#include "hillfila/scenarios.hpp"

namespace hillfila {

struct SimOutcome {
  RunResult run;
  std::vector<DiagnosticsRecord> records;
};

inline EvolveParams evolve_params_from(const ScenarioConfig& s) {
  EvolveParams p;
  p.h_min = s.h_min;
  p.h_max = s.h_max;
  p.curvature_budget = s.curvature_budget;
  p.h_quad = s.h_quad;
  p.r_axis_snap = s.r_axis_snap;
  p.frozen_stage_masks = s.frozen_stage_masks;
  return p;
}

// Run a scenario. If out_dir is nonempty it receives config.resolved, the
// diagnostics CSV and snapshot files at the configured cadence.
inline SimOutcome simulate(const FullConfig& cfg, bool write_outputs = true) {
  const ScenarioConfig& sc = cfg.scenario;
  const SimState s0 = make_scenario(sc);
  const EvolveParams prm = evolve_params_from(sc);

  RunOptions opt;
  opt.dt = sc.dt;
  opt.t_end = sc.t_end;
  opt.observe_every = sc.observe_every;
  opt.snapshot_every = sc.snapshot_every;

  namespace fs = std::filesystem;
  std::unique_ptr<DiagnosticsWriter> writer;
  const bool to_disk = write_outputs && !sc.out_dir.empty();
  if (to_disk) {
    fs::create_directories(sc.out_dir);
    std::ofstream resolved(fs::path(sc.out_dir) / "config.resolved");
    resolved << serialize_config(cfg);
    writer = std::make_unique<DiagnosticsWriter>(fs::path(sc.out_dir) / "diagnostics.csv");
  }

  SimOutcome out;
  DiagnosticsEngine engine(cfg.diagnostics);
  long long snapshot_counter = 0;

  std::vector<std::function<void(const SimState&)>> observers;
  observers.push_back([&](const SimState& st) {
    const DiagnosticsRecord r = engine.record(st);
    out.records.push_back(r);
    if (writer) writer->append(r);
  });

  out.run = run(s0, opt, prm, observers);

  if (to_disk) {
    for (const auto& snap : out.run.snapshots) {
      const long long idx = snapshot_counter++;
      char tag[32];
      std::snprintf(tag, sizeof tag, "%06lld", idx);
      if (const auto* p = std::get_if<PatchState>(&snap)) {
        for (std::size_t k = 0; k < p->contours.size(); ++k)
          write_contour_csv(fs::path(sc.out_dir) /
                                ("contour_" + std::string(tag) + "_" + std::to_string(k) + ".csv"),
                            p->contours[k], p->t);
      } else {
        write_blobs_csv(fs::path(sc.out_dir) / ("blobs_" + std::string(tag) + ".csv"),
                        std::get<BlobState>(snap));
      }
    }
    if (!out.run.clean) {
      std::ofstream stop(fs::path(sc.out_dir) / "stop_reason.txt");
      stop << out.run.stop_reason << "\n";
    }
  }
  return out;
}

// Velocity history from an in-memory run, one source per snapshot.
inline VelocityHistory history_from_run(const RunResult& rr, double h_quad,
                                        VelocityHistory::Interp interp = VelocityHistory::Interp::linear) {
  VelocityHistory h(interp);
  for (const auto& snap : rr.snapshots) {
    if (const auto* p = std::get_if<PatchState>(&snap))
      h.add(p->t, PatchSource{p->contours, p->xi_value, h_quad});
    else {
      const auto& b = std::get<BlobState>(snap);
      h.add(b.t, BlobsSource{b.blobs, b.core_radius});
    }
  }
  return h;
}

// Velocity history from a run directory's snapshot files.
inline VelocityHistory history_from_dir(const std::filesystem::path& dir, double h_quad,
                                        VelocityHistory::Interp interp = VelocityHistory::Interp::linear) {
  namespace fs = std::filesystem;
  std::vector<std::string> contour_files, blob_files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.starts_with("contour_") && name.ends_with(".csv")) contour_files.push_back(e.path().string());
    if (name.starts_with("blobs_") && name.ends_with(".csv")) blob_files.push_back(e.path().string());
  }
  std::sort(contour_files.begin(), contour_files.end());
  std::sort(blob_files.begin(), blob_files.end());
  VelocityHistory h(interp);
  if (!blob_files.empty()) {
    for (const auto& f : blob_files) {
      BlobState s = read_blobs_csv(f);
      h.add(s.t, BlobsSource{std::move(s.blobs), s.core_radius});
    }
    return h;
  }
  // group contour files by snapshot tag: contour_<tag>_<k>.csv
  std::string tag;
  std::vector<Contour> group;
  double t = 0.0;
  auto flush = [&] {
    if (!group.empty()) h.add(t, PatchSource{group, 1.0, h_quad});
    group.clear();
  };
  for (const auto& f : contour_files) {
    const std::string name = fs::path(f).filename().string();
    const std::string this_tag = name.substr(8, name.find('_', 8) - 8);
    if (this_tag != tag) {
      flush();
      tag = this_tag;
    }
    ContourSnapshot snap = read_contour_csv(f);
    t = snap.t;
    group.push_back(std::move(snap.contour));
  }
  flush();
  if (h.empty()) throw std::runtime_error("no snapshots found in " + dir.string());
  return h;
}

// tau(t) series from a diagnostics CSV.
inline std::vector<std::pair<double, double>> tau_series_from(
    const std::vector<DiagnosticsRecord>& recs) {
  std::vector<std::pair<double, double>> s;
  s.reserve(recs.size());
  for (const auto& r : recs) s.emplace_back(r.t, r.tau);
  return s;
}

}  // namespace hillfila
