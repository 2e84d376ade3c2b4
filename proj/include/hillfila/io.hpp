#pragma once

// File formats: contour and blob snapshots, the diagnostics CSV, and
// trajectory CSVs. All floating-point output uses 17 significant digits so
// reruns are byte-identical and read-back is lossless.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hillfila/diagnostics.hpp"
#include "hillfila/evolution.hpp"
#include "hillfila/flow_map.hpp"
#include "hillfila/geometry.hpp"

namespace hillfila {

namespace detail {

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// Contour snapshot: `# t=<time> nodes=<N> closed=<0|1>` then `r,z` per node.
inline void write_contour_csv(const std::filesystem::path& path, const Contour& c, double t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "# t=" << detail::g17(t) << " nodes=" << c.nodes.size() << " closed=" << (c.closed ? 1 : 0)
      << "\n";
  for (const auto& p : c.nodes) out << detail::g17(p.r) << "," << detail::g17(p.z) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

struct ContourSnapshot {
  double t = 0.0;
  Contour contour;
};

inline ContourSnapshot read_contour_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  ContourSnapshot snap;
  unsigned long nodes = 0;
  int closed = 1;
  if (std::sscanf(header.c_str(), "# t=%lf nodes=%lu closed=%d", &snap.t, &nodes, &closed) != 3)
    throw std::runtime_error("bad contour header in " + path.string());
  snap.contour.closed = closed != 0;
  snap.contour.nodes.reserve(nodes);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    HalfPlanePoint p;
    if (std::sscanf(line.c_str(), "%lf,%lf", &p.r, &p.z) != 2)
      throw std::runtime_error("bad contour row in " + path.string());
    snap.contour.nodes.push_back(p);
  }
  if (snap.contour.nodes.size() != nodes)
    throw std::runtime_error("contour node count mismatch in " + path.string());
  return snap;
}

// Blob snapshot: `# t=<time> blobs=<N> core=<delta>` then `r,z,xi,dV`.
inline void write_blobs_csv(const std::filesystem::path& path, const BlobState& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "# t=" << detail::g17(s.t) << " blobs=" << s.blobs.size()
      << " core=" << detail::g17(s.core_radius) << "\n";
  for (const auto& b : s.blobs)
    out << detail::g17(b.p.r) << "," << detail::g17(b.p.z) << "," << detail::g17(b.xi) << ","
        << detail::g17(b.dV) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline BlobState read_blobs_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  BlobState s;
  unsigned long n = 0;
  if (std::sscanf(header.c_str(), "# t=%lf blobs=%lu core=%lf", &s.t, &n, &s.core_radius) != 3)
    throw std::runtime_error("bad blob header in " + path.string());
  s.blobs.reserve(n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    BlobParticle b;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &b.p.r, &b.p.z, &b.xi, &b.dV) != 4)
      throw std::runtime_error("bad blob row in " + path.string());
    s.blobs.push_back(b);
  }
  if (s.blobs.size() != n) throw std::runtime_error("blob count mismatch in " + path.string());
  return s;
}

inline constexpr const char* diagnostics_csv_header =
    "t,tau,speed_residual,diameter,perimeter,r_ins,impulse,energy,l1,l2,linf,sup_vorticity,"
    "max_dr_xi,fs_ratio";

// Streaming diagnostics writer; rows are flushed as they arrive so a run
// that aborts still leaves everything recorded up to the stop.
class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    out_ << diagnostics_csv_header << "\n";
    out_.flush();
  }

  void append(const DiagnosticsRecord& r) {
    using detail::g17;
    out_ << g17(r.t) << "," << g17(r.tau) << "," << g17(r.speed_residual) << ","
         << g17(r.diameter) << "," << g17(r.perimeter) << "," << g17(r.r_ins) << ","
         << g17(r.impulse) << "," << g17(r.energy) << "," << g17(r.l1) << "," << g17(r.l2) << ","
         << g17(r.linf) << "," << g17(r.sup_vorticity) << "," << g17(r.max_dr_xi) << ","
         << g17(r.fs_ratio) << "\n";
    out_.flush();
  }

 private:
  std::ofstream out_;
};

inline std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<DiagnosticsRecord> recs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DiagnosticsRecord r;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &r.t,
                    &r.tau, &r.speed_residual, &r.diameter, &r.perimeter, &r.r_ins, &r.impulse,
                    &r.energy, &r.l1, &r.l2, &r.linf, &r.sup_vorticity, &r.max_dr_xi,
                    &r.fs_ratio) != 14)
      throw std::runtime_error("bad diagnostics row in " + path.string());
    recs.push_back(r);
  }
  return recs;
}

// Trajectory CSV: `t,r,z` per sample, one file per seed point.
inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const std::vector<PathSample>& path_samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "t,r,z\n";
  for (const auto& s : path_samples)
    out << detail::g17(s.t) << "," << detail::g17(s.x.r) << "," << detail::g17(s.x.z) << "\n";
}

inline std::vector<PathSample> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<PathSample> samples;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    PathSample s;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s.t, &s.x.r, &s.x.z) != 3)
      throw std::runtime_error("bad trajectory row in " + path.string());
    samples.push_back(s);
  }
  return samples;
}

}  // namespace hillfila
