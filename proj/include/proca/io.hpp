#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "proca/flat_engine.hpp"
#include "proca/gordon_engine.hpp"
#include "proca/grid.hpp"

namespace proca {

/// Monitor CSV, exact column order:
/// t,a0_l2,ai_l2,phi_l2,c1_l2,c1_linf,c2_l2,c2_linf,gauss_l2,gauss_linf
std::string monitor_csv(const std::vector<MonitorReport>& rows);

/// Monitor CSV, exact column order:
/// t,atld0_l2,atldi_l2,lorenz_l2,lorenz_linf,gauss_l2,gauss_linf
std::string monitor_csv(const std::vector<GordonMonitorReport>& rows);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Field snapshot: little-endian binary with the header
///   magic "PFLD", u32 version(=1), u32 dim, u32 points[3], f64 lengths[3],
///   f64 time, u32 ncomp, u32 reserved(=0)
/// followed by ncomp * npoints f64 values, component-major, points in grid
/// storage order (axis 0 fastest).
void write_snapshot(const std::filesystem::path& path, const GridSpec& grid,
                    double time, const std::vector<const ScalarField*>& comps);

struct Snapshot {
  GridSpec grid;
  double time = 0.0;
  std::vector<ScalarField> comps;
};

/// Reads a snapshot; the stencil `order` is a property of the computation,
/// not the data, and is imposed on the reconstructed grid.
Snapshot read_snapshot(const std::filesystem::path& path, int order);

}  // namespace proca
