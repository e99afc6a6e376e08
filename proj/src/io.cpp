#include "proca/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace proca {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

void append_g17(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string monitor_csv(const std::vector<MonitorReport>& rows) {
  std::string out =
      "t,a0_l2,ai_l2,phi_l2,c1_l2,c1_linf,c2_l2,c2_linf,gauss_l2,gauss_linf\n";
  for (const MonitorReport& r : rows) {
    const double cols[] = {r.t,      r.a0_l2,   r.ai_l2,  r.phi_l2,
                           r.c1_l2,  r.c1_linf, r.c2_l2,  r.c2_linf,
                           r.gauss_l2, r.gauss_linf};
    for (std::size_t i = 0; i < std::size(cols); ++i) {
      if (i) out += ',';
      append_g17(out, cols[i]);
    }
    out += '\n';
  }
  return out;
}

std::string monitor_csv(const std::vector<GordonMonitorReport>& rows) {
  std::string out =
      "t,atld0_l2,atldi_l2,lorenz_l2,lorenz_linf,gauss_l2,gauss_linf\n";
  for (const GordonMonitorReport& r : rows) {
    const double cols[] = {r.t,          r.atld0_l2, r.atldi_l2, r.lorenz_l2,
                           r.lorenz_linf, r.gauss_l2, r.gauss_linf};
    for (std::size_t i = 0; i < std::size(cols); ++i) {
      if (i) out += ',';
      append_g17(out, cols[i]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for writing: " + path.string());
  f << content;
  if (!f) throw ConfigError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for reading: " + path.string());
  std::string s((std::istreambuf_iterator<char>(f)),
                std::istreambuf_iterator<char>());
  return s;
}

namespace {

constexpr char kMagic[4] = {'P', 'F', 'L', 'D'};

template <class T>
void put(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <class T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const GridSpec& grid,
                    double time, const std::vector<const ScalarField*>& comps) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for writing: " + path.string());
  f.write(kMagic, 4);
  put<std::uint32_t>(f, 1);
  put<std::uint32_t>(f, static_cast<std::uint32_t>(grid.dim));
  for (int d = 0; d < 3; ++d) {
    put<std::uint32_t>(f, static_cast<std::uint32_t>(grid.points[d]));
  }
  for (int d = 0; d < 3; ++d) put<double>(f, grid.lengths[d]);
  put<double>(f, time);
  put<std::uint32_t>(f, static_cast<std::uint32_t>(comps.size()));
  put<std::uint32_t>(f, 0);
  for (const ScalarField* c : comps) {
    if (!(c->grid() == grid)) {
      throw ConfigError("snapshot component on mismatched grid");
    }
    f.write(reinterpret_cast<const char*>(c->data()),
            static_cast<std::streamsize>(c->size() * sizeof(double)));
  }
  if (!f) throw ConfigError("write failed: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path, int order) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for reading: " + path.string());
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0) {
    throw ConfigError("not a field snapshot: " + path.string());
  }
  const auto version = get<std::uint32_t>(f);
  if (version != 1) {
    throw ConfigError("unsupported snapshot version in " + path.string());
  }
  const int dim = static_cast<int>(get<std::uint32_t>(f));
  std::array<int, 3> points{};
  for (int d = 0; d < 3; ++d) {
    points[d] = static_cast<int>(get<std::uint32_t>(f));
  }
  std::array<double, 3> lengths{};
  for (int d = 0; d < 3; ++d) lengths[d] = get<double>(f);
  const double time = get<double>(f);
  const auto ncomp = get<std::uint32_t>(f);
  get<std::uint32_t>(f);  // reserved
  if (!f) throw ConfigError("truncated snapshot header: " + path.string());

  Snapshot snap;
  snap.grid = GridSpec(dim, points, lengths, order);
  snap.time = time;
  snap.comps.reserve(ncomp);
  for (std::uint32_t c = 0; c < ncomp; ++c) {
    ScalarField field(snap.grid);
    f.read(reinterpret_cast<char*>(field.data()),
           static_cast<std::streamsize>(field.size() * sizeof(double)));
    if (!f) throw ConfigError("truncated snapshot data: " + path.string());
    snap.comps.push_back(std::move(field));
  }
  return snap;
}

}  // namespace proca
