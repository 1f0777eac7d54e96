#include "voxplore/map_snapshot.h"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "voxplore/format.h"

namespace voxplore {

namespace {

char stateLetter(Occupancy s) {
  switch (s) {
    case Occupancy::kUnknown: return 'u';
    case Occupancy::kFree: return 'f';
    case Occupancy::kOccupied: return 'o';
  }
  return '?';
}

struct Entry {
  const MeasuredVoxel* measured = nullptr;
  const ScVoxel* sc = nullptr;
};

}  // namespace

void writeMapSnapshot(const MultiLayerMap& map, std::ostream& out) {
  std::map<VoxelIndex, Entry> entries;
  map.measured().grid().forEachVoxel([&](const VoxelIndex& v, const MeasuredVoxel& m) {
    if (m.observed) entries[v].measured = &m;
  });
  map.sc().grid().forEachVoxel([&](const VoxelIndex& v, const ScVoxel& s) {
    if (s.predicted()) entries[v].sc = &s;
  });
  out << "voxplore-map 1\n";
  out << "voxel_size " << formatDouble(map.gridConfig().voxel_size) << '\n';
  out << "tau " << formatDouble(map.confidenceThreshold()) << '\n';
  out << "voxels " << entries.size() << '\n';
  for (const auto& [v, e] : entries) {
    const Occupancy s = e.measured ? MeasuredLayer::stateOf(*e.measured) : Occupancy::kUnknown;
    out << v.x << ' ' << v.y << ' ' << v.z << ' ' << stateLetter(s) << ' '
        << formatFloat(e.measured ? e.measured->log_odds : 0.0f) << ' '
        << (e.sc ? formatFloat(e.sc->log_odds) : std::string("nan")) << '\n';
  }
}

void saveMapSnapshot(const MultiLayerMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  writeMapSnapshot(map, out);
}

MultiLayerMap readMapSnapshot(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error("map snapshot: line " + std::to_string(line_no) + ": " + what);
  };
  auto header = [&](const char* key) {
    ++line_no;
    if (!std::getline(in, line)) throw fail(std::string("missing '") + key + "'");
    auto t = splitWhitespace(line);
    if (t.size() != 2 || t[0] != key) throw fail(std::string("expected '") + key + "'");
    return std::string(t[1]);
  };
  if (header("voxplore-map") != "1") throw fail("unsupported version");
  GridConfig grid;
  if (!parseDouble(header("voxel_size"), grid.voxel_size) || !(grid.voxel_size > 0.0)) {
    throw fail("bad voxel_size");
  }
  double tau = 0.0;
  if (!parseDouble(header("tau"), tau)) throw fail("bad tau");
  size_t count = 0;
  if (!parseInt(header("voxels"), count)) throw fail("bad voxel count");

  MultiLayerMap map(grid, {}, std::nullopt, tau);
  BlockHashGrid<MeasuredVoxel>::Writer mw(map.measured().mutableGrid());
  BlockHashGrid<ScVoxel>::Writer sw(map.sc().mutableGrid());
  for (size_t n = 0; n < count; ++n) {
    ++line_no;
    if (!std::getline(in, line)) throw fail("truncated snapshot");
    auto t = splitWhitespace(line);
    VoxelIndex v;
    float ml = 0.0f, sl = 0.0f;
    if (t.size() != 6 || !parseInt(t[0], v.x) || !parseInt(t[1], v.y) || !parseInt(t[2], v.z) ||
        t[3].size() != 1 || !parseFloat(t[4], ml) || !parseFloat(t[5], sl)) {
      throw fail("malformed voxel record");
    }
    const char s = t[3][0];
    if (s != 'u' && s != 'f' && s != 'o') throw fail("bad state letter");
    if (s != 'u') {
      MeasuredVoxel& m = mw.at(v);
      m.log_odds = ml;
      m.observed = true;
      const char expect = stateLetter(MeasuredLayer::stateOf(m));
      if (expect != s) throw fail("state letter disagrees with log-odds");
    }
    if (!std::isnan(sl)) sw.at(v).log_odds = sl;
  }
  return map;
}

MultiLayerMap loadMapSnapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open map snapshot '" + path + "'");
  return readMapSnapshot(in);
}

}  // namespace voxplore
