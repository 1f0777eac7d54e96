#pragma once

#include <iosfwd>
#include <string>

#include "voxplore/multi_layer_map.h"

namespace voxplore {

/// Line-based export of a MultiLayerMap:
///
///   voxplore-map 1
///   voxel_size <v>
///   tau <tau_c>
///   voxels <n>
///   <i> <j> <k> <u|f|o> <measured log-odds> <sc log-odds | nan>     (n lines)
///
/// Only voxels that were observed or predicted are listed, sorted by (i, j, k).
/// The state letter is redundant with the measured log-odds and kept for
/// readability and for grep-based checks. Reals use shortest round-trip text.
void writeMapSnapshot(const MultiLayerMap& map, std::ostream& out);
void saveMapSnapshot(const MultiLayerMap& map, const std::string& path);

/// Rebuilds a map from a snapshot. Frame counters and hit counts are not
/// restored. Throws Error naming the line on malformed input.
MultiLayerMap readMapSnapshot(std::istream& in);
MultiLayerMap loadMapSnapshot(const std::string& path);

}  // namespace voxplore
