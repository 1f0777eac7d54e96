#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "voxplore/mission.h"

namespace voxplore {

/// Shortest round-trip text; empty for an absent value.
std::string csvField(const std::optional<double>& v);

/// Column order: t,E,C,M,P,P_o,P_f,R_o,R_f,collisions,tree_size,best_utility
extern const char* const kMetricsCsvHeader;
void writeMetricsCsv(const std::vector<MetricsRecord>& records, std::ostream& out);
std::string metricsCsvRow(const MetricsRecord& r);

/// Column order: step,t,x,y,z,yaw,best_utility,tree_size,gain
void writeEventsCsv(const std::vector<PlannerEvent>& events, std::ostream& out);

/// Writes `content` to `path`, throwing Error on failure.
void writeTextFile(const std::string& path, const std::string& content);

}  // namespace voxplore
