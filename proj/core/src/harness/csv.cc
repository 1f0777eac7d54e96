#include "voxplore/harness/csv.h"

#include <fstream>
#include <ostream>
#include <sstream>

#include "voxplore/format.h"

namespace voxplore {

std::string csvField(const std::optional<double>& v) { return v ? formatDouble(*v) : std::string(); }

const char* const kMetricsCsvHeader = "t,E,C,M,P,P_o,P_f,R_o,R_f,collisions,tree_size,best_utility";

std::string metricsCsvRow(const MetricsRecord& r) {
  std::ostringstream out;
  out << formatDouble(r.t) << ',' << formatDouble(r.E) << ',' << formatDouble(r.C) << ','
      << formatDouble(r.M) << ',' << csvField(r.P) << ',' << csvField(r.P_o) << ',' << csvField(r.P_f)
      << ',' << csvField(r.R_o) << ',' << csvField(r.R_f) << ',' << r.collisions << ',' << r.tree_size
      << ',' << formatDouble(r.best_utility);
  return out.str();
}

void writeMetricsCsv(const std::vector<MetricsRecord>& records, std::ostream& out) {
  out << kMetricsCsvHeader << '\n';
  for (const MetricsRecord& r : records) out << metricsCsvRow(r) << '\n';
}

void writeEventsCsv(const std::vector<PlannerEvent>& events, std::ostream& out) {
  out << "step,t,x,y,z,yaw,best_utility,tree_size,gain\n";
  for (const PlannerEvent& e : events) {
    out << e.step << ',' << formatDouble(e.t) << ',' << formatDouble(e.pose.x()) << ','
        << formatDouble(e.pose.y()) << ',' << formatDouble(e.pose.z()) << ',' << formatDouble(e.pose.yaw)
        << ',' << formatDouble(e.utility) << ',' << e.tree_size << ',' << toString(e.gain) << '\n';
  }
}

void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace voxplore
