#include "voxplore/prediction_stream.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "voxplore/format.h"

namespace voxplore {

namespace {

constexpr const char* kMagic = "voxplore-stream";
constexpr int kVersion = 1;

void writePose(std::ostream& out, double t, const Pose& p) {
  out << formatDouble(t) << ' ' << formatDouble(p.x()) << ' ' << formatDouble(p.y()) << ' '
      << formatDouble(p.z()) << ' ' << formatDouble(p.yaw);
}

class RecordParser {
 public:
  RecordParser(std::vector<std::string_view> tokens, size_t record)
      : tokens_(std::move(tokens)), record_(record) {}

  std::string_view next() {
    if (pos_ >= tokens_.size()) fail("truncated record");
    return tokens_[pos_++];
  }
  double real() {
    double v;
    const auto tok = next();
    if (!parseDouble(tok, v)) fail("bad number '" + std::string(tok) + "'");
    return v;
  }
  float real32() {
    float v;
    const auto tok = next();
    if (!parseFloat(tok, v)) fail("bad number '" + std::string(tok) + "'");
    return v;
  }
  template <typename Int>
  Int integer() {
    Int v;
    const auto tok = next();
    if (!parseInt(tok, v)) fail("bad integer '" + std::string(tok) + "'");
    return v;
  }
  bool done() const { return pos_ == tokens_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("prediction stream: record " + std::to_string(record_) + ": " + what);
  }

 private:
  std::vector<std::string_view> tokens_;
  size_t record_;
  size_t pos_ = 0;
};

}  // namespace

size_t PredictionStream::predictionCount() const {
  size_t n = 0;
  for (const auto& r : records) n += r.kind == StreamRecord::Kind::kPrediction;
  return n;
}

void PredictionStream::write(std::ostream& out) const {
  out << kMagic << ' ' << kVersion << '\n';
  out << "voxel_size " << formatDouble(voxel_size) << '\n';
  out << "sensor " << formatDouble(sensor.horizontal_fov_deg) << ' '
      << formatDouble(sensor.vertical_fov_deg) << ' ' << formatDouble(sensor.max_range) << ' '
      << sensor.width << ' ' << sensor.height << '\n';
  for (size_t seq = 0; seq < records.size(); ++seq) {
    const StreamRecord& r = records[seq];
    if (r.kind == StreamRecord::Kind::kFrame) {
      out << "frame " << seq << ' ';
      writePose(out, r.time, r.pose);
      out << '\n';
      continue;
    }
    if (r.kind == StreamRecord::Kind::kClear) {
      out << "clear " << seq << ' ';
      writePose(out, r.time, r.pose);
      out << ' ' << formatDouble(r.radius) << '\n';
      continue;
    }
    const Prediction& p = r.prediction;
    out << "pred " << seq << ' ';
    writePose(out, r.time, p.anchor);
    out << ' ' << p.origin.x << ' ' << p.origin.y << ' ' << p.origin.z << ' ' << p.dims[0] << ' '
        << p.dims[1] << ' ' << p.dims[2];
    // Count runs first so the reader can size its buffer.
    std::vector<std::pair<size_t, PredictedVoxel>> runs;
    for (const PredictedVoxel& v : p.voxels) {
      if (!runs.empty() && runs.back().second == v) {
        ++runs.back().first;
      } else {
        runs.emplace_back(1, v);
      }
    }
    out << ' ' << runs.size();
    for (const auto& [len, v] : runs) {
      out << ' ' << len << ' ' << (v.occupied ? 'o' : 'f') << ' ' << static_cast<int>(v.class_id)
          << ' ' << formatFloat(v.confidence);
    }
    out << '\n';
  }
  out << "end " << records.size() << '\n';
}

std::string PredictionStream::toString() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

void PredictionStream::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write(out);
}

PredictionStream PredictionStream::read(std::istream& in) {
  PredictionStream stream;
  std::string line;
  auto header = [&](const char* key) {
    if (!std::getline(in, line)) throw Error(std::string("prediction stream: missing '") + key + "' header");
    auto tokens = splitWhitespace(line);
    if (tokens.empty() || tokens[0] != key) {
      throw Error(std::string("prediction stream: expected '") + key + "' header");
    }
    return tokens;
  };
  {
    auto t = header(kMagic);
    int version = 0;
    if (t.size() != 2 || !parseInt(t[1], version) || version != kVersion) {
      throw Error("prediction stream: unsupported version");
    }
  }
  {
    auto t = header("voxel_size");
    if (t.size() != 2 || !parseDouble(t[1], stream.voxel_size) || !(stream.voxel_size > 0.0)) {
      throw Error("prediction stream: bad voxel_size header");
    }
  }
  {
    auto t = header("sensor");
    if (t.size() != 6 || !parseDouble(t[1], stream.sensor.horizontal_fov_deg) ||
        !parseDouble(t[2], stream.sensor.vertical_fov_deg) ||
        !parseDouble(t[3], stream.sensor.max_range) || !parseInt(t[4], stream.sensor.width) ||
        !parseInt(t[5], stream.sensor.height)) {
      throw Error("prediction stream: bad sensor header");
    }
  }

  bool ended = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t seq = stream.records.size();
    RecordParser p(splitWhitespace(line), seq);
    const auto kind = p.next();
    if (kind == "end") {
      if (p.integer<size_t>() != seq) p.fail("record count mismatch");
      ended = true;
      break;
    }
    StreamRecord r;
    if (kind == "frame") {
      r.kind = StreamRecord::Kind::kFrame;
    } else if (kind == "clear") {
      r.kind = StreamRecord::Kind::kClear;
    } else if (kind == "pred") {
      r.kind = StreamRecord::Kind::kPrediction;
    } else {
      p.fail("unknown record kind '" + std::string(kind) + "'");
    }
    if (p.integer<size_t>() != seq) p.fail("sequence number out of order");
    r.time = p.real();
    const double x = p.real(), y = p.real(), z = p.real(), yaw = p.real();
    r.pose = Pose(x, y, z, yaw);
    if (r.kind == StreamRecord::Kind::kClear) {
      r.radius = p.real();
      if (!(r.radius >= 0.0)) p.fail("negative clear radius");
    }
    if (r.kind == StreamRecord::Kind::kPrediction) {
      Prediction& pred = r.prediction;
      pred.anchor = r.pose;
      pred.voxel_size = stream.voxel_size;
      pred.origin.x = p.integer<int64_t>();
      pred.origin.y = p.integer<int64_t>();
      pred.origin.z = p.integer<int64_t>();
      for (int a = 0; a < 3; ++a) {
        pred.dims[a] = p.integer<int>();
        if (pred.dims[a] <= 0) p.fail("non-positive dimension");
      }
      const size_t runs = p.integer<size_t>();
      pred.voxels.reserve(pred.volume());
      for (size_t i = 0; i < runs; ++i) {
        const size_t len = p.integer<size_t>();
        const auto state = p.next();
        PredictedVoxel v;
        if (state == "o") {
          v.occupied = true;
        } else if (state != "f") {
          p.fail("bad voxel state '" + std::string(state) + "'");
        }
        const int cls = p.integer<int>();
        if (cls < 0 || cls > 255) p.fail("class id out of range");
        v.class_id = static_cast<uint8_t>(cls);
        v.confidence = p.real32();
        if (!(v.confidence >= 0.0f && v.confidence <= 1.0f)) p.fail("confidence out of [0, 1]");
        if (pred.voxels.size() + len > pred.volume()) p.fail("runs exceed prediction volume");
        pred.voxels.insert(pred.voxels.end(), len, v);
      }
      if (pred.voxels.size() != pred.volume()) p.fail("runs do not cover prediction volume");
    }
    if (!p.done()) p.fail("trailing fields");
    stream.records.push_back(std::move(r));
  }
  if (!ended) {
    throw Error("prediction stream: record " + std::to_string(stream.records.size()) +
                ": missing 'end' trailer (truncated log)");
  }
  return stream;
}

PredictionStream PredictionStream::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open prediction log '" + path + "'");
  return read(in);
}

}  // namespace voxplore
