#include "lungseg/feature_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace lungseg {

void write_feature_csv(const std::string& path, const std::vector<FeatureRecord>& records,
                       bool include_label) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open feature CSV for writing: " + path);
  out.precision(17);

  out << "x,y,z,supervoxel";
  if (include_label) out << ",label";
  for (const char* name : FeatureVector::kNames) out << ',' << name;
  out << "\n";

  for (const auto& rec : records) {
    out << rec.keypoint.x << ',' << rec.keypoint.y << ',' << rec.keypoint.z << ','
        << rec.supervoxel_id;
    if (include_label) {
      if (!rec.label) throw ParamError("feature record without a label in labeled export");
      out << ',' << to_string(*rec.label);
    }
    for (double v : rec.features.v) out << ',' << v;
    out << "\n";
  }
  if (!out) throw IoError("short write on feature CSV: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::vector<FeatureRecord> read_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature CSV: " + path);

  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty feature CSV: " + path);
  const auto header = split_csv_line(line);

  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"x", "y", "z", "supervoxel"})
    if (!col.count(name)) throw FormatError(std::string("feature CSV missing column ") + name);
  std::array<std::size_t, FeatureVector::kSize> feat_col{};
  for (std::size_t f = 0; f < FeatureVector::kSize; ++f) {
    const auto it = col.find(FeatureVector::kNames[f]);
    if (it == col.end())
      throw FormatError(std::string("feature CSV missing column ") + FeatureVector::kNames[f]);
    feat_col[f] = it->second;
  }
  const bool has_label = col.count("label") > 0;

  std::vector<FeatureRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < header.size())
      throw FormatError("feature CSV line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    FeatureRecord rec;
    rec.keypoint = {std::stoi(fields[col["x"]]), std::stoi(fields[col["y"]]),
                    std::stoi(fields[col["z"]])};
    rec.supervoxel_id = std::stoi(fields[col["supervoxel"]]);
    if (has_label) {
      const std::string& l = fields[col["label"]];
      if (l == "Tp" || l == "1")
        rec.label = TissueLabel::Tp;
      else if (l == "Tn" || l == "0")
        rec.label = TissueLabel::Tn;
      else
        throw FormatError("feature CSV line " + std::to_string(line_no) + ": bad label '" + l +
                          "'");
    }
    for (std::size_t f = 0; f < FeatureVector::kSize; ++f)
      rec.features.v[f] = std::stod(fields[feat_col[f]]);
    records.push_back(std::move(rec));
  }
  return records;
}

TrainingSet to_training_set(const std::vector<FeatureRecord>& records) {
  TrainingSet set;
  for (const auto& rec : records) {
    if (!rec.label) throw ParamError("training CSV row without a label column value");
    set.push_back(rec.features, *rec.label);
  }
  return set;
}

}  // namespace lungseg
