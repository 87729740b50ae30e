#include "flipmap/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "flipmap/util.hpp"

namespace flipmap::harness {

namespace {

// Splits one CSV record into fields. `row` is the 1-based physical row for
// error messages.
std::vector<std::string> parse_csv_record(const std::string& line, size_t row) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      field.push_back(c);
      ++i;
      continue;
    }
    if (c == '"') {
      if (!field.empty()) {
        throw ParseError("unexpected quote inside unquoted field", row);
      }
      quoted = true;
      ++i;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      ++i;
      continue;
    }
    field.push_back(c);
    ++i;
  }
  if (quoted) {
    throw ParseError("unterminated quoted field", row);
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string zero_padded(size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04zu", index);
  return buf;
}

}  // namespace

ParseError::ParseError(const std::string& what, size_t row)
    : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

Dataset load_dataset(const std::filesystem::path& path, DatasetOptions options) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string(), 0);
  }

  Dataset dataset;
  dataset.name = path.stem().string();
  dataset.source_path = path.string();

  std::string line;
  size_t row = 0;
  size_t data_index = 0;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_skipped) {
      header_skipped = true;  // first row is the column header
      continue;
    }
    if (line.empty()) continue;
    auto fields = parse_csv_record(line, row);
    if (fields.empty()) {
      throw ParseError("no columns", row);
    }
    std::string text = util::trim(fields[0]);
    if (text.empty()) {
      throw ParseError("empty behavior text in first column", row);
    }
    dataset.entries.push_back({zero_padded(data_index), std::move(text)});
    ++data_index;
  }

  if (dataset.entries.empty()) {
    throw EmptyDataset("no data rows in " + path.string());
  }

  if (options.subset_path) {
    auto ids = load_id_list(*options.subset_path);
    std::set<std::string> keep(ids.begin(), ids.end());
    std::vector<codec::Prompt> filtered;
    std::set<std::string> seen;
    for (auto& prompt : dataset.entries) {
      if (keep.count(prompt.id)) {
        seen.insert(prompt.id);
        filtered.push_back(std::move(prompt));
      }
    }
    if (seen.size() != keep.size()) {
      std::string missing;
      for (const auto& id : keep) {
        if (!seen.count(id)) missing += (missing.empty() ? "" : ", ") + id;
      }
      throw Error("subset ids not present in dataset: " + missing);
    }
    dataset.entries = std::move(filtered);
    dataset.name += "-subset" + std::to_string(dataset.entries.size());
  }

  if (options.limit > 0 && dataset.entries.size() > options.limit) {
    dataset.entries.resize(options.limit);
  }
  if (dataset.entries.empty()) {
    throw EmptyDataset("dataset is empty after subset/limit filtering");
  }
  return dataset;
}

std::vector<std::string> load_id_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open id list " + path.string());
  }
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string id = util::trim(line);
    if (!id.empty()) ids.push_back(std::move(id));
  }
  return ids;
}

}  // namespace flipmap::harness
