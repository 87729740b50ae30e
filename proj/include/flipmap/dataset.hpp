#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flipmap/codec.hpp"
#include "flipmap/error.hpp"

namespace flipmap::harness {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, size_t row);

  size_t row() const { return row_; }

 private:
  size_t row_;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

struct Dataset {
  std::string name;
  std::vector<codec::Prompt> entries;
  std::string source_path;
};

struct DatasetOptions {
  size_t limit = 0;                                 // 0 = no limit
  std::optional<std::filesystem::path> subset_path; // explicit id list
};

// Loads a comma-separated table whose header row is skipped and whose first
// column holds the behavior text (RFC 4180 quoting supported). Prompt ids
// are the zero-based data-row index, zero-padded to four digits. A subset
// file keeps only the listed ids; `limit` then truncates.
Dataset load_dataset(const std::filesystem::path& path, DatasetOptions options = {});

// One id per line; blank lines and '#' comments are ignored.
std::vector<std::string> load_id_list(const std::filesystem::path& path);

}  // namespace flipmap::harness
