#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <vector>

namespace flipmap::jsonl {

// Reads every non-blank line as a JSON object. Throws flipmap::Error with the
// line number when a line does not parse.
std::vector<nlohmann::json> read_file(const std::filesystem::path& path);

// Appends one record per line, flushing after each write so that a crashed
// run leaves only whole records behind.
class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);

  void append(const nlohmann::json& record);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace flipmap::jsonl
