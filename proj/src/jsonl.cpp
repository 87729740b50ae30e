#include "flipmap/jsonl.hpp"

#include <fstream>
#include <string>

#include "flipmap/error.hpp"

namespace flipmap::jsonl {

std::vector<nlohmann::json> read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  std::vector<nlohmann::json> records;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

Writer::Writer(const std::filesystem::path& path) : path_(path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  out_.open(path, std::ios::app);
  if (!out_) {
    throw Error("cannot open " + path.string() + " for append");
  }
}

void Writer::append(const nlohmann::json& record) {
  out_ << record.dump() << '\n';
  out_.flush();
  if (!out_) {
    throw Error("write failed: " + path_.string());
  }
}

}  // namespace flipmap::jsonl
