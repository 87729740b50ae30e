#pragma once

#include <chrono>
#include <filesystem>
#include <random>
#include <string>

namespace testutil {

// Unique directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "flipmap-test") {
    auto base = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(
        std::chrono::steady_clock::now().time_since_epoch().count());
    for (int i = 0; i < 64; ++i) {
      auto candidate = base / (prefix + "-" + std::to_string(rng()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp directory");
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
