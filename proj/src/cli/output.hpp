#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace bf::cli {

// One JSON document per line, flushed on close.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);
  void write(const nlohmann::json& record);

 private:
  std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// Columns of equal length under a header row; doubles at round-trip precision.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

std::filesystem::path ensure_dir(const std::filesystem::path& dir);

}  // namespace bf::cli
