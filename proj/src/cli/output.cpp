#include "cli/output.hpp"

#include <charconv>

#include "beamfluid/errors.hpp"

namespace bf::cli {

namespace {

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

JsonlWriter::JsonlWriter(const std::filesystem::path& path) : out_(open(path)) {}

void JsonlWriter::write(const nlohmann::json& record) { out_ << record.dump() << '\n'; }

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out = open(path);
  out << doc.dump(2) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw InvalidArgument("CSV header and column count differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw InvalidArgument("CSV columns have different lengths");
  std::ofstream out = open(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[32];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const auto res = std::to_chars(buf, buf + sizeof buf, columns[i][r]);
      if (i) out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

std::filesystem::path ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

}  // namespace bf::cli
