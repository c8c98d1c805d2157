#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "caslgp/errors.hpp"

namespace caslgp::cli {

std::string render_csv(const Table& table, const std::vector<std::string>& config) {
  std::string out;
  for (const auto& line : config) out += "# " + line + "\n";
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(table.columns);
  for (const auto& row : table.rows) emit(row);
  return out;
}

std::string render_markdown(const Table& table, const std::vector<std::string>& config) {
  std::vector<std::size_t> width(table.columns.size(), 3);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    width[c] = std::max(width[c], table.columns[c].size());
    for (const auto& row : table.rows) {
      if (c < row.size()) width[c] = std::max(width[c], row[c].size());
    }
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  std::string out = "# " + table.title + "\n\n|";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += " " + pad(table.columns[c], width[c]) + " |";
  out += "\n|";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += std::string(width[c] + 2, '-') + "|";
  out += '\n';
  for (const auto& row : table.rows) {
    out += '|';
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out += " " + pad(c < row.size() ? row[c] : std::string(), width[c]) + " |";
    }
    out += '\n';
  }
  out += "\n## Configuration\n\n```\n";
  for (const auto& line : config) out += line + "\n";
  out += "```\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorKind::io, "write failed: " + path.string());
}

void write_report(const std::filesystem::path& prefix, const Table& table,
                  const std::vector<std::string>& config) {
  write_text(prefix.string() + ".csv", render_csv(table, config));
  write_text(prefix.string() + ".md", render_markdown(table, config));
}

std::string percent(double fraction) {
  if (!std::isfinite(fraction)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

}  // namespace caslgp::cli
