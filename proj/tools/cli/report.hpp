#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace caslgp::cli {

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Config lines as `# key=value` comments, then the header and rows.
std::string render_csv(const Table& table, const std::vector<std::string>& config);
/// Title, aligned pipe table, then the config in a fenced block.
std::string render_markdown(const Table& table, const std::vector<std::string>& config);

/// Writes `<prefix>.csv` and `<prefix>.md`. Io error naming the path on failure.
void write_report(const std::filesystem::path& prefix, const Table& table,
                  const std::vector<std::string>& config);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Percent with two decimals, "n/a" for NaN.
std::string percent(double fraction);

}  // namespace caslgp::cli
