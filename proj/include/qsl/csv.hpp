#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qsl {

// Numeric table with provenance comments, rendered as CSV with '#' comment
// lines, LF endings, and %.12g values. Contains no timestamps, so equal
// tables render to equal bytes.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  int unconverged = 0;
};

std::string to_csv(const CsvTable& table);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace qsl
