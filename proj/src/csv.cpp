#include "qsl/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsl {

std::string to_csv(const CsvTable& table) {
  if (table.columns.empty()) throw std::invalid_argument("csv table has no columns");
  std::string out;
  for (const std::string& comment : table.comments) {
    out += "# " + comment + "\n";
  }
  for (size_t j = 0; j < table.columns.size(); ++j) {
    if (j > 0) out += ",";
    out += table.columns[j];
  }
  out += "\n";
  char buffer[48];
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const std::vector<double>& row = table.rows[i];
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("csv row " + std::to_string(i + 1) + " has " +
                                  std::to_string(row.size()) + " values, expected " +
                                  std::to_string(table.columns.size()));
    }
    for (size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += ",";
      std::snprintf(buffer, sizeof buffer, "%.12g", row[j]);
      out += buffer;
    }
    out += "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(text.data(), std::streamsize(text.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace qsl
