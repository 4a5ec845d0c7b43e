#include "qsl/matrix_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsl {

namespace {

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const char* last = text.data() + text.size();
  const auto result = std::from_chars(text.data(), last, out);
  return result.ec == std::errc() && result.ptr == last;
}

// Index of the sign that separates the real and imaginary parts, or npos.
// A sign right after 'e'/'E' belongs to an exponent, and a leading sign
// belongs to the real part.
size_t split_position(std::string_view body) {
  for (size_t k = body.size(); k-- > 1;) {
    const char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      return k;
    }
  }
  return std::string_view::npos;
}

[[noreturn]] void fail(std::string_view source, int line, const std::string& message) {
  std::string prefix = source.empty() ? "matrix input" : std::string(source);
  throw std::invalid_argument(prefix + ":" + std::to_string(line) + ": " + message);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

}  // namespace

std::string format_complex(Complex z) {
  char buffer[96];
  std::snprintf(buffer, sizeof buffer, "%.17g%+.17gi", z.real(), z.imag());
  return buffer;
}

Complex parse_complex(std::string_view token) {
  const auto reject = [token] {
    throw std::invalid_argument("cannot parse complex value '" + std::string(token) + "'");
  };
  if (token.empty()) reject();
  double re = 0.0;
  double im = 0.0;
  if (token.back() == 'i') {
    const std::string_view body = token.substr(0, token.size() - 1);
    const size_t split = split_position(body);
    if (split == std::string_view::npos) {
      if (!parse_double(body, im)) reject();
    } else {
      if (!parse_double(body.substr(0, split), re)) reject();
      if (!parse_double(body.substr(split), im)) reject();
    }
  } else {
    if (!parse_double(token, re)) reject();
  }
  return {re, im};
}

std::string write_matrices(std::span<const ComplexMatrix> matrices) {
  std::string out;
  for (const ComplexMatrix& m : matrices) {
    if (!out.empty()) out += "\n";
    out += "# dim " + std::to_string(m.dim()) + "\n";
    for (int i = 0; i < m.dim(); ++i) {
      for (int j = 0; j < m.dim(); ++j) {
        if (j > 0) out += " ";
        out += format_complex(m.at(i, j));
      }
      out += "\n";
    }
  }
  return out;
}

std::vector<ComplexMatrix> parse_matrices(std::string_view text,
                                          std::string_view source_name) {
  std::vector<ComplexMatrix> matrices;

  int dim = 0;
  int row = 0;
  int header_line = 0;
  std::vector<Complex> entries;

  int line_number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t newline = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, newline == std::string_view::npos ? text.size() - pos : newline - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_number;

    const std::vector<std::string_view> fields = split_fields(line);
    const bool comment = !fields.empty() && fields[0].front() == '#';
    const bool header = comment && fields.size() >= 3 && fields[1] == "dim";

    if (header) {
      if (dim != 0) {
        fail(source_name, line_number,
             "new matrix header after " + std::to_string(row) + " of " +
                 std::to_string(dim) + " rows");
      }
      int value = 0;
      const std::string_view digits = fields[2];
      const auto result =
          std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (result.ec != std::errc() || result.ptr != digits.data() + digits.size()) {
        fail(source_name, line_number,
             "cannot parse dimension '" + std::string(digits) + "'");
      }
      if (value < kMinDim || value > kMaxDim) {
        fail(source_name, line_number,
             "dim " + std::to_string(value) + " outside [" +
                 std::to_string(kMinDim) + ", " + std::to_string(kMaxDim) + "]");
      }
      dim = value;
      row = 0;
      header_line = line_number;
      entries.assign(size_t(dim) * size_t(dim), Complex(0.0, 0.0));
    } else if (!fields.empty() && !comment) {
      if (dim == 0) {
        fail(source_name, line_number, "expected '# dim N' header before matrix rows");
      }
      if (int(fields.size()) != dim) {
        fail(source_name, line_number,
             "row has " + std::to_string(fields.size()) + " entries, expected " +
                 std::to_string(dim));
      }
      for (int j = 0; j < dim; ++j) {
        try {
          entries[size_t(row) * size_t(dim) + size_t(j)] = parse_complex(fields[size_t(j)]);
        } catch (const std::invalid_argument&) {
          fail(source_name, line_number,
               "entry " + std::to_string(j + 1) + ": cannot parse '" +
                   std::string(fields[size_t(j)]) + "'");
        }
      }
      if (++row == dim) {
        matrices.emplace_back(dim, entries);
        dim = 0;
        row = 0;
      }
    }

    if (newline == std::string_view::npos) break;
    pos = newline + 1;
  }

  if (dim != 0) {
    fail(source_name, header_line,
         "matrix block ends after " + std::to_string(row) + " of " +
             std::to_string(dim) + " rows");
  }
  return matrices;
}

std::vector<ComplexMatrix> read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrices(buffer.str(), path);
}

void write_matrix_file(const std::string& path,
                       std::span<const ComplexMatrix> matrices) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << write_matrices(matrices);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace qsl
