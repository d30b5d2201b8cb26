#include "twedge/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "twedge/errors.hpp"

namespace twedge {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \r") - first + 1);
}

// Splits on the first of ',', ';' or tab present in the line, otherwise on
// runs of spaces. Empty fields between hard delimiters are an error.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  const auto hard = line.find_first_of(",;\t");
  if (hard == std::string::npos) {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) fields.push_back(tok);
    return fields;
  }
  if (trim(line).empty()) return fields;
  const char delim = line[hard];
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(delim, start);
    const std::string field = trim(line.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (field.empty()) throw ConfigError("empty field in matrix row: '" + line + "'");
    fields.push_back(field);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return fields;
}

double parse_double(const std::string& field) {
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(field, &used);
    if (used != field.size()) throw ConfigError("not a number: '" + field + "'");
  } catch (const std::logic_error&) {
    throw ConfigError("not a number: '" + field + "'");
  }
  return value;
}

int parse_dim(const std::string& field) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || value < 1)
    throw ConfigError("matrix header must hold two positive integers, got '" + field + "'");
  return value;
}

}  // namespace

Eigen::MatrixXd read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("matrix file is empty");
  const auto header = split_fields(line);
  if (header.size() != 2) throw ConfigError("matrix header must be 'M,N', got '" + line + "'");
  const int m = parse_dim(header[0]);
  const int n = parse_dim(header[1]);

  Eigen::MatrixXd data(m, n);
  int row = 0;
  while (std::getline(in, line)) {
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (row >= m) throw ConfigError("matrix file has more than M = " + std::to_string(m) + " rows");
    if (static_cast<int>(fields.size()) != n)
      throw ConfigError("row " + std::to_string(row + 1) + " has " + std::to_string(fields.size()) +
                        " values, expected N = " + std::to_string(n));
    for (int j = 0; j < n; ++j) data(row, j) = parse_double(fields[j]);
    ++row;
  }
  if (row != m)
    throw ConfigError("matrix file has " + std::to_string(row) + " rows, expected M = " +
                      std::to_string(m));
  return data;
}

Eigen::MatrixXd read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file " + path.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& data) {
  out << data.rows() << ',' << data.cols() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) out << ',';
      out << data(i, j);
    }
    out << '\n';
  }
}

}  // namespace twedge
