#pragma once

#include <filesystem>
#include <istream>

#include <Eigen/Dense>

namespace twedge {

/// Reads a real data matrix. The first line holds the two integers "M,N";
/// each of the following M lines holds the N values of one coordinate.
/// Values may be separated by commas, semicolons, tabs or spaces. Throws
/// ConfigError on a malformed header, a non-numeric value, or rows that are
/// not exactly M x N.
Eigen::MatrixXd read_matrix(std::istream& in);
Eigen::MatrixXd read_matrix_file(const std::filesystem::path& path);

/// Writes the same format with comma separators.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& data);

}  // namespace twedge
