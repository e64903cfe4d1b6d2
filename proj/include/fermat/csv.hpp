#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "fermat/point_cloud.hpp"

namespace fermat {

// Shortest round-trip decimal formatting: parsing the result reproduces the
// exact double, so CSV round trips are bit-faithful.
std::string format_double(double value);

// Strict full-token parse; reports the file/line context on failure.
double parse_double(std::string_view token, const std::string& context);
long parse_integer(std::string_view token, const std::string& context);

// Point CSV: one row per point, comma-separated decimals, optional header
// row (detected by a non-numeric first line). Rows must all have the same
// width; malformed rows are reported with their line number.
PointCloud load_csv_points(const std::string& path);
void write_csv_points(const PointCloud& cloud, const std::string& path);

// Label CSV: one integer per row, optional header. Labels must be >= 0.
std::vector<int> load_csv_labels(const std::string& path);
void write_csv_labels(const std::vector<int>& labels, const std::string& path);

// Fully labeled dataset from a points file and an aligned labels file.
// Reports max(label)+1 classes.
LabeledDataset load_csv_dataset(const std::string& points_path,
                                const std::string& labels_path);

// Headerless numeric matrix (used for distance-matrix and embedding files).
Eigen::MatrixXd load_csv_matrix(const std::string& path);
void write_csv_matrix(const Eigen::MatrixXd& matrix, const std::string& path);

}  // namespace fermat
