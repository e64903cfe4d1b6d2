#include "fermat/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace fermat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line,
                                           std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

bool try_parse_double(std::string_view token, double& value) {
  token = trim(token);
  if (token.empty()) return false;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto result = std::from_chars(begin, end, value);
  return result.ec == std::errc() && result.ptr == end;
}

std::vector<std::string> read_nonempty_lines(const std::string& path,
                                             std::vector<std::size_t>& line_numbers) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;  // blank lines (incl. trailing) are skipped
    lines.push_back(line);
    line_numbers.push_back(number);
  }
  return lines;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

double parse_double(std::string_view token, const std::string& context) {
  double value = 0.0;
  if (!try_parse_double(token, value)) {
    throw std::runtime_error(context + ": '" + std::string(token) +
                             "' is not a number");
  }
  return value;
}

long parse_integer(std::string_view token, const std::string& context) {
  token = trim(token);
  long value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto result = std::from_chars(begin, end, value);
  if (token.empty() || result.ec != std::errc() || result.ptr != end) {
    throw std::runtime_error(context + ": '" + std::string(token) +
                             "' is not an integer");
  }
  return value;
}

PointCloud load_csv_points(const std::string& path) {
  std::vector<std::size_t> line_numbers;
  std::vector<std::string> lines = read_nonempty_lines(path, line_numbers);
  if (lines.empty()) throw std::runtime_error(path + ": file has no data rows");

  std::vector<std::string_view> fields;
  std::size_t first_row = 0;
  // Header detection: a first line with any non-numeric field is a header.
  {
    split_fields(lines[0], fields);
    double ignored;
    for (std::string_view f : fields) {
      if (!try_parse_double(f, ignored)) {
        first_row = 1;
        break;
      }
    }
  }
  if (first_row >= lines.size()) {
    throw std::runtime_error(path + ": file has a header but no data rows");
  }

  split_fields(lines[first_row], fields);
  const std::size_t width = fields.size();
  Eigen::MatrixXd points(lines.size() - first_row, width);
  for (std::size_t r = first_row; r < lines.size(); ++r) {
    split_fields(lines[r], fields);
    const std::string context = path + ":" + std::to_string(line_numbers[r]);
    if (fields.size() != width) {
      throw std::runtime_error(context + ": row has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      points(static_cast<Eigen::Index>(r - first_row),
             static_cast<Eigen::Index>(c)) = parse_double(fields[c], context);
    }
  }
  return PointCloud(std::move(points));
}

void write_csv_points(const PointCloud& cloud, const std::string& path) {
  write_csv_matrix(cloud.points(), path);
}

std::vector<int> load_csv_labels(const std::string& path) {
  std::vector<std::size_t> line_numbers;
  std::vector<std::string> lines = read_nonempty_lines(path, line_numbers);
  if (lines.empty()) throw std::runtime_error(path + ": file has no data rows");

  std::size_t first_row = 0;
  {
    double ignored;
    if (!try_parse_double(trim(lines[0]), ignored)) first_row = 1;
  }
  if (first_row >= lines.size()) {
    throw std::runtime_error(path + ": file has a header but no data rows");
  }
  std::vector<int> labels;
  labels.reserve(lines.size() - first_row);
  for (std::size_t r = first_row; r < lines.size(); ++r) {
    const std::string context = path + ":" + std::to_string(line_numbers[r]);
    long value = parse_integer(trim(lines[r]), context);
    if (value < 0) {
      throw std::runtime_error(context + ": labels must be >= 0, got " +
                               std::to_string(value));
    }
    labels.push_back(static_cast<int>(value));
  }
  return labels;
}

void write_csv_labels(const std::vector<int>& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (int label : labels) out << label << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

LabeledDataset load_csv_dataset(const std::string& points_path,
                                const std::string& labels_path) {
  PointCloud cloud = load_csv_points(points_path);
  std::vector<int> labels = load_csv_labels(labels_path);
  if (static_cast<int>(labels.size()) != cloud.size()) {
    throw std::runtime_error(labels_path + ": " + std::to_string(labels.size()) +
                             " labels for " + std::to_string(cloud.size()) +
                             " points in " + points_path);
  }
  int num_classes = 0;
  for (int label : labels) num_classes = std::max(num_classes, label + 1);
  std::vector<int> labeled_idx(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labeled_idx[i] = static_cast<int>(i);
  LabeledDataset data{std::move(cloud), std::move(labels), std::move(labeled_idx),
                      num_classes};
  validate_dataset(data);
  return data;
}

Eigen::MatrixXd load_csv_matrix(const std::string& path) {
  std::vector<std::size_t> line_numbers;
  std::vector<std::string> lines = read_nonempty_lines(path, line_numbers);
  if (lines.empty()) throw std::runtime_error(path + ": file has no data rows");
  std::vector<std::string_view> fields;
  split_fields(lines[0], fields);
  const std::size_t width = fields.size();
  Eigen::MatrixXd matrix(lines.size(), width);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    split_fields(lines[r], fields);
    const std::string context = path + ":" + std::to_string(line_numbers[r]);
    if (fields.size() != width) {
      throw std::runtime_error(context + ": row has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_double(fields[c], context);
    }
  }
  return matrix;
}

void write_csv_matrix(const Eigen::MatrixXd& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  std::string line;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) line += ',';
      line += format_double(matrix(i, j));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace fermat
