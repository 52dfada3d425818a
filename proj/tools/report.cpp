#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace cavmode::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Check check_le(const std::string& name, double value, double bound) {
  return {name, value, bound, "<=", value <= bound};
}

Check check_ge(const std::string& name, double value, double bound) {
  return {name, value, bound, ">=", value >= bound};
}

Json checks_to_json(const std::vector<Check>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["name"] = c.name;
    j["value"] = c.value;
    j["relation"] = c.relation;
    j["tolerance"] = c.bound;
    j["pass"] = c.pass;
    arr.push_back(j);
  }
  return arr;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& columns)
    : file_(nullptr), n_columns_(columns.size()) {
  file_ = std::fopen(path.string().c_str(), "wb");
  if (!file_) throw IoError("cannot open " + path.string() + " for writing");
  std::string header;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) header += ',';
    header += columns[i];
  }
  header += '\n';
  std::fwrite(header.data(), 1, header.size(), file_);
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_columns_)
    throw IoError("CsvWriter: column count mismatch");
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_double(values[i]);
  }
  line += '\n';
  std::fwrite(line.data(), 1, line.size(), file_);
}

void CsvWriter::raw_row(const std::string& line) {
  std::fwrite(line.data(), 1, line.size(), file_);
  std::fwrite("\n", 1, 1, file_);
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

void write_matrix_csv_axes(const std::filesystem::path& path,
                           const Eigen::VectorXd& axis_rows,
                           const Eigen::VectorXd& axis_cols,
                           const Eigen::MatrixXcd& values,
                           const std::string& row_name,
                           const std::string& col_name) {
  CsvWriter csv(path, {row_name, col_name, "re", "im", "abs"});
  for (int r = 0; r < values.rows(); ++r)
    for (int c = 0; c < values.cols(); ++c) {
      const auto v = values(r, c);
      csv.row({axis_rows[r], axis_cols[c], v.real(), v.imag(), std::abs(v)});
    }
}

void write_matrix_csv_bins(const std::filesystem::path& path,
                           const std::vector<int>& row_labels,
                           const std::vector<int>& col_labels,
                           const Eigen::MatrixXcd& values,
                           const std::string& row_name,
                           const std::string& col_name) {
  CsvWriter csv(path, {row_name, col_name, "re", "im"});
  for (int r = 0; r < values.rows(); ++r)
    for (int c = 0; c < values.cols(); ++c) {
      const auto v = values(r, c);
      csv.raw_row(std::to_string(row_labels[r]) + ',' +
                  std::to_string(col_labels[c]) + ',' +
                  format_double(v.real()) + ',' + format_double(v.imag()));
    }
}

} // namespace cavmode::cli
