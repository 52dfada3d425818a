#ifndef CAVMODE_TOOLS_REPORT_HPP
#define CAVMODE_TOOLS_REPORT_HPP

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace cavmode::cli {

// I/O failure distinct from parameter/numerical errors (CLI exit code 3)
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

// deterministic full-precision decimal form of a double
std::string format_double(double v);

// One tolerance-checked result destined for metrics.json.
struct Check {
  std::string name;
  double value = 0;
  double bound = 0;
  std::string relation; // "<=", ">=", "=="
  bool pass = false;
};

Check check_le(const std::string& name, double value, double bound);
Check check_ge(const std::string& name, double value, double bound);

Json checks_to_json(const std::vector<Check>& checks);
bool all_pass(const std::vector<Check>& checks);

// plain UTF-8, '.' decimals, header row, 17 significant digits
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& columns);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  void raw_row(const std::string& line);

private:
  std::FILE* file_;
  std::size_t n_columns_;
};

void write_json(const std::filesystem::path& path, const Json& doc);

// jsf.csv: omega_s, omega_i, re, im, abs
void write_matrix_csv_axes(const std::filesystem::path& path,
                           const Eigen::VectorXd& axis_rows,
                           const Eigen::VectorXd& axis_cols,
                           const Eigen::MatrixXcd& values,
                           const std::string& row_name,
                           const std::string& col_name);

// transfer_*.csv / unitary.csv: integer row/col labels, re, im
void write_matrix_csv_bins(const std::filesystem::path& path,
                           const std::vector<int>& row_labels,
                           const std::vector<int>& col_labels,
                           const Eigen::MatrixXcd& values,
                           const std::string& row_name,
                           const std::string& col_name);

} // namespace cavmode::cli

#endif // CAVMODE_TOOLS_REPORT_HPP
