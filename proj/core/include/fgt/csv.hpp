#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fgt::csv {

/// Formats a double with "%.10g" so repeated runs emit identical bytes.
std::string format_double(double v);

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);
  ~Writer();

  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void row_numeric(const std::vector<double>& values);

 private:
  struct Impl;
  Impl* impl_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
};

/// Reads a comma-separated file with a header row. No quoting support; the
/// bench formats never emit quoted cells.
Table read(const std::filesystem::path& path);

}  // namespace fgt::csv
