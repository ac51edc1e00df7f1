#include "fgt/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fgt/error.hpp"

namespace fgt::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct Writer::Impl {
  std::ofstream out;
};

Writer::Writer(const std::filesystem::path& path) : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->out) throw ModelError("cannot open for writing: " + path.string());
}

Writer::~Writer() { delete impl_; }

namespace {
void write_line(std::ofstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}
}  // namespace

void Writer::header(const std::vector<std::string>& columns) {
  write_line(impl_->out, columns);
}

void Writer::row(const std::vector<std::string>& cells) {
  write_line(impl_->out, cells);
}

void Writer::row_numeric(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  write_line(impl_->out, cells);
}

int Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open for reading: " + path.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };

  Table table;
  std::string line;
  if (!std::getline(in, line)) throw ModelError("empty csv: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.columns = split(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    table.rows.push_back(split(line));
  }
  return table;
}

}  // namespace fgt::csv
