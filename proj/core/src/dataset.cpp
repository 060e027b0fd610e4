#include "twintt/dataset.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace twintt {

namespace {

// Split one CSV record, honouring double-quoted fields.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) {
    throw DataError("csv: unterminated quoted field at line " + std::to_string(line_no));
  }
  fields.push_back(current);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t line_no, std::size_t col_no) {
  const std::string cell = trim(raw);
  if (cell.empty()) {
    throw DataError("csv: missing value at line " + std::to_string(line_no) + ", column " +
                    std::to_string(col_no));
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(v)) {
    throw DataError("csv: non-numeric or non-finite cell '" + cell + "' at line " +
                    std::to_string(line_no) + ", column " + std::to_string(col_no));
  }
  return v;
}

}  // namespace

bool Dataset::has_column(const std::string& name) const {
  for (const auto& n : column_names) {
    if (n == name) return true;
  }
  return false;
}

const std::vector<double>& Dataset::column(const std::string& name) const {
  for (std::size_t i = 0; i < column_names.size(); ++i) {
    if (column_names[i] == name) return columns[i];
  }
  throw DataError("dataset: no column named '" + name + "'");
}

void Dataset::add_column(std::string name, std::vector<double> values) {
  if (!columns.empty() && values.size() != n_rows()) {
    throw std::invalid_argument("dataset: column length mismatch");
  }
  column_names.push_back(std::move(name));
  columns.push_back(std::move(values));
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open '" + path + "'");
  return read_csv(in, path);
}

Dataset read_csv(std::istream& in, const std::string& source_name) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      for (auto& name : split_record(line, line_no)) {
        data.column_names.push_back(trim(name));
      }
      data.columns.resize(data.column_names.size());
      continue;
    }
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const auto fields = split_record(line, line_no);
    if (fields.size() != data.column_names.size()) {
      throw DataError("csv: line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(data.column_names.size()) + " (" + source_name + ")");
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      data.columns[c].push_back(parse_cell(fields[c], line_no, c + 1));
    }
  }
  if (line_no == 0) throw DataError("csv: '" + source_name + "' is empty");
  return data;
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write '" + path + "'");
  write_csv(data, out);
}

void write_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t c = 0; c < data.column_names.size(); ++c) {
    out << (c ? "," : "") << data.column_names[c];
  }
  out << '\n';
  const std::size_t rows = data.n_rows();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < data.columns.size(); ++c) {
      out << (c ? "," : "") << format_double(data.columns[c][r]);
    }
    out << '\n';
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

}  // namespace twintt
