#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace twintt {

/// Error in user-supplied data (missing files, malformed cells, unknown
/// columns). The CLI maps this to its data-error exit status.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Column-oriented numeric table. All columns have equal length and contain
/// only finite values; both properties are enforced at ingestion.
struct Dataset {
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> columns;

  std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }
  std::size_t n_cols() const { return columns.size(); }

  bool has_column(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;
  void add_column(std::string name, std::vector<double> values);
};

/// RFC-4180-style CSV with a mandatory header row; LF or CRLF line endings;
/// decimal-point reals. Rows with missing or non-numeric cells are rejected
/// with the offending line and column in the message.
Dataset read_csv(const std::string& path);
Dataset read_csv(std::istream& in, const std::string& source_name);

/// LF line endings, 15-significant-digit numeric output.
void write_csv(const Dataset& data, const std::string& path);
void write_csv(const Dataset& data, std::ostream& out);

/// Fixed numeric-to-text policy used everywhere output must be reproducible.
std::string format_double(double v);

}  // namespace twintt
