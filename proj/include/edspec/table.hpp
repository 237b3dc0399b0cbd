#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace edspec {

enum class TableFormat { csv, json };

/// Rectangular column store with a metadata header. CSV output renders
/// doubles with 17 significant digits so a write/read round trip is
/// value-exact.
class ResultTable {
 public:
  using Column = std::variant<std::vector<double>, std::vector<std::int64_t>>;

  void add_column(std::string name, std::vector<double> values);
  void add_column(std::string name, std::vector<std::int64_t> values);
  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const Column& column(std::size_t i) const { return columns_[i]; }
  const std::vector<double>& doubles(const std::string& name) const;
  const std::map<std::string, std::string>& meta() const { return meta_; }

  void write(const std::filesystem::path& path, TableFormat format) const;
  static ResultTable read_csv(const std::filesystem::path& path);

 private:
  void check_rows(std::size_t n);

  std::vector<std::string> names_;
  std::vector<Column> columns_;
  std::map<std::string, std::string> meta_;
  std::size_t rows_ = 0;
  bool empty_ = true;
};

/// %.17g rendering used for every double written to disk.
std::string format_double(double value);

}  // namespace edspec
