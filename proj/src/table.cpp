#include "edspec/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "edspec/errors.hpp"

namespace edspec {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void ResultTable::check_rows(std::size_t n) {
  if (empty_) {
    rows_ = n;
    empty_ = false;
  } else if (n != rows_) {
    throw std::invalid_argument("ResultTable: column length mismatch");
  }
}

void ResultTable::add_column(std::string name, std::vector<double> values) {
  check_rows(values.size());
  names_.push_back(std::move(name));
  columns_.emplace_back(std::move(values));
}

void ResultTable::add_column(std::string name, std::vector<std::int64_t> values) {
  check_rows(values.size());
  names_.push_back(std::move(name));
  columns_.emplace_back(std::move(values));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  meta_[key] = value;
}

void ResultTable::set_meta(const std::string& key, double value) {
  meta_[key] = format_double(value);
}

const std::vector<double>& ResultTable::doubles(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) {
      if (const auto* d = std::get_if<std::vector<double>>(&columns_[i])) {
        return *d;
      }
      throw std::invalid_argument("ResultTable: column is not double: " + name);
    }
  }
  throw std::invalid_argument("ResultTable: no such column: " + name);
}

void ResultTable::write(const std::filesystem::path& path,
                        TableFormat format) const {
  std::ofstream out(path);
  if (!out) throw computation_error("cannot open for writing: " + path.string());

  if (format == TableFormat::csv) {
    for (const auto& [k, v] : meta_) out << "# " << k << "=" << v << "\n";
    for (std::size_t c = 0; c < names_.size(); ++c) {
      out << (c ? "," : "") << names_[c];
    }
    out << "\n";
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) out << ",";
        if (const auto* d = std::get_if<std::vector<double>>(&columns_[c])) {
          out << format_double((*d)[r]);
        } else {
          out << std::get<std::vector<std::int64_t>>(columns_[c])[r];
        }
      }
      out << "\n";
    }
  } else {
    nlohmann::json doc;
    doc["metadata"] = meta_;
    nlohmann::json cols = nlohmann::json::object();
    for (std::size_t c = 0; c < names_.size(); ++c) {
      if (const auto* d = std::get_if<std::vector<double>>(&columns_[c])) {
        cols[names_[c]] = *d;
      } else {
        cols[names_[c]] = std::get<std::vector<std::int64_t>>(columns_[c]);
      }
    }
    doc["columns"] = cols;
    out << doc.dump(2) << "\n";
  }
  if (!out) throw computation_error("write failed: " + path.string());
}

ResultTable ResultTable::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw computation_error("cannot open for reading: " + path.string());
  ResultTable table;
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<double>> data;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        while (!key.empty() && key.front() == ' ') key.erase(key.begin());
        table.set_meta(key, line.substr(eq + 1));
      }
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!have_header) {
      while (std::getline(ss, cell, ',')) names.push_back(cell);
      data.resize(names.size());
      have_header = true;
      continue;
    }
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= data.size()) throw computation_error("read_csv: ragged row in " + path.string());
      data[c++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (c != data.size()) throw computation_error("read_csv: short row in " + path.string());
  }
  for (std::size_t c = 0; c < names.size(); ++c) {
    table.add_column(names[c], std::move(data[c]));
  }
  return table;
}

}  // namespace edspec
