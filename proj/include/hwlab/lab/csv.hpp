#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hwlab/error.hpp"
#include "hwlab/lab/config.hpp"

namespace hwlab::lab {

/// CSV with a "# config_hash=" comment line, a header row, and %.16e numbers.
/// Rows are flushed as they are written so partial output survives a failure.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> columns, std::uint64_t hash)
      : out_(path, std::ios::trunc), ncol_(columns.size()) {
    if (!out_) throw NumericalError("cannot open CSV for writing: " + path);
    out_ << "# config_hash=" << hash_hex(hash) << "\n";
    for (std::size_t k = 0; k < columns.size(); ++k) out_ << (k ? "," : "") << columns[k];
    out_ << "\n";
    out_.flush();
  }

  void row(const std::vector<double>& values) {
    require(values.size() == ncol_, "CSV row has the wrong number of columns");
    char buf[32];
    for (std::size_t k = 0; k < values.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.16e", values[k]);
      out_ << (k ? "," : "") << buf;
    }
    out_ << "\n";
    out_.flush();
  }

 private:
  std::ofstream out_;
  std::size_t ncol_;
};

}  // namespace hwlab::lab
