#pragma once

// CSV output helpers. Numbers are written with 17 significant digits so
// re-running a configuration reproduces artifacts byte for byte.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "nplap/core.hpp"

namespace nplap {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path) {
    if (!out_) throw error("cannot open '" + path + "' for writing");
    for (size_t k = 0; k < header.size(); ++k)
      out_ << (k ? "," : "") << header[k];
    out_ << "\n";
  }

  void row(const std::vector<double>& values) {
    for (size_t k = 0; k < values.size(); ++k)
      out_ << (k ? "," : "") << fmt17(values[k]);
    out_ << "\n";
  }

private:
  std::ofstream out_;
};

}  // namespace nplap
