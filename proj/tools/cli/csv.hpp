#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace gaussmink::cli {

/// Locale-independent shortest-round-trip-safe formatting ("%.17g").
std::string format_double(double x);

/// Minimal RFC-4180 writer: header row, '.' decimal point, fields quoted only
/// when they contain a separator, quote or newline.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace gaussmink::cli
