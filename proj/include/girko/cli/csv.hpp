#pragma once

// RFC-4180 tables: comma separated, LF line endings, '.' decimal point and
// 17 significant digits so doubles survive a round trip.

#include <cstdint>
#include <string>
#include <vector>

namespace girko::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

std::string format_double(double x);
std::string format_int(std::uint64_t x);
std::string format_bool(bool b);

/// Quotes a field when it holds a comma, quote, CR or LF.
std::string quote_field(const std::string& field);

std::string to_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);

/// Throws IoError when the file cannot be written or read.
void write_csv(const CsvTable& t, const std::string& path);
CsvTable read_csv(const std::string& path);

}  // namespace girko::cli
