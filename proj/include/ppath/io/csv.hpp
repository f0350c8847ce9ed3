#ifndef PPATH_IO_CSV_HPP
#define PPATH_IO_CSV_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ppath::io {

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// RFC 4180 quoting: fields holding a comma, quote or newline are quoted.
std::string csv_escape(const std::string& field);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header);

  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(unsigned long long value);
  CsvWriter& empty();
  void end_row();

 private:
  void sep();

  std::filesystem::path file_;
  std::ofstream out_;
  bool row_started_ = false;
};

}  // namespace ppath::io

#endif  // PPATH_IO_CSV_HPP
