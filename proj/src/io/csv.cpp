#include "ppath/io/csv.hpp"

#include <charconv>

#include "ppath/error.hpp"

namespace ppath::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CsvWriter::CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header)
    : file_(file), out_(file, std::ios::trunc) {
  if (!out_) throw Error(ErrorKind::Io, "cannot open " + file.string() + " for writing");
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::sep() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  sep();
  out_ << csv_escape(text);
  return *this;
}

CsvWriter& CsvWriter::cell(double value) {
  sep();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  sep();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long value) {
  sep();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::empty() {
  sep();
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
  if (!out_) throw Error(ErrorKind::Io, "failed writing " + file_.string());
}

}  // namespace ppath::io
