#include "trustsim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace trustsim {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string format_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string("NA");
}

namespace {
template <typename Seq>
std::size_t write_header(std::ostream& out, const Seq& header) {
  std::size_t n = 0;
  for (const auto& h : header) {
    if (n++ > 0) out << ',';
    out << h;
  }
  out << '\n';
  return n;
}
}  // namespace

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out), columns_(write_header(out, header)) {}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(write_header(out, header)) {}

void CsvWriter::put(std::string_view cell) {
  if (cell_ >= columns_) throw std::logic_error("csv row has too many cells");
  if (cell_++ > 0) out_ << ',';
  out_ << cell;
}

CsvWriter& CsvWriter::operator<<(double v) {
  put(format_real(v));
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::optional<double>& v) {
  put(format_real(v));
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::int64_t v) {
  put(std::to_string(v));
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::uint64_t v) {
  put(std::to_string(v));
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::string_view v) {
  put(v);
  return *this;
}

void CsvWriter::end_row() {
  if (cell_ != columns_) throw std::logic_error("csv row has too few cells");
  out_ << '\n';
  cell_ = 0;
}

}  // namespace trustsim
