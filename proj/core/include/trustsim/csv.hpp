#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace trustsim {

// Fixed formatting so equal values always print identically.
std::string format_real(double v);
std::string format_real(const std::optional<double>& v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(const std::optional<double>& v);
  CsvWriter& operator<<(std::int64_t v);
  CsvWriter& operator<<(std::uint64_t v);
  CsvWriter& operator<<(int v) { return *this << static_cast<std::int64_t>(v); }
  CsvWriter& operator<<(unsigned v) { return *this << static_cast<std::uint64_t>(v); }
  CsvWriter& operator<<(bool v) { return *this << static_cast<std::int64_t>(v ? 1 : 0); }
  CsvWriter& operator<<(std::string_view v);
  CsvWriter& operator<<(const char* v) { return *this << std::string_view(v); }
  CsvWriter& operator<<(const std::string& v) { return *this << std::string_view(v); }

  // Terminates the current row; throws if the column count differs from the header.
  void end_row();

  [[nodiscard]] std::size_t columns() const { return columns_; }

 private:
  void put(std::string_view cell);

  std::ostream& out_;
  std::size_t columns_;
  std::size_t cell_ = 0;
};

}  // namespace trustsim
