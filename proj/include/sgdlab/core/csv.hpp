#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sgdlab::csv {

/// Formats a double with 17 significant digits ("%.17g"), so values round-trip.
std::string format_double(double value);

/// Quotes a field per RFC 4180 when it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

/// Minimal RFC 4180 writer: CRLF record separators, mandatory header.
class Writer {
 public:
  Writer(std::ostream& out, const std::vector<std::string>& header);

  Writer& field(double value);
  Writer& field(long long value);
  Writer& field(int value) { return field(static_cast<long long>(value)); }
  Writer& field(std::size_t value) { return field(static_cast<long long>(value)); }
  Writer& field(std::string_view text);
  void end_row();

  std::size_t columns() const noexcept { return columns_; }

 private:
  void separator();
  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

}  // namespace sgdlab::csv
