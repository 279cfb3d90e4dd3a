#include "sgdlab/core/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace sgdlab::csv {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Writer::Writer(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("csv header must not be empty");
  for (const auto& h : header) field(std::string_view(h));
  end_row();
}

void Writer::separator() {
  if (in_row_ == columns_) throw std::logic_error("csv row has too many fields");
  if (in_row_ > 0) out_ << ',';
  ++in_row_;
}

Writer& Writer::field(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

Writer& Writer::field(long long value) {
  separator();
  out_ << value;
  return *this;
}

Writer& Writer::field(std::string_view text) {
  separator();
  out_ << escape_field(text);
  return *this;
}

void Writer::end_row() {
  if (in_row_ != columns_) throw std::logic_error("csv row has too few fields");
  out_ << "\r\n";
  in_row_ = 0;
}

}  // namespace sgdlab::csv
