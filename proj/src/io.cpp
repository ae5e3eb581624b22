#include "pairbet/io.hpp"

#include <charconv>
#include <fstream>
#include <string_view>
#include <vector>

namespace pairbet {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto pos = line.find(delimiter);
    if (pos == std::string_view::npos) {
      fields.push_back(line);
      return fields;
    }
    fields.push_back(line.substr(0, pos));
    line.remove_prefix(pos + 1);
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<double> read_column(const InputSpec& spec) {
  std::ifstream file(spec.path);
  if (!file) throw usage_error("cannot open input file '" + spec.path + "'");

  std::string line;
  std::size_t line_number = 0;
  std::size_t column_index = 0;
  bool column_resolved = false;

  // A plain integer selects by position; anything else is a header name and
  // requires skip_header.
  {
    std::size_t parsed = 0;
    const auto text = std::string_view(spec.column);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
    if (ec == std::errc{} && ptr == text.data() + text.size()) {
      column_index = parsed;
      column_resolved = true;
    } else if (!spec.skip_header) {
      throw usage_error("column '" + spec.column +
                        "' is not an index and no header row was requested");
    }
  }

  if (spec.skip_header) {
    if (!std::getline(file, line))
      throw parse_error(spec.path + ": empty file, expected a header row");
    ++line_number;
    if (!column_resolved) {
      const auto fields = split_fields(line, spec.delimiter);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (trim(fields[i]) == spec.column) {
          column_index = i;
          column_resolved = true;
          break;
        }
      }
      if (!column_resolved)
        throw usage_error("column '" + spec.column + "' not found in header of " +
                          spec.path);
    }
  }

  std::vector<double> values;
  while (std::getline(file, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, spec.delimiter);
    if (column_index >= fields.size())
      throw parse_error(spec.path + ":" + std::to_string(line_number) +
                        ": row has " + std::to_string(fields.size()) +
                        " fields, column " + std::to_string(column_index) +
                        " requested");
    const auto field = trim(fields[column_index]);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      throw parse_error(spec.path + ":" + std::to_string(line_number) +
                        ": cannot parse '" + std::string(field) + "' as a number");
    if (spec.kind == InputSpec::Kind::binary && value != 0.0 && value != 1.0)
      throw parse_error(spec.path + ":" + std::to_string(line_number) +
                        ": value '" + std::string(field) +
                        "' is not binary (expected 0 or 1)");
    values.push_back(value);
  }
  if (values.empty())
    throw parse_error(spec.path + ": no data rows");
  return values;
}

}  // namespace pairbet
