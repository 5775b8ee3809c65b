#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bppr {

// A CSV file held as strings; typing happens in prepare_dataset/encode_inputs.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t num_rows() const { return rows.size(); }
  // Index of `name` in the header, or -1.
  int column_index(const std::string& name) const;
  // Throws SchemaError naming the column when absent.
  int require_column(const std::string& name) const;
};

RawTable read_csv(std::istream& in);
RawTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const RawTable& table);
void write_csv_file(const std::string& path, const RawTable& table);

// Shortest text that parses back to the identical double.
std::string format_double(double value);
// Throws InputError on anything but a complete finite number.
double parse_double(const std::string& text, const std::string& context);

}  // namespace bppr
