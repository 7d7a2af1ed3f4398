#pragma once

#include "enroll/tabular/dataset.hpp"

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace enroll::tabular {

namespace csv {

struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0; // 1-based physical line where the record starts
};

// RFC-4180 reader: quoted fields may hold commas, doubled quotes and line
// breaks; CRLF and LF both end records; a leading UTF-8 BOM is skipped and
// blank lines are ignored.
std::vector<Record> parse(std::string_view text);

std::string format_field(std::string_view field);
std::string format_record(const std::vector<std::string>& fields);

} // namespace csv

// Header-first CSV to Dataset. Header names must match the schema's column
// names as a set; cell order follows the schema.
Dataset parse_csv(std::string_view text, const Schema& schema);
Dataset parse_csv(std::istream& in, const Schema& schema);
Dataset read_csv_file(const std::string& path, const Schema& schema);

// Header in schema order, Missing written as the column's missing marker.
std::string to_csv(const Dataset& ds);
void write_csv_file(const std::string& path, const Dataset& ds);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

} // namespace enroll::tabular
