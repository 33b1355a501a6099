#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace socon::csv {

// Minimal RFC-4180-style CSV handling: quoted fields, embedded commas,
// doubled quotes, CR/LF line endings. Good enough for the file formats the
// harness reads and writes; not a general-purpose parser.

std::string escape(const std::string& field);

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}
    Writer& field(const std::string& value);
    Writer& field(double value);           // written with %.17g (round-trippable)
    Writer& field(long long value);
    Writer& raw_field(const std::string& value);  // no escaping
    void end_row();

private:
    std::ostream& out_;
    bool row_started_ = false;
};

struct Row {
    std::vector<std::string> fields;
    std::size_t line_number = 0;  // 1-based, points at the row's first line
};

// Reads the whole stream. Throws ValidationError on unterminated quotes.
std::vector<Row> read_all(std::istream& in);
std::vector<Row> read_file(const std::string& path);

double parse_double(const std::string& s, const std::string& what, std::size_t line);
long long parse_int(const std::string& s, const std::string& what, std::size_t line);

std::string format_double(double value);  // %.17g

}  // namespace socon::csv
