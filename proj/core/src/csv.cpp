#include "socon/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "socon/common.hpp"

namespace socon::csv {

std::string escape(const std::string& field) {
    bool needs_quote = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quote = true;
            break;
        }
    }
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Writer& Writer::field(const std::string& value) {
    return raw_field(escape(value));
}

Writer& Writer::field(double value) {
    return raw_field(format_double(value));
}

Writer& Writer::field(long long value) {
    return raw_field(std::to_string(value));
}

Writer& Writer::raw_field(const std::string& value) {
    if (row_started_) out_ << ',';
    out_ << value;
    row_started_ = true;
    return *this;
}

void Writer::end_row() {
    out_ << '\n';
    row_started_ = false;
}

std::vector<Row> read_all(std::istream& in) {
    std::vector<Row> rows;
    std::string field;
    Row current;
    std::size_t line = 1;
    current.line_number = 1;
    bool in_quotes = false;
    bool row_has_content = false;

    auto push_field = [&] {
        current.fields.push_back(field);
        field.clear();
    };
    auto push_row = [&] {
        push_field();
        rows.push_back(std::move(current));
        current = Row{};
        current.line_number = line;
        row_has_content = false;
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                push_field();
                row_has_content = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                if (row_has_content || !field.empty() || !current.fields.empty()) {
                    push_row();
                } else {
                    current.line_number = line;
                }
                break;
            default:
                field += c;
                row_has_content = true;
        }
    }
    if (in_quotes) throw ValidationError("csv: unterminated quoted field near line " + std::to_string(line));
    if (row_has_content || !field.empty() || !current.fields.empty()) push_row();
    return rows;
}

std::vector<Row> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    return read_all(in);
}

double parse_double(const std::string& s, const std::string& what, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
        throw ValidationError("row " + std::to_string(line) + ": bad " + what + " value '" + s + "'");
    }
    return value;
}

long long parse_int(const std::string& s, const std::string& what, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const long long value = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
        throw ValidationError("row " + std::to_string(line) + ": bad " + what + " value '" + s + "'");
    }
    return value;
}

}  // namespace socon::csv
