#pragma once

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gridwar/common.hpp"

namespace gridwar::csv {

// ---- formatting -----------------------------------------------------------

// Shortest round-trip representation; keeps CSV/JSON output byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline bool needs_quoting(const std::string& field, char delim) {
    return field.find(delim) != std::string::npos || field.find('"') != std::string::npos ||
           field.find('\n') != std::string::npos || field.find('\r') != std::string::npos;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& cells,
                      char delim = ',') {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << delim;
        if (needs_quoting(cells[i], delim)) {
            out << '"';
            for (char c : cells[i]) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << cells[i];
        }
    }
    out << '\n';
}

// ---- parsing --------------------------------------------------------------

// Splits one physical line into fields. Quoted fields may contain the
// delimiter and doubled quotes; embedded newlines are not supported (the
// play-by-play exports this consumes are strictly line-oriented).
inline std::vector<std::string> split_line(const std::string& line, char delim = ',') {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == delim) {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line per row

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }

    int require_column(const std::string& name) const {
        int idx = column(name);
        if (idx < 0) throw ValidationError("missing required column '" + name + "'");
        return idx;
    }
};

inline Table read_table(std::istream& in, char delim = ',') {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            t.header = split_line(line, delim);
            have_header = true;
            continue;
        }
        if (line.empty()) continue;
        t.rows.push_back(split_line(line, delim));
        t.line_numbers.push_back(lineno);
    }
    if (!have_header) throw ValidationError("input has no header row");
    return t;
}

inline Table read_table_file(const std::string& path, char delim = ',') {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return read_table(in, delim);
}

// Field conversions used by the ingest layer; failures carry the field name
// so rejections are self-explanatory.
inline int parse_int(const std::string& s, const std::string& field) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ValidationError("field '" + field + "': invalid integer '" + s + "'");
    return v;
}

inline double parse_double(const std::string& s, const std::string& field) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ValidationError("field '" + field + "': invalid number '" + s + "'");
    return v;
}

inline bool parse_bool(const std::string& s, const std::string& field) {
    if (s == "1" || s == "true" || s == "TRUE" || s == "True") return true;
    if (s == "0" || s == "false" || s == "FALSE" || s == "False") return false;
    throw ValidationError("field '" + field + "': invalid boolean '" + s + "'");
}

// ---- atomic output --------------------------------------------------------

// Writes to <path>.tmp.<pid> then renames, so readers never observe a
// half-written file and a crash leaves the previous version intact.
inline void atomic_write(const std::string& path,
                         const std::function<void(std::ostream&)>& producer) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InternalError("cannot open temporary file '" + tmp.string() + "'");
        producer(out);
        out.flush();
        if (!out) throw InternalError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InternalError("rename to '" + path + "' failed: " + ec.message());
    }
}

}  // namespace gridwar::csv
