#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace gridwar {

inline constexpr int kSchemaVersion = 1;

// Bad input data or configuration: reported on a single line, exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Anything else (solver breakdown, I/O failure mid-write): exit code 2.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inclusive year range.
struct YearWindow {
    int first = 0;
    int last = 0;

    bool contains(int year) const { return year >= first && year <= last; }
    int span() const { return last - first + 1; }
};

// Parses "2010:2019" or a single year "2019".
inline YearWindow parse_year_window(const std::string& text) {
    YearWindow w;
    auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            w.first = w.last = std::stoi(text);
        } else {
            w.first = std::stoi(text.substr(0, colon));
            w.last = std::stoi(text.substr(colon + 1));
        }
    } catch (const std::exception&) {
        throw ValidationError("invalid year window '" + text + "' (expected FIRST:LAST)");
    }
    if (w.first > w.last)
        throw ValidationError("year window '" + text + "' is not well-ordered");
    return w;
}

// Worker-thread cap: GRIDWAR_THREADS if set and positive, else hardware.
inline unsigned thread_limit() {
    if (const char* env = std::getenv("GRIDWAR_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace gridwar
