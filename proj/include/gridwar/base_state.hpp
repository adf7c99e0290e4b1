#pragma once

#include <array>
#include <string>
#include <string_view>

#include "gridwar/common.hpp"

namespace gridwar {

// Base occupancy encoded as a 3-character string (first, second, third).
// Canonical order used everywhere a state is indexed:
//   000 100 010 001 110 101 011 111
class BaseState {
public:
    static constexpr int kCount = 8;

    BaseState() = default;

    static BaseState from_code(std::string_view code) {
        for (int i = 0; i < kCount; ++i)
            if (code == kCodes[i]) return BaseState(i);
        throw ValidationError("invalid base state '" + std::string(code) + "'");
    }

    static bool is_valid_code(std::string_view code) {
        for (int i = 0; i < kCount; ++i)
            if (code == kCodes[i]) return true;
        return false;
    }

    static BaseState from_index(int idx) {
        if (idx < 0 || idx >= kCount) throw ValidationError("base state index out of range");
        return BaseState(idx);
    }

    int index() const { return index_; }
    std::string_view code() const { return kCodes[index_]; }

    bool first() const { return code()[0] == '1'; }
    bool second() const { return code()[1] == '1'; }
    bool third() const { return code()[2] == '1'; }

    friend bool operator==(BaseState a, BaseState b) { return a.index_ == b.index_; }
    friend bool operator!=(BaseState a, BaseState b) { return !(a == b); }

private:
    explicit BaseState(int idx) : index_(idx) {}

    static constexpr std::array<std::string_view, kCount> kCodes = {
        "000", "100", "010", "001", "110", "101", "011", "111"};

    int index_ = 0;
};

}  // namespace gridwar
