#pragma once

#include <charconv>
#include <cstdlib>
#include <string>

#include "error.hpp"

namespace blab {

// Shortest decimal representation that round-trips the exact double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// 17 significant digits: enough to reproduce any double bit-for-bit.
inline std::string format_double17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// Strict numeric parse of a whole token (leading/trailing blanks allowed).
inline double parse_double(const std::string& text) {
    size_t b = text.find_first_not_of(" \t");
    size_t e = text.find_last_not_of(" \t");
    if (b == std::string::npos)
        fail(Errc::invalid_argument, "expected a number, got an empty field");
    std::string tok = text.substr(b, e - b + 1);
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + tok.size())
        fail(Errc::invalid_argument, "malformed number '" + tok + "'");
    return v;
}

}  // namespace blab
