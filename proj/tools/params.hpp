#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>

// Error carrying the process exit code: 1 validation/config, 2 numerical.
struct CliError : std::runtime_error {
    CliError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
    int exit_code;
};

[[noreturn]] inline void fail_usage(const std::string& what) { throw CliError(1, what); }

// Merged view of command-line flags and an optional config file; a flag wins
// over the file when both give a key. Values stay text until a typed getter
// pulls them, so both sources share one set of parse errors.
class Params {
  public:
    // Flag values, recorded by the option callbacks.
    void set_flag(const std::string& key, const std::string& value);

    // `key = value` lines, `#` comments; unknown keys and repeats are
    // rejected with their line number. Keys already set by flags keep the
    // flag value.
    void load_config(const std::string& path);

    bool has(const std::string& key) const;

    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    int integer(const std::string& key) const;
    int integer_or(const std::string& key, int fallback) const;
    std::array<double, 2> point2(const std::string& key) const;  // "x,y"
    std::array<double, 2> point2_or(const std::string& key, std::array<double, 2> fallback) const;
    std::array<double, 4> box4(const std::string& key) const;  // "lox,loy,hix,hiy"

    // Larmor radius from exactly one of beta/r (the other is derived).
    double radius() const;
    // 1 = counterclockwise, 2 = clockwise; also accepts the orientation
    // words for the models without sides.
    int side_or(const std::string& key, int fallback) const;

  private:
    double parse_number(const std::string& key, const std::string& text) const;
    std::map<std::string, std::string> values_;
};
