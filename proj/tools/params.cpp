#include "params.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace {

// Union over all subcommands; parse_config rejects anything else.
const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "curve", "model",  "beta",  "r",     "s0",      "eps0",  "c0",   "side",
        "orientation",     "pole",  "a0",    "n",       "integral",      "p",
        "out",   "tol",    "f",     "g",     "m",       "point", "eps",  "fplus",
        "fminus", "k",     "l",     "f1",    "f2",      "phase", "trials",
        "seed",  "samples", "grid", "h",     "poly",    "box",   "offsets",
        "trace",
    };
    return keys;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::array<double, 2> split2(const std::string& key, const std::string& text) {
    std::array<double, 2> out{};
    size_t comma = text.find(',');
    if (comma == std::string::npos)
        fail_usage("'" + key + "' needs two comma-separated numbers, got '" + text + "'");
    try {
        size_t used = 0;
        out[0] = std::stod(trim(text.substr(0, comma)), &used);
        if (used != trim(text.substr(0, comma)).size()) throw std::invalid_argument("");
        out[1] = std::stod(trim(text.substr(comma + 1)), &used);
        if (used != trim(text.substr(comma + 1)).size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        fail_usage("'" + key + "' needs two comma-separated numbers, got '" + text + "'");
    }
    return out;
}

}  // namespace

void Params::set_flag(const std::string& key, const std::string& value) { values_[key] = value; }

void Params::load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_usage("cannot open config file '" + path + "'");
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail_usage(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key))
            fail_usage(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            fail_usage(path + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        if (value.empty())
            fail_usage(path + ":" + std::to_string(line_no) + ": empty value for '" + key + "'");
        values_.emplace(key, value);  // a flag already present wins
    }
    if (values_.count("beta") && values_.count("r"))
        fail_usage("exactly one of beta/r must be given");
}

bool Params::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Params::text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) fail_usage("missing required parameter '" + key + "'");
    return it->second;
}

std::string Params::text_or(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Params::parse_number(const std::string& key, const std::string& text) const {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail_usage("'" + key + "' is not a number: '" + text + "'");
    }
}

double Params::number(const std::string& key) const { return parse_number(key, text(key)); }

double Params::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

int Params::integer(const std::string& key) const {
    double v = number(key);
    int n = static_cast<int>(v);
    if (v != n) fail_usage("'" + key + "' is not an integer: '" + text(key) + "'");
    return n;
}

int Params::integer_or(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::array<double, 2> Params::point2(const std::string& key) const {
    return split2(key, text(key));
}

std::array<double, 2> Params::point2_or(const std::string& key,
                                        std::array<double, 2> fallback) const {
    return has(key) ? point2(key) : fallback;
}

std::array<double, 4> Params::box4(const std::string& key) const {
    std::string t = text(key);
    size_t mid = t.find(',');
    mid = mid == std::string::npos ? mid : t.find(',', mid + 1);
    if (mid == std::string::npos)
        fail_usage("'" + key + "' needs four comma-separated numbers, got '" + t + "'");
    std::array<double, 2> lo = split2(key, t.substr(0, mid));
    std::array<double, 2> hi = split2(key, t.substr(mid + 1));
    return {lo[0], lo[1], hi[0], hi[1]};
}

double Params::radius() const {
    bool hb = has("beta"), hr = has("r");
    if (hb == hr) fail_usage("exactly one of beta/r must be given");
    double v = hb ? number("beta") : number("r");
    if (v <= 0.0) fail_usage(std::string(hb ? "beta" : "r") + " must be positive");
    return hb ? 1.0 / v : v;
}

int Params::side_or(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    std::string t = text(key);
    if (t == "1" || t == "ccw") return 1;
    if (t == "2" || t == "cw") return 2;
    fail_usage("'" + key + "' must be 1/ccw or 2/cw, got '" + t + "'");
}
