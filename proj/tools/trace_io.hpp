#pragma once

#include <string>
#include <vector>

// One decimal with 17 significant digits: doubles round-trip exactly.
std::string csv_number(double v);

// Comma-separated writer; the field list of each row must match the header.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);
    void close();

  private:
    std::string path_;
    std::string buffer_;
    size_t columns_;
    bool closed_ = false;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a named column; errors name the file.
    size_t column(const std::string& name) const;
    double value(size_t row, size_t col) const;

    std::string path;  // for error messages
};

CsvTable read_csv(const std::string& path);
