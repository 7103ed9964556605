#include "trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "params.hpp"

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_)
        throw CliError(2, "row width mismatch writing '" + path_ + "'");
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += fields[i];
    }
    buffer_ += '\n';
}

void CsvWriter::close() {
    if (closed_) return;
    std::ofstream out(path_);
    if (!out || !(out << buffer_) || !out.flush())
        throw CliError(2, "cannot write '" + path_ + "'");
    closed_ = true;
}

size_t CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    fail_usage("'" + path + "' has no column '" + name + "'");
}

double CsvTable::value(size_t row, size_t col) const {
    const std::string& cell = rows[row][col];
    try {
        size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail_usage("'" + path + "' row " + std::to_string(row + 2) + ": bad number '" + cell +
                   "'");
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_usage("cannot open '" + path + "'");
    CsvTable table;
    table.path = path;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) fields.push_back(cell);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        if (table.header.empty()) {
            table.header = fields;
        } else {
            if (fields.size() != table.header.size())
                fail_usage("'" + path + "' row " + std::to_string(table.rows.size() + 2) +
                           ": expected " + std::to_string(table.header.size()) + " fields");
            table.rows.push_back(std::move(fields));
        }
    }
    if (table.header.empty()) fail_usage("'" + path + "' is empty");
    return table;
}
