#include "qhchain/io.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace qhc {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> columns)
    : path_(path), columns_(std::move(columns)), out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << '\n';
}

CsvWriter::~CsvWriter() {
    if (out_.is_open()) out_.close();
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) throw std::runtime_error("write failed: " + path_);
}

void CsvWriter::write_cell(double v, bool& first) {
    sep(first);
    out_ << format_double(v);
}

void CsvWriter::write_cell(const std::string& v, bool& first) {
    sep(first);
    out_ << v;
}

void CsvWriter::write_cell(long long v, bool& first) {
    sep(first);
    out_ << v;
}

void CsvWriter::write_cell(unsigned long long v, bool& first) {
    sep(first);
    out_ << v;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        out.close();
        if (out.fail()) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace qhc
