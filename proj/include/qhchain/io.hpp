#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhc {

// CSV with a header row. Numbers are written with %.17g so output is exact and
// byte-stable for identical inputs.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> columns);
    ~CsvWriter();

    template <typename... Ts>
    void row(const Ts&... vals) {
        if (sizeof...(Ts) != columns_.size()) throw std::logic_error("csv: column count mismatch in " + path_);
        bool first = true;
        (write_cell(vals, first), ...);
        out_ << '\n';
    }
    void close();
    const std::string& path() const { return path_; }

private:
    void sep(bool& first) {
        if (!first) out_ << ',';
        first = false;
    }
    void write_cell(double v, bool& first);
    void write_cell(const std::string& v, bool& first);
    void write_cell(const char* v, bool& first) { write_cell(std::string(v), first); }
    void write_cell(int v, bool& first) { write_cell(static_cast<long long>(v), first); }
    void write_cell(long v, bool& first) { write_cell(static_cast<long long>(v), first); }
    void write_cell(long long v, bool& first);
    void write_cell(unsigned long long v, bool& first);
    void write_cell(unsigned long v, bool& first) { write_cell(static_cast<unsigned long long>(v), first); }

    std::string path_;
    std::vector<std::string> columns_;
    std::ofstream out_;
};

std::string format_double(double v);

// Write to path.tmp then rename over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qhc
