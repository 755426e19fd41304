// csv.hpp — deterministic CSV emission (fixed float formatting, no locale)
#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualfield/core.hpp"

namespace dualfield {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    }

    void header(const std::vector<std::string>& names) { row_strings(names); }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    class Row {
      public:
        explicit Row(CsvWriter& w) : w_(w) {}
        Row& operator<<(double v) { return put(format_double(v)); }
        Row& operator<<(int v) { return put(std::to_string(v)); }
        Row& operator<<(long v) { return put(std::to_string(v)); }
        Row& operator<<(std::size_t v) { return put(std::to_string(v)); }
        Row& operator<<(const std::string& s) { return put(s); }
        Row& operator<<(const char* s) { return put(s); }
        Row& operator<<(cplx z) {
            put(format_double(z.real()));
            return put(format_double(z.imag()));
        }
        ~Row() { w_.out_ << '\n'; }

      private:
        Row& put(const std::string& s) {
            if (n_++) w_.out_ << ',';
            w_.out_ << s;
            return *this;
        }
        CsvWriter& w_;
        int n_ = 0;
    };

    Row row() { return Row(*this); }

  private:
    std::ofstream out_;
};

}  // namespace dualfield
