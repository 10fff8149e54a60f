#include "lvfp/csv.hpp"

#include <cstdio>

#include "lvfp/errors.hpp"

namespace lvfp {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), path_(path), columns_(header.size())
{
    if (!out_)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    for (const auto& h : header)
        field(h);
    end_row();
}

CsvWriter& CsvWriter::field(const std::string& s)
{
    if (current_++ > 0)
        out_ << ',';
    out_ << s;
    return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(std::optional<double> v) { return v ? field(*v) : field(std::string()); }

CsvWriter& CsvWriter::field(long v) { return field(std::to_string(v)); }

void CsvWriter::end_row()
{
    if (current_ != columns_)
        throw std::logic_error("CSV row in '" + path_ + "' has " + std::to_string(current_) +
                               " fields, header has " + std::to_string(columns_));
    out_ << '\n';
    current_ = 0;
    if (!out_)
        throw std::runtime_error("write to '" + path_ + "' failed");
}

}  // namespace lvfp
