#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace lvfp {

// 17 significant digits: round-trips every double.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    CsvWriter& field(double v);
    CsvWriter& field(std::optional<double> v);  // empty cell when absent
    CsvWriter& field(const std::string& s);
    CsvWriter& field(long v);
    void end_row();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t columns_;
    std::size_t current_ = 0;
};

}  // namespace lvfp
