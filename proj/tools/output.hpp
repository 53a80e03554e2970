#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace eplab::cli {

inline constexpr const char* kToolVersion = "eplab 1.0.0";

struct Table {
    std::vector<std::string> comments;  // header lines without the leading '#'
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// UTF-8, LF line endings, '#' header block, then a column line and comma-separated rows.
std::string render_csv(const Table& t);
void write_text(const std::string& path, const std::string& text);
// One compact JSON object per line.
void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& records);

struct CsvData {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
};
CsvData parse_csv(const std::string& text);
CsvData read_csv(const std::string& path);

}  // namespace eplab::cli
