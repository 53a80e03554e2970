#include "output.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eplab/core.hpp"

namespace eplab::cli {

std::string render_csv(const Table& t) {
    std::string out;
    for (const auto& c : t.comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size()) throw ShapeError("CSV row width does not match the column count");
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& records) {
    std::string text;
    for (const auto& r : records) text += r.dump() + "\n";
    write_text(path, text);
}

std::size_t CsvData::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::out_of_range("no CSV column '" + name + "'");
}

CsvData parse_csv(const std::string& text) {
    CsvData d;
    std::istringstream in(text);
    bool have_columns = false;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("# ", 0) == 0 && !have_columns) {
            d.comments.push_back(line.substr(2));
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        if (!have_columns) {
            d.columns = std::move(cells);
            have_columns = true;
        } else {
            d.rows.push_back(std::move(cells));
        }
    }
    return d;
}

CsvData read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return parse_csv(s.str());
}

}  // namespace eplab::cli
