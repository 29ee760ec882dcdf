#include "vpp/io/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vpp::io {

std::string formatDouble(double v) {
    if (v == 0.0) return "0";  // folds -0 so files stay byte-stable
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parseDouble(std::string_view text) {
    std::string s(text);
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) {
        throw IoError("cannot parse number '" + s + "'");
    }
    return v;
}

namespace {

std::vector<std::string> splitLine(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

CsvTable CsvTable::read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse(in, path.string());
}

CsvTable CsvTable::parse(std::istream& in, const std::string& origin) {
    CsvTable t;
    t.origin_ = origin;
    std::string line;
    bool haveHeader = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = splitLine(line);
        if (!haveHeader) {
            t.header_ = std::move(cells);
            haveHeader = true;
            continue;
        }
        if (cells.size() != t.header_.size()) {
            throw IoError(origin + ": row " + std::to_string(t.rows_.size() + 1) + " has " +
                          std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(t.header_.size()));
        }
        t.rows_.push_back(std::move(cells));
    }
    if (!haveHeader) throw IoError(origin + ": missing header");
    return t;
}

bool CsvTable::hasColumn(std::string_view name) const {
    for (const auto& h : header_)
        if (h == name) return true;
    return false;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return i;
    throw IoError(origin_ + ": missing column '" + std::string(name) + "'");
}

const std::string& CsvTable::text(std::size_t row, std::string_view col) const {
    return rows_.at(row).at(column(col));
}

double CsvTable::number(std::size_t row, std::string_view col) const {
    try {
        return parseDouble(text(row, col));
    } catch (const IoError& e) {
        throw IoError(origin_ + ": column '" + std::string(col) + "': " + e.what());
    }
}

int CsvTable::integer(std::size_t row, std::string_view col) const {
    const double v = number(row, col);
    if (v != std::floor(v)) throw IoError(origin_ + ": expected integer in '" + std::string(col) + "'");
    return static_cast<int>(v);
}

std::vector<double> CsvTable::numbers(std::string_view col) const {
    std::vector<double> out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) out[r] = number(r, col);
    return out;
}

CsvWriter& CsvWriter::header(const std::vector<std::string>& names) {
    for (const auto& n : names) cell(std::string_view(n));
    endRow();
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(formatDouble(v))); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::string_view(std::to_string(v))); }

CsvWriter& CsvWriter::cell(std::string_view v) {
    if (!first_) out_ << ',';
    out_ << v;
    first_ = false;
    return *this;
}

void CsvWriter::endRow() {
    out_ << '\n';
    first_ = true;
}

void writeTextFile(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

std::string readTextFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace vpp::io
