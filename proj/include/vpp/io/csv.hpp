#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vpp::io {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip-safe decimal (17 significant digits).
std::string formatDouble(double v);
double parseDouble(std::string_view text);

/// In-memory CSV table with a header row. Values are kept as text.
class CsvTable {
public:
    static CsvTable read(const std::filesystem::path& path);
    static CsvTable parse(std::istream& in, const std::string& origin = "<stream>");

    [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
    [[nodiscard]] std::size_t rowCount() const { return rows_.size(); }
    [[nodiscard]] bool hasColumn(std::string_view name) const;
    [[nodiscard]] std::size_t column(std::string_view name) const;
    [[nodiscard]] const std::string& text(std::size_t row, std::string_view col) const;
    [[nodiscard]] double number(std::size_t row, std::string_view col) const;
    [[nodiscard]] int integer(std::size_t row, std::string_view col) const;
    [[nodiscard]] std::vector<double> numbers(std::string_view col) const;

private:
    std::string origin_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    CsvWriter& header(const std::vector<std::string>& names);
    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
    CsvWriter& cell(std::string_view v);
    void endRow();

private:
    std::ostream& out_;
    bool first_ = true;
};

void writeTextFile(const std::filesystem::path& path, const std::string& content);
std::string readTextFile(const std::filesystem::path& path);

/// FNV-1a 64-bit, rendered as 16 hex digits. Used for config and manifest
/// fingerprints, not for security.
std::string fnv1a64(std::string_view data);

}  // namespace vpp::io
