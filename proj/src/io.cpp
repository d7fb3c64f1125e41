#include "ldgf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ldgf/errors.hpp"

namespace ldgf {

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view field) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (field == "inf") return std::numeric_limits<double>::infinity();
    if (field == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        fail(ErrorCode::io_error, "malformed CSV number '" + std::string(field) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::size_t column(const CsvTable& t, std::string_view name) {
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) fail(ErrorCode::io_error, "CSV is missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - t.header.begin());
}

bool has_column(const CsvTable& t, std::string_view name) {
    return std::find(t.header.begin(), t.header.end(), name) != t.header.end();
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string format_csv(const CsvTable& table, const std::vector<std::string>& comments) {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    for (std::size_t j = 0; j < table.header.size(); ++j) out += (j ? "," : "") + table.header[j];
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ",";
            out += format_double(row[j]);
        }
        out += "\n";
    }
    return out;
}

CsvTable parse_csv(std::string_view text) {
    CsvTable t;
    bool header = true;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split(line);
        if (header) {
            for (auto f : fields) t.header.emplace_back(f);
            header = false;
            continue;
        }
        if (fields.size() != t.header.size()) {
            fail(ErrorCode::io_error, "CSV line " + std::to_string(line_no) + " has the wrong number of fields");
        }
        std::vector<double> row;
        for (auto f : fields) row.push_back(parse_double(f));
        t.rows.push_back(std::move(row));
    }
    if (header) fail(ErrorCode::io_error, "CSV has no header");
    return t;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io_error, "cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorCode::io_error, "write failed for '" + path + "'");
}

CsvTable curve_table(const SampledCurve& curve) {
    CsvTable t{{"t", "x"}, {}};
    for (std::size_t i = 0; i < curve.size(); ++i) t.rows.push_back({curve.t[i], curve.x[i]});
    return t;
}

CsvTable curve_table(const BVCurve& curve) {
    CsvTable t{{"t", "x_left", "x", "x_right"}, {}};
    for (std::size_t i = 0; i < curve.size(); ++i) {
        t.rows.push_back({curve.t[i], curve.left_limit(i), curve.x[i], curve.right_limit(i)});
    }
    return t;
}

SampledCurve sampled_curve_from(const CsvTable& table) {
    const std::size_t ct = column(table, "t");
    const std::size_t cx = column(table, "x");
    SampledCurve c;
    for (const auto& row : table.rows) {
        c.t.push_back(row[ct]);
        c.x.push_back(row[cx]);
    }
    return c;
}

BVCurve bv_curve_from(const CsvTable& table) {
    const SampledCurve s = sampled_curve_from(table);
    BVCurve c;
    c.t = s.t;
    c.x = s.x;
    if (has_column(table, "x_left") && has_column(table, "x_right")) {
        const std::size_t cl = column(table, "x_left");
        const std::size_t cr = column(table, "x_right");
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const double l = table.rows[i][cl];
            const double r = table.rows[i][cr];
            if (l != c.x[i] || r != c.x[i]) c.jumps.push_back(Jump{i, c.t[i], l, c.x[i], r});
        }
    }
    c.check_consistency();
    return c;
}

}  // namespace ldgf
