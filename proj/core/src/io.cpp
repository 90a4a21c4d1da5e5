#include "l1ssl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include "l1ssl/error.hpp"

namespace l1ssl::io {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool skippable(std::string_view line) { return line.empty() || line.front() == '#'; }

double parse_double(std::string_view tok, std::size_t line) {
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("cannot parse '" + std::string(tok) + "' as a number", line);
    }
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(tok) + "'", line);
    return v;
}

long long parse_int(std::string_view tok, std::size_t line) {
    tok = trim(tok);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("cannot parse '" + std::string(tok) + "' as an integer", line);
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string(), 0);
    return in;
}

template <class Fn>
auto with_file(const std::filesystem::path& path, Fn&& fn) {
    auto in = open(path);
    try {
        return fn(in);
    } catch (const ParseError& e) {
        if (e.line() == 0) throw ParseError(path.string() + ": " + e.detail(), 0);
        throw ParseError(path.string() + ", " + e.detail(), e.line());
    }
}

}  // namespace

FeatureMatrix read_features(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto s = trim(raw);
        if (skippable(s)) continue;
        std::vector<double> row;
        for (auto tok : split(s, ',')) row.push_back(parse_double(tok, line));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("row has " + std::to_string(row.size()) + " columns, expected " +
                                 std::to_string(rows.front().size()),
                             line);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("feature file is empty", 0);
    DenseMatrix data(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            data(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return FeatureMatrix(std::move(data));
}

FeatureMatrix read_features(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return read_features(in); });
}

std::vector<LabelAssignment> read_labels(std::istream& in) {
    std::vector<LabelAssignment> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto s = trim(raw);
        if (skippable(s)) continue;
        const auto parts = split(s, ',');
        if (parts.size() != 2) throw ParseError("expected 'index,class'", line);
        const long long idx = parse_int(parts[0], line);
        const long long cls = parse_int(parts[1], line);
        if (idx < 0 || cls < 0) throw ParseError("index and class must be nonnegative", line);
        out.push_back({static_cast<Index>(idx), static_cast<int>(cls)});
    }
    return out;
}

std::vector<LabelAssignment> read_labels(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return read_labels(in); });
}

std::vector<int> read_truth(std::istream& in) {
    std::vector<int> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto s = trim(raw);
        if (skippable(s)) continue;
        const long long cls = parse_int(s, line);
        if (cls < 0) throw ParseError("class must be nonnegative", line);
        out.push_back(static_cast<int>(cls));
    }
    return out;
}

std::vector<int> read_truth(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return read_truth(in); });
}

void write_predictions(std::ostream& out, std::span<const int> labels) {
    for (int l : labels) out << l << '\n';
}

DenseMatrix read_bow(std::istream& in) {
    std::string raw;
    std::size_t line = 0;
    long long n = -1, words = -1, nnz = -1;
    while (std::getline(in, raw)) {
        ++line;
        const auto s = trim(raw);
        if (skippable(s)) continue;
        const auto parts = split_ws(s);
        if (parts.size() != 3) throw ParseError("expected header 'n M nnz'", line);
        n = parse_int(parts[0], line);
        words = parse_int(parts[1], line);
        nnz = parse_int(parts[2], line);
        if (n < 1 || words < 1 || nnz < 0) throw ParseError("header values out of range", line);
        break;
    }
    if (n < 0) throw ParseError("BOW file has no header", 0);

    DenseMatrix m = DenseMatrix::Zero(n, words);
    std::set<std::pair<long long, long long>> seen;
    long long count = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto s = trim(raw);
        if (skippable(s)) continue;
        const auto parts = split_ws(s);
        if (parts.size() != 3) throw ParseError("expected 'row col value'", line);
        const long long r = parse_int(parts[0], line);
        const long long c = parse_int(parts[1], line);
        const double v = parse_double(parts[2], line);
        if (r < 0 || r >= n || c < 0 || c >= words) throw ParseError("triplet index out of range", line);
        if (!seen.emplace(r, c).second) throw ParseError("duplicate triplet", line);
        m(r, c) = v;
        ++count;
    }
    if (count != nnz) {
        throw ParseError("header declares " + std::to_string(nnz) + " entries, found " + std::to_string(count), 0);
    }
    return m;
}

DenseMatrix read_bow(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return read_bow(in); });
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("format_double failed");
    return {buf, ptr};
}

void write_bow(std::ostream& out, const DenseMatrix& m) {
    constexpr double kStoreThreshold = 1e-12;
    std::size_t nnz = 0;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > kStoreThreshold) ++nnz;
    out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (std::abs(m(i, j)) > kStoreThreshold) out << i << ' ' << j << ' ' << format_double(m(i, j)) << '\n';
        }
    }
}

void write_eigen_dump(std::ostream& out, const Vector& values, const DenseMatrix& vectors) {
    out << vectors.rows() << ' ' << vectors.cols() << '\n';
    for (Index j = 0; j < values.size(); ++j) out << (j ? " " : "") << format_double(values[j]);
    out << '\n';
    for (Index i = 0; i < vectors.rows(); ++i) {
        for (Index j = 0; j < vectors.cols(); ++j) out << (j ? " " : "") << format_double(vectors(i, j));
        out << '\n';
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace l1ssl::io
