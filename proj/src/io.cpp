#include "comds/io.hpp"

#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "comds/errors.hpp"

namespace comds {

namespace {

[[noreturn]] void parse_error(const std::string& path, std::size_t line,
                              std::size_t col, const std::string& what) {
    throw DataError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                    ": " + what);
}

// Splits one CSV record. No quoting: ids and numbers never contain commas.
std::vector<std::string> split_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, const std::string& path,
                  std::size_t line, std::size_t col) {
    if (cell.empty()) {
        parse_error(path, line, col, "empty numeric cell");
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || errno == ERANGE) {
        parse_error(path, line, col, "expected a number, got '" + cell + "'");
    }
    // strtod accepts "inf" and "nan"; no consumer of these files does.
    if (!std::isfinite(v)) {
        parse_error(path, line, col, "non-finite value '" + cell + "'");
    }
    return v;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path + "' for reading");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    // Trailing blank lines are tolerated; blank lines elsewhere are not.
    while (!lines.empty() && (lines.back().empty() || lines.back() == "\r")) {
        lines.pop_back();
    }
    if (lines.empty()) {
        throw DataError(path + ":1:1: file is empty");
    }
    return lines;
}

} // namespace

NamedMatrix read_embedding_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    const std::vector<std::string> header = split_line(lines[0]);
    if (header.empty() || header[0] != "id") {
        parse_error(path, 1, 1, "header must start with 'id'");
    }
    if (header.size() < 2) {
        parse_error(path, 1, 1, "no data columns in header");
    }
    NamedMatrix out;
    out.columns.assign(header.begin() + 1, header.end());
    const std::size_t width = out.columns.size();
    const std::size_t rows = lines.size() - 1;
    if (rows == 0) {
        parse_error(path, 2, 1, "no data rows");
    }
    out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t line_no = r + 2;
        const std::vector<std::string> cells = split_line(lines[r + 1]);
        if (cells.size() != width + 1) {
            parse_error(path, line_no, 1,
                        "expected " + std::to_string(width + 1) + " cells, got " +
                            std::to_string(cells.size()));
        }
        if (cells[0].empty()) {
            parse_error(path, line_no, 1, "empty id");
        }
        out.ids.push_back(cells[0]);
        for (std::size_t c = 0; c < width; ++c) {
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_cell(cells[c + 1], path, line_no, c + 2);
        }
    }
    return out;
}

void write_embedding_csv(const std::string& path, const NamedMatrix& m) {
    if (m.ids.size() != static_cast<std::size_t>(m.values.rows()) ||
        m.columns.size() != static_cast<std::size_t>(m.values.cols())) {
        throw DataError("id or column labels do not match the matrix shape");
    }
    std::ostringstream os;
    os << "id";
    for (const auto& c : m.columns) os << ',' << c;
    os << '\n';
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
        os << m.ids[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
            os << ',' << format_double(m.values(r, c));
        }
        os << '\n';
    }
    atomic_write_text(path, os.str());
}

NamedDistances read_distance_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    const std::vector<std::string> header = split_line(lines[0]);
    if (header.empty() || header[0] != "id") {
        parse_error(path, 1, 1, "header must start with 'id'");
    }
    const std::size_t n = header.size() - 1;
    if (n < 2) {
        parse_error(path, 1, 1, "distance matrix needs at least 2 points");
    }
    if (lines.size() - 1 != n) {
        throw DataError(path + ": header names " + std::to_string(n) +
                        " points but there are " + std::to_string(lines.size() - 1) +
                        " data rows");
    }
    NamedDistances out;
    out.ids.assign(header.begin() + 1, header.end());
    out.distances.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t line_no = r + 2;
        const std::vector<std::string> cells = split_line(lines[r + 1]);
        if (cells.size() != n + 1) {
            parse_error(path, line_no, 1,
                        "expected " + std::to_string(n + 1) + " cells, got " +
                            std::to_string(cells.size()));
        }
        if (cells[0] != out.ids[r]) {
            parse_error(path, line_no, 1,
                        "row id '" + cells[0] + "' does not match header id '" +
                            out.ids[r] + "'");
        }
        for (std::size_t c = 0; c < n; ++c) {
            out.distances.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_cell(cells[c + 1], path, line_no, c + 2);
        }
    }
    out.distances.validate(path);
    return out;
}

void write_distance_csv(const std::string& path, const NamedDistances& d) {
    const Eigen::Index n = d.distances.values.rows();
    if (d.ids.size() != static_cast<std::size_t>(n)) {
        throw DataError("id list does not match the distance matrix size");
    }
    std::ostringstream os;
    os << "id";
    for (const auto& id : d.ids) os << ',' << id;
    os << '\n';
    for (Eigen::Index r = 0; r < n; ++r) {
        os << d.ids[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < n; ++c) {
            os << ',' << format_double(d.distances.values(r, c));
        }
        os << '\n';
    }
    atomic_write_text(path, os.str());
}

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    std::error_code ec;
    if (!fs::exists(dir, ec)) {
        throw DataError("output directory '" + dir.string() + "' does not exist");
    }
    const fs::path tmp = dir / (target.filename().string() + ".tmp." +
                                std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot open '" + tmp.string() + "' for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            std::remove(tmp.string().c_str());
            throw DataError("write to '" + tmp.string() + "' failed");
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        std::remove(tmp.string().c_str());
        throw DataError("cannot move output into place at '" + path + "': " +
                        ec.message());
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace comds
