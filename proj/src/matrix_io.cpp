#include "klsnmf/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace klsnmf {

namespace {

std::vector<double> parse_row(const std::string& line, const std::string& origin,
                              std::size_t row) {
    std::vector<double> fields;
    std::size_t pos = 0;
    const std::size_t len = line.size();
    while (pos < len) {
        while (pos < len && (line[pos] == ' ' || line[pos] == '\t' ||
                             line[pos] == ',' || line[pos] == '\r'))
            ++pos;
        if (pos >= len) break;
        std::size_t end = pos;
        while (end < len && line[end] != ' ' && line[end] != '\t' &&
               line[end] != ',' && line[end] != '\r')
            ++end;
        double value = 0;
        const char* first = line.data() + pos;
        const char* last = line.data() + end;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last)
            throw input_error(origin + ": row " + std::to_string(row + 1) +
                              ", field " + std::to_string(fields.size() + 1) +
                              ": cannot parse '" + std::string(first, last) + "'");
        fields.push_back(value);
        pos = end;
    }
    return fields;
}

}  // namespace

Matrix read_matrix(std::istream& in, const std::string& origin) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r,") == std::string::npos) {
            ++lineno;
            continue;
        }
        auto fields = parse_row(line, origin, lineno);
        if (!rows.empty() && fields.size() != rows.front().size())
            throw input_error(origin + ": row " + std::to_string(lineno + 1) +
                              " has " + std::to_string(fields.size()) +
                              " fields, expected " +
                              std::to_string(rows.front().size()));
        rows.push_back(std::move(fields));
        ++lineno;
    }
    if (rows.empty()) throw input_error(origin + ": no data rows");
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const Matrix& m) {
    std::ostringstream buf;
    buf.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) buf << ' ';
            buf << m(i, j);
        }
        buf << '\n';
    }
    out << buf.str();
}

void write_matrix_file(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    write_matrix(out, m);
}

}  // namespace klsnmf
