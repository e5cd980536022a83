#include "fracsheet/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "fracsheet/errors.hpp"

namespace fracsheet {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_field_csv(const FieldSample& f, std::ostream& out) {
    const auto& g = f.grid();
    out << "x,y,value\n";
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j)
            out << format_double(g.x(i)) << ',' << format_double(g.y(j)) << ','
                << format_double(f(i, j)) << '\n';
}

void write_field_csv(const FieldSample& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_field_csv(f, out);
}

namespace {

double parse_double(const std::string& s) {
    double v;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("bad numeric CSV token: '" + s + "'");
    return v;
}

// Distinct sorted coordinates must form a uniform mesh starting at 0.
void check_uniform(const std::vector<double>& xs, const char* axis) {
    if (xs.size() < 2) throw std::runtime_error(std::string("CSV: need >= 2 ") + axis + " coordinates");
    if (xs.front() != 0.0) throw std::runtime_error(std::string("CSV: ") + axis + " coordinates must start at 0");
    const double h = xs.back() / static_cast<double>(xs.size() - 1);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double expect = static_cast<double>(k) * h;
        if (std::abs(xs[k] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw std::runtime_error(std::string("CSV: non-uniform ") + axis + " coordinates");
    }
}

}  // namespace

FieldSample read_field_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("CSV: empty input");
    if (line != "x,y,value" && line != "x,y,value\r")
        throw std::runtime_error("CSV: expected header 'x,y,value'");

    std::vector<std::array<double, 3>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 3> row;
        std::size_t start = 0;
        for (int k = 0; k < 3; ++k) {
            std::size_t end = k < 2 ? line.find(',', start) : line.size();
            if (end == std::string::npos) throw std::runtime_error("CSV: short row: " + line);
            row[k] = parse_double(line.substr(start, end - start));
            start = end + 1;
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw std::runtime_error("CSV: no data rows");

    std::vector<double> xs, ys;
    for (const auto& r : rows) xs.push_back(r[0]), ys.push_back(r[1]);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    check_uniform(xs, "x");
    check_uniform(ys, "y");

    Grid2D grid(xs.back(), ys.back(), static_cast<int>(xs.size()), static_cast<int>(ys.size()));
    if (rows.size() != xs.size() * ys.size())
        throw std::runtime_error("CSV: row count does not fill the coordinate lattice");

    FieldSample out(grid);
    std::vector<bool> seen(rows.size(), false);
    for (const auto& r : rows) {
        const auto ix = std::lower_bound(xs.begin(), xs.end(), r[0]) - xs.begin();
        const auto iy = std::lower_bound(ys.begin(), ys.end(), r[1]) - ys.begin();
        const std::size_t flat = static_cast<std::size_t>(ix) * ys.size() + iy;
        if (seen[flat]) throw std::runtime_error("CSV: duplicate coordinate row");
        seen[flat] = true;
        if (!std::isfinite(r[2])) throw std::runtime_error("CSV: non-finite value");
        out(static_cast<int>(ix), static_cast<int>(iy)) = r[2];
    }
    return out;
}

FieldSample read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_field_csv(in);
}

}  // namespace fracsheet
