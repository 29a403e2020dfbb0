#include "amc/csv.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace amc {

Mat read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            size_t pos = 0;
            double v = std::stod(cell, &pos);
            row.push_back(v);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty matrix in " + path);
    size_t n = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != n) throw std::runtime_error("ragged rows in " + path);
    Mat a(static_cast<int>(rows.size()), static_cast<int>(n));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < n; ++j)
            a(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return a;
}

void write_csv_matrix(const std::string& path, const Mat& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            if (j) out << ',';
            out << a(i, j);
        }
        out << '\n';
    }
}

}  // namespace amc
