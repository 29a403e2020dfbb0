#pragma once

#include "amc/types.hpp"

#include <string>

namespace amc {

Mat read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Mat& a);

}  // namespace amc
