#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace rcnwave {

using json = nlohmann::ordered_json;

// Decimal with 17 significant digits ("inf"/"nan" spelled out).
std::string fmt17(double x);

// JSON text where every floating value carries 17 significant digits.
std::string dump17(const json& j, int indent = 2);

void write_csv_row(std::ostream& os, const std::vector<double>& row);

}  // namespace rcnwave
