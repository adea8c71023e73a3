#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "suropt/types.hpp"

namespace suropt {

/// Parses a dataset from CSV text. Expected header:
///   machine,x1,x2,x3,roughness,power
/// UTF-8, comma separated, '.' decimal separator. Errors carry the
/// offending row number.
Dataset parse_dataset(std::string_view csv_text, const Factors& factors);

/// Inverse of parse_dataset: parse_dataset(serialize_dataset(ds), ds.factors)
/// reproduces ds exactly (doubles are written with round-trip precision).
std::string serialize_dataset(const Dataset& dataset);

Dataset load_dataset(const std::string& path, const Factors& factors);

// Small shared CSV helpers.
std::vector<std::string> split_csv_line(std::string_view line);
double parse_double(std::string_view token, const std::string& context);
long parse_long(std::string_view token, const std::string& context);
std::string format_double(double v);

}  // namespace suropt
