#pragma once

// Dataset CSV serialization: header `x1..xp,y,is_outlier`, RFC-4180
// quoting rules, floats at 17 significant digits (lossless double
// round-trip).

#include <string>
#include <vector>

#include "gammareg/contamination.hpp"
#include "gammareg/types.hpp"

namespace gammareg {

/// Serializes the dataset (flags default to all zeros when empty; any other
/// length mismatch throws LengthMismatch).
std::string dataset_to_csv(const RegressionDataset& data,
                           const std::vector<int>& is_outlier = {});

void write_dataset_csv(const std::string& path, const RegressionDataset& data,
                       const std::vector<int>& is_outlier = {});

/// Parses a dataset produced by dataset_to_csv (quoted fields and CRLF line
/// endings are accepted).  Malformed input throws IoError naming the path.
GeneratedData parse_dataset_csv(const std::string& text,
                                const std::string& path_for_errors = "<text>");

GeneratedData read_dataset_csv(const std::string& path);

}  // namespace gammareg
