#pragma once

#include <string>

#include "steinmm/distributions.hpp"

namespace steinmm {

/// Reads a dataset. Accepted layouts: one numeric value per row with an
/// optional header `x`, or `value,count` frequency rows (optional header).
/// Blank lines and lines starting with '#' are skipped. Throws FixtureError
/// when the file cannot be opened and ParseError on malformed rows.
Sample read_dataset(const std::string& path);

/// Directory holding the bundled fixtures: $STEINMM_DATA if set, otherwise
/// the data/ directory of the source tree.
std::string default_data_dir();

}  // namespace steinmm
