#pragma once

#include <string>
#include <utility>

#include "ltfu/dataset.hpp"

namespace ltfu {

/// Reads a comma-separated file whose header matches the schema names.
/// Cells equal to missing_token load as mask=true with value 0; everything
/// else must parse as a real and satisfy the column's kind.
std::pair<Dataset, MaskMatrix> load_csv(const std::string& path, const Schema& schema,
                                        const std::string& missing_token = "?");

/// Writes header plus one line per row; masked cells serialize as the missing
/// token, observed reals with shortest round-trip precision so that
/// load_csv(write_csv(ds)) is bit-identical.
void write_csv(const Dataset& ds, const MaskMatrix& mask, const std::string& path,
               const std::string& missing_token = "?");

/// Shortest decimal form of x that parses back to the same bits.
std::string format_double(double x);

}  // namespace ltfu
