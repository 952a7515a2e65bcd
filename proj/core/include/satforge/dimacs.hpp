#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "satforge/cnf.hpp"

namespace satforge {

/// Parses DIMACS CNF. `c` lines are skipped except `c provenance: key=value`,
/// which is read back into the formula metadata. Duplicate literals inside a
/// clause are dropped (first occurrence kept); tautologies are kept as-is.
/// Throws DataError on a malformed header, an out-of-range literal, a missing
/// terminating 0 or a clause count that disagrees with the header.
CnfFormula parse_dimacs(std::string_view text);
CnfFormula read_dimacs_file(const std::string& path);

/// Canonical output: provenance comments (if requested and present), header,
/// one clause per line terminated by 0.
std::string write_dimacs(const CnfFormula& formula, bool provenance = true);
void write_dimacs_file(const CnfFormula& formula, const std::string& path, bool provenance = true);

} // namespace satforge
