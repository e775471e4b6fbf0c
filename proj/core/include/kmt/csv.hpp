// Minimal CSV emission with the versioned "#schema=1" header comment and
// atomic file writes (temp + rename) so no partial output survives an error.
#pragma once

#include <string>
#include <vector>

namespace kmt {

// First line "#schema=1", second line the column names, then rows.
std::string csv_document(const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows);

// Writes content to path via a sibling temp file and std::filesystem::rename.
void atomic_write_file(const std::string& path, const std::string& content);

// Shortest round-trip decimal formatting for doubles ("inf"/"-inf"/"nan").
std::string format_double(double v);

}  // namespace kmt
