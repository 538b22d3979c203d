#pragma once

// Small I/O helpers shared by the export paths and the CLI: atomic text
// writes (temp file + rename) and locale-independent numeric formatting.

#include <string>

namespace fdspec::io {

void atomic_write_text(const std::string& path, const std::string& content);

// Shortest round-trip decimal representation, '.' decimal separator.
std::string format_double(double v);

// FNV-1a 64-bit hash, hex-encoded; used to stamp output files with the
// configuration they came from.
std::string fnv1a_hex(const std::string& data);

} // namespace fdspec::io
