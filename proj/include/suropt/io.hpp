#pragma once

#include <string>

namespace suropt {

/// Writes via a temp file in the same directory, then renames into place.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// FNV-1a 64-bit hash, hex-encoded; used to fingerprint configs in manifests.
std::string content_hash(const std::string& content);

}  // namespace suropt
