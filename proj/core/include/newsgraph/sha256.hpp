#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace newsgraph {

// Lowercase hex SHA-256 digest of a byte string.
std::string sha256_hex(std::string_view data);

// Digest of a file's contents. Throws DataError if the file cannot be read.
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace newsgraph
