#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace srlfuse {

// Stable 64-bit FNV-1a; identical on every platform.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

// Hash of a token sequence joined by single spaces.
std::uint64_t sentence_hash(std::span<const std::string> tokens);

std::string hex64(std::uint64_t value);

std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::string& path);

}  // namespace srlfuse
