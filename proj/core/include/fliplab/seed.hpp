#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace fliplab {

// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

// Order-sensitive combination of seed material; stable across platforms and builds.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

// FNV-1a of the bytes of `text`.
std::uint64_t hash_string(std::string_view text);

}  // namespace fliplab
