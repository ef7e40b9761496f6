#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

namespace nashlab {

// Locale-independent double formatting.
std::string format_double(double v);                  // shortest round-trip
std::string format_double_sig(double v, int digits);  // general, fixed significant digits
std::string format_double_hex(double v);              // bit-exact round-trip
bool parse_double(std::string_view s, double& out);   // accepts both forms

// Deterministic 64-bit mix for seed derivation.
uint64_t split_seed(uint64_t seed, uint64_t stream);

}  // namespace nashlab
