#include "nashlab/util.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace nashlab {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_double_sig(double v, int digits) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
  return std::string(buf, ptr);
}

std::string format_double_hex(double v) {
  char buf[64];
  int n = std::snprintf(buf, sizeof(buf), "%a", v);
  return std::string(buf, buf + n);
}

bool parse_double(std::string_view s, double& out) {
  // strtod handles both decimal and hexfloat spellings.
  std::string tmp(s);
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return end == tmp.c_str() + tmp.size() && !tmp.empty();
}

uint64_t split_seed(uint64_t seed, uint64_t stream) {
  // splitmix64 step
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace nashlab
