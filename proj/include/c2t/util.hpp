#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c2t {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

std::string lowercase(std::string_view s);
std::string trim(std::string_view s);

// Lowercased alphanumeric runs; everything else is a boundary.
std::vector<std::string> word_tokens(std::string_view text);

// Seeded FNV-1a, stable across platforms.
std::uint64_t hash64(std::string_view s, std::uint64_t seed);

// Deterministic RNG (splitmix64 core). We avoid std distributions so that
// sampled values are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // uniform in [0, 1)
  double next_double();
  // uniform in [0, n)
  std::size_t next_index(std::size_t n);

 private:
  std::uint64_t state_;
};

}  // namespace c2t
