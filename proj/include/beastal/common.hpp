#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace beastal {

inline constexpr std::string_view kVersion = "0.1.0";

/// Raised when a reduced flow system has no unique solution, e.g. a free
/// node with no path to any pressure-fixed node.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Stream tags keep RNG consumers of the same run seed independent.
inline constexpr std::uint64_t kStreamSamples = 1;
inline constexpr std::uint64_t kStreamInit = 2;
inline constexpr std::uint64_t kStreamTask = 3;
inline constexpr std::uint64_t kStreamSplit = 4;
inline constexpr std::uint64_t kStreamEval = 5;
inline constexpr std::uint64_t kStreamShuffle = 6;

/// Deterministic engine for (seed, stream); identical arguments always
/// reproduce the identical sequence.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace beastal
