#pragma once

#include <cstdint>

namespace l1ssl {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Child seed `index` of `master`. Children are independent of how many
/// siblings exist, so appending runs never changes earlier ones.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Stream tags for derive_seed so different consumers of one run seed do
/// not share random streams.
enum class SeedStream : std::uint64_t {
    dataset = 1,
    label_sample = 2,
    label_noise = 3,
    eigensolver = 4,
};

constexpr std::uint64_t derive_seed(std::uint64_t run_seed, SeedStream stream) noexcept {
    return derive_seed(run_seed, static_cast<std::uint64_t>(stream) << 32);
}

}  // namespace l1ssl
