#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace logihard {

inline constexpr int kSchemaVersion = 1;

enum class Tier : std::uint8_t { Easy = 0, Medium = 1, Hard = 2, Expert = 3 };

inline constexpr Tier kAllTiers[] = {Tier::Easy, Tier::Medium, Tier::Hard, Tier::Expert};

std::string_view tier_name(Tier tier);
std::optional<Tier> parse_tier(std::string_view name);
Tier tier_from_string(std::string_view name);  // throws std::invalid_argument

// Configuration problems (missing weights, infeasible tiers, bad files).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Seeded randomness. The engine is std::mt19937_64, whose output sequence is
// fixed by the standard. Bounded integers and unit reals are derived here
// rather than through <random> distributions, whose algorithms are
// implementation-defined, so draws are identical on every toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound);
    // Uniform on [lo, hi] inclusive.
    int between(int lo, int hi);
    // Uniform on [0, 1) with 53 random bits.
    double unit();
    bool bernoulli(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer; derives independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

std::string trim(std::string_view text);

}  // namespace logihard
