#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace packing3d {

enum class Family { uniform, cube_heavy, thin_heavy, grid12 };

inline Family parse_family(std::string_view s) {
    if (s == "uniform") return Family::uniform;
    if (s == "cube-heavy" || s == "cube_heavy") return Family::cube_heavy;
    if (s == "thin-heavy" || s == "thin_heavy") return Family::thin_heavy;
    if (s == "grid12") return Family::grid12;
    throw ParseError("unknown generator family '" + std::string(s) + "'");
}

inline const char* family_name(Family f) {
    switch (f) {
        case Family::uniform: return "uniform";
        case Family::cube_heavy: return "cube-heavy";
        case Family::thin_heavy: return "thin-heavy";
        case Family::grid12: return "grid12";
    }
    return "?";
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    long uniform_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }

    // j/den with j uniform in [lo, hi]
    Rational grid(long den, long lo, long hi) {
        return frac(Integer(uniform_int(lo, hi)), Integer(den));
    }

    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline Item random_item(Rng& rng, Family fam, std::size_t index) {
    Item it;
    it.id = "i" + std::to_string(index);
    switch (fam) {
        case Family::uniform: {
            const long den = 100;
            it.w = rng.grid(den, 1, den);
            it.d = rng.grid(den, 1, den);
            it.h = rng.grid(den, 1, den);
            break;
        }
        case Family::cube_heavy: {
            const long den = 60;
            if (rng.coin(0.7)) {
                Rational s = rng.grid(den, den / 4, den);
                it.w = it.d = it.h = s;
            } else {
                it.w = rng.grid(den, 1, den);
                it.d = rng.grid(den, 1, den);
                it.h = rng.grid(den, 1, den);
            }
            break;
        }
        case Family::thin_heavy: {
            const long den = 240;
            it.w = rng.grid(den, 1, den);
            it.d = rng.grid(den, 1, den);
            it.h = rng.grid(den, 1, den);
            if (rng.coin(0.75)) {
                Rational thin = rng.grid(den, 1, 6);
                switch (rng.uniform_int(0, 2)) {
                    case 0: it.h = thin; break;
                    case 1: it.w = thin; break;
                    default: it.d = thin; break;
                }
            }
            break;
        }
        case Family::grid12: {
            it.w = rng.grid(12, 1, 12);
            it.d = rng.grid(12, 1, 12);
            it.h = rng.grid(12, 1, 12);
            break;
        }
    }
    return it;
}

inline std::vector<Item> random_instance(Rng& rng, Family fam, std::size_t n) {
    std::vector<Item> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) items.push_back(random_item(rng, fam, i));
    return items;
}

inline std::vector<Item> random_instance(std::uint64_t seed, Family fam, std::size_t n) {
    Rng rng(seed);
    return random_instance(rng, fam, n);
}

}  // namespace packing3d
