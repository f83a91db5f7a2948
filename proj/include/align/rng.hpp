#pragma once

#include "align/types.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace align {

// std::mt19937_64 output is fully specified by the standard; the std::
// distributions are not, so every transform below is written out by hand
// to keep byte-level reproducibility across toolchains.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + uniform() * (hi - lo);
    }

    // Unbiased uniform integer in [0, n), n >= 1 (rejection on the top range).
    uint64_t uniform_index(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    double normal(double mean, double sigma) {
        // Marsaglia polar method; one cached value per pair.
        if (has_spare_) {
            has_spare_ = false;
            return mean + sigma * spare_;
        }
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return mean + sigma * u * m;
    }

    // Uniform in the open ball of radius r about center (rejection from the cube).
    Point3 uniform_in_ball(const Point3& center, double r) {
        while (true) {
            const Point3 d(uniform(-r, r), uniform(-r, r), uniform(-r, r));
            if (d.norm() < r) return center + d;
        }
    }

    // Uniform in the open BEV disc of radius r; z stays at the center's z.
    Point3 uniform_in_disc(const Point3& center, double r) {
        while (true) {
            const double dx = uniform(-r, r);
            const double dy = uniform(-r, r);
            if (dx * dx + dy * dy < r * r)
                return Point3(center.x() + dx, center.y() + dy, center.z());
        }
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable child seed for an independent substream (per cluster, per scene, ...).
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x51ed2701ULL));
}

inline uint64_t derive_seed(uint64_t master, const std::string& label) {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the label bytes
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return derive_seed(master, h);
}

}  // namespace align
