#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "pricing/errors.hpp"

namespace pricing {

// Deterministic, platform-independent generator (splitmix64). The standard
// distributions are implementation-defined, which would break seed-pinned
// expectations across toolchains, so sampling is done by hand here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, n); rejection sampling keeps it exactly uniform.
    std::uint64_t below(std::uint64_t n) {
        require(n > 0, ErrorKind::Input, "Rng::below requires n > 0");
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

    // Inclusive integer range.
    long range(long lo, long hi) {
        require(lo <= hi, ErrorKind::Input, "Rng::range requires lo <= hi");
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Uniform random permutation of [0, n).
    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        shuffle(p);
        return p;
    }

private:
    std::uint64_t state_;
};

} // namespace pricing
