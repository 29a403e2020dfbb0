#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace amc {

// splitmix64 keeps trial streams reproducible across platforms; split()
// derives an independent stream so oracle noise and algorithm draws do not
// interleave.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed), has_spare_(false), spare_(0.0) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    Rng split(uint64_t stream) {
        uint64_t z = (stream + 0x632be59bd9b4e019ULL) * 0xff51afd7ed558ccdULL;
        z ^= z >> 33;
        return Rng(next() ^ z);
    }

    double uniform() {
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
    }

    // Unbiased draw from {0, ..., n-1}.
    int uniform_int(int n) {
        if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
        uint64_t un = static_cast<uint64_t>(n);
        uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return static_cast<int>(x % un);
    }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // k distinct values from {0, ..., n-1}, order of selection.
    std::vector<int> sample_without_replacement(int n, int k) {
        if (k < 0 || k > n) throw std::invalid_argument("sample_without_replacement: bad k");
        std::vector<int> pool(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i;
        std::vector<int> out;
        out.reserve(static_cast<size_t>(k));
        for (int t = 0; t < k; ++t) {
            int idx = t + uniform_int(n - t);
            std::swap(pool[static_cast<size_t>(t)], pool[static_cast<size_t>(idx)]);
            out.push_back(pool[static_cast<size_t>(t)]);
        }
        return out;
    }

private:
    uint64_t state_;
    bool has_spare_;
    double spare_;
};

}  // namespace amc
