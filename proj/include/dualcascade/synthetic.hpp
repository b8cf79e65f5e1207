#pragma once

// Deterministic test data: paired prediction records with partially
// complementary errors, and random images. Uses its own generator and
// distributions so output is identical on every platform.

#include <cstdint>
#include <utility>
#include <vector>

#include "dualcascade/image.hpp"
#include "dualcascade/records.hpp"

namespace dualcascade::synthetic {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

struct PairSpec {
    std::size_t samples = 500;
    std::size_t classes = 10;
    std::uint64_t seed = 20240611;
    // Joint correctness mix; the remainder is "neither correct".
    double both_correct = 0.55;
    double only_a = 0.18;
    double only_b = 0.18;
};

/// Records for models A and B over the same ids ("s0000", "s0001", ...).
std::pair<std::vector<PredictionRecord>, std::vector<PredictionRecord>> make_pair(const PairSpec& spec);

/// Logits whose argmax is `predicted`, with softmax margin controlled by `margin`.
std::vector<double> make_logits(SplitMix64& rng, std::size_t classes, int predicted, double margin);

ImageBuffer random_image(SplitMix64& rng, int width, int height, int channels = 1);

/// Zero-padded id that sorts in numeric order.
std::string sample_id(std::size_t index);

} // namespace dualcascade::synthetic
