#include "dualcascade/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dualcascade::synthetic {

std::string sample_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%04zu", index);
    return buf;
}

std::vector<double> make_logits(SplitMix64& rng, std::size_t classes, int predicted, double margin) {
    std::vector<double> z(classes);
    for (auto& v : z) v = rng.uniform(-1.0, 1.0);
    double top = z[0];
    for (double v : z) top = std::max(top, v);
    z[static_cast<std::size_t>(predicted)] = top + margin;
    // Four decimals keep the files readable; the margin floor keeps argmax unique.
    for (auto& v : z) v = std::round(v * 1e4) / 1e4;
    return z;
}

namespace {

int wrong_class(SplitMix64& rng, std::size_t classes, int label) {
    const auto offset = 1 + rng.below(classes - 1);
    return static_cast<int>((static_cast<std::size_t>(label) + offset) % classes);
}

} // namespace

std::pair<std::vector<PredictionRecord>, std::vector<PredictionRecord>> make_pair(const PairSpec& spec) {
    SplitMix64 rng(spec.seed);
    std::vector<PredictionRecord> a;
    std::vector<PredictionRecord> b;
    a.reserve(spec.samples);
    b.reserve(spec.samples);
    for (std::size_t i = 0; i < spec.samples; ++i) {
        const int label = static_cast<int>(rng.below(spec.classes));
        const double u = rng.uniform();
        const bool a_ok = u < spec.both_correct + spec.only_a;
        const bool b_ok = u < spec.both_correct || (u >= spec.both_correct + spec.only_a &&
                                                    u < spec.both_correct + spec.only_a + spec.only_b);
        // Correct answers tend to be confident, wrong ones hesitant, with overlap.
        auto margin = [&](bool ok) { return ok ? rng.uniform(0.2, 5.0) : rng.uniform(0.01, 2.5); };
        const int pred_a = a_ok ? label : wrong_class(rng, spec.classes, label);
        const int pred_b = b_ok ? label : wrong_class(rng, spec.classes, label);
        const double ma = margin(a_ok);
        const double mb = margin(b_ok);
        const std::string id = sample_id(i);
        a.push_back({id, label, make_logits(rng, spec.classes, pred_a, ma)});
        b.push_back({id, label, make_logits(rng, spec.classes, pred_b, mb)});
    }
    return {std::move(a), std::move(b)};
}

ImageBuffer random_image(SplitMix64& rng, int width, int height, int channels) {
    ImageBuffer img = make_image(width, height, channels);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

} // namespace dualcascade::synthetic
