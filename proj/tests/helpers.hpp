#pragma once

#include <string>
#include <vector>

#include "dualcascade/records.hpp"
#include "dualcascade/synthetic.hpp"

namespace testutil {

inline dualcascade::PairedDataset paired_from(const std::vector<std::vector<double>>& a,
                                              const std::vector<std::vector<double>>& b,
                                              const std::vector<int>& labels) {
    dualcascade::PairedDataset d;
    d.num_classes = a.empty() ? 0 : a[0].size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        d.samples.push_back({dualcascade::synthetic::sample_id(i), labels[i], a[i], b[i]});
    }
    return d;
}

inline dualcascade::PairedDataset random_paired(std::uint64_t seed, std::size_t n, std::size_t k) {
    dualcascade::synthetic::PairSpec spec;
    spec.samples = n;
    spec.classes = k;
    spec.seed = seed;
    auto [a, b] = dualcascade::synthetic::make_pair(spec);
    return dualcascade::align_records(a, b);
}

inline std::string bundled(const std::string& name) { return std::string(DUALCASCADE_DATA_DIR) + "/" + name; }

} // namespace testutil
