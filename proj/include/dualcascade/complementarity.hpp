#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dualcascade/records.hpp"

namespace dualcascade {

/// Set sizes behind the complementarity ratio.
struct OverlapCounts {
    std::size_t either = 0;  // n(a ∪ b)
    std::size_t both = 0;    // n(a ∩ b)
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t total = 0;   // dataset size

    /// (either - both - |a - b|) / total, numerator in integers.
    double ratio() const;
};

int predicted_label(std::span<const double> logits);

/// correct[i] = argmax(logits) == label, one flag per sample.
std::vector<bool> correctness(const PairedDataset& paired, bool model_a);

OverlapCounts overlap_counts(const std::vector<bool>& correct_a, const std::vector<bool>& correct_b);

/// Throws DataError on an empty dataset.
double complementarity(const PairedDataset& paired);
double complementarity(const std::vector<bool>& correct_a, const std::vector<bool>& correct_b);

struct NamedRecords {
    std::string name;
    std::vector<PredictionRecord> records;
};

struct ComplementarityMatrix {
    std::vector<std::string> names;
    std::vector<double> values;  // row-major, size n*n

    std::size_t size() const { return names.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
};

/// All-pairs matrix; alignment failures name the offending pair.
ComplementarityMatrix complementarity_matrix(const std::vector<NamedRecords>& models);

/// Off-diagonal argmax; ties go to the lexicographically smallest name pair.
std::pair<std::size_t, std::size_t> pick_best_pair(const ComplementarityMatrix& matrix);

/// Header of names, one row per model, 6 decimals, unscaled.
std::string matrix_to_csv(const ComplementarityMatrix& matrix);

} // namespace dualcascade
