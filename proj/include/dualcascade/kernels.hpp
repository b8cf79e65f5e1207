#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version (the default
// entry point) and a straightforward serial reference in kernels::serial that
// tests compare against. Parallel versions write to per-index slots and
// reduce in a fixed order, so results do not depend on the thread count.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dualcascade/confidence.hpp"
#include "dualcascade/image.hpp"
#include "dualcascade/records.hpp"

namespace dualcascade::kernels {

/// Per-sample quantities the cascade decision needs.
struct ScoreRow {
    double score_a = 0.0;
    double score_b = 0.0;
    int pred_a = 0;
    int pred_b = 0;
    int label = 0;
};

/// Outcome counts of one threshold setting over a score table.
struct SweepCounts {
    std::size_t correct = 0;
    std::size_t escalated = 0;
};

/// Complex moments c_pq for p, q in [0, 3], p + q <= 3, centred but not yet
/// scale-normalised, plus the total intensity.
struct MomentSums {
    std::array<std::complex<double>, 16> c{};  // index p * 4 + q
    double m00 = 0.0;

    std::complex<double> at(int p, int q) const { return c[static_cast<std::size_t>(p * 4 + q)]; }
};

/// Decision for one precomputed row (the offline cascade H).
inline bool row_correct(const ScoreRow& row, double lambda, ScoreKind kind, bool post_check,
                        bool* escalated = nullptr) {
    if (passes_threshold(row.score_a, lambda, kind)) {
        if (escalated) *escalated = false;
        return row.pred_a == row.label;
    }
    if (escalated) *escalated = true;
    const bool take_a = post_check && better_score(row.score_a, row.score_b, kind) == Selection::A;
    return (take_a ? row.pred_a : row.pred_b) == row.label;
}

std::vector<ScoreRow> score_table(const PairedDataset& paired, ScoreKind kind);
std::vector<SweepCounts> sweep(std::span<const ScoreRow> rows, std::span<const double> lambdas,
                               ScoreKind kind, bool post_check);
/// Row-major n x n matrix over correctness vectors; diagonal 0.
std::vector<double> complementarity_cells(const std::vector<std::vector<bool>>& correct);
MomentSums moment_sums(const ImageBuffer& gray);

namespace serial {
std::vector<ScoreRow> score_table(const PairedDataset& paired, ScoreKind kind);
std::vector<SweepCounts> sweep(std::span<const ScoreRow> rows, std::span<const double> lambdas,
                               ScoreKind kind, bool post_check);
std::vector<double> complementarity_cells(const std::vector<std::vector<bool>>& correct);
MomentSums moment_sums(const ImageBuffer& gray);
} // namespace serial

/// Threads OpenMP will use (1 when built without OpenMP).
int max_threads();

} // namespace dualcascade::kernels
