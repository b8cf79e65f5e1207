#include "dualcascade/kernels.hpp"

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dualcascade/complementarity.hpp"
#include "dualcascade/error.hpp"

namespace dualcascade::kernels {

namespace {

ScoreRow make_row(const PairedSample& s, ScoreKind kind) {
    ScoreRow row;
    row.score_a = score_logits(s.logits_a, kind);
    row.score_b = score_logits(s.logits_b, kind);
    row.pred_a = predicted_label(s.logits_a);
    row.pred_b = predicted_label(s.logits_b);
    row.label = s.label;
    return row;
}

SweepCounts sweep_one(std::span<const ScoreRow> rows, double lambda, ScoreKind kind, bool post_check) {
    SweepCounts c;
    for (const auto& row : rows) {
        bool escalated = false;
        c.correct += row_correct(row, lambda, kind, post_check, &escalated) ? 1 : 0;
        c.escalated += escalated ? 1 : 0;
    }
    return c;
}

struct Centroid {
    double x = 0.0;
    double y = 0.0;
    std::uint64_t mass = 0;
};

Centroid centroid(const ImageBuffer& gray) {
    if (gray.channels != 1) throw DataError("moments need a 1-channel image");
    std::uint64_t m00 = 0, m10 = 0, m01 = 0;
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            const std::uint64_t f = gray.at(x, y);
            m00 += f;
            m10 += f * static_cast<std::uint64_t>(x);
            m01 += f * static_cast<std::uint64_t>(y);
        }
    }
    if (m00 == 0) throw DataError("zero total intensity");
    return {static_cast<double>(m10) / static_cast<double>(m00),
            static_cast<double>(m01) / static_cast<double>(m00), m00};
}

// Adds f * z^p * conj(z)^q for every p + q <= 3.
inline void accumulate_pixel(std::array<std::complex<double>, 16>& acc, std::complex<double> z, double f) {
    const std::complex<double> zc = std::conj(z);
    std::array<std::complex<double>, 4> zp{1.0, z, z * z, z * z * z};
    std::array<std::complex<double>, 4> zq{1.0, zc, zc * zc, zc * zc * zc};
    for (int p = 0; p <= 3; ++p) {
        for (int q = 0; p + q <= 3; ++q) acc[static_cast<std::size_t>(p * 4 + q)] += f * zp[p] * zq[q];
    }
}

std::array<std::complex<double>, 16> row_sums(const ImageBuffer& gray, int y, const Centroid& c) {
    std::array<std::complex<double>, 16> acc{};
    const double dy = static_cast<double>(y) - c.y;
    for (int x = 0; x < gray.width; ++x) {
        const double f = gray.at(x, y);
        if (f == 0.0) continue;
        accumulate_pixel(acc, {static_cast<double>(x) - c.x, dy}, f);
    }
    return acc;
}

} // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::vector<ScoreRow> score_table(const PairedDataset& paired, ScoreKind kind) {
    const auto n = static_cast<std::ptrdiff_t>(paired.size());
    std::vector<ScoreRow> rows(paired.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) rows[i] = make_row(paired.samples[i], kind);
    return rows;
}

std::vector<SweepCounts> sweep(std::span<const ScoreRow> rows, std::span<const double> lambdas, ScoreKind kind,
                               bool post_check) {
    const auto n = static_cast<std::ptrdiff_t>(lambdas.size());
    std::vector<SweepCounts> out(lambdas.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = sweep_one(rows, lambdas[i], kind, post_check);
    return out;
}

std::vector<double> complementarity_cells(const std::vector<std::vector<bool>>& correct) {
    const std::size_t n = correct.size();
    std::vector<double> out(n * n, 0.0);
    const auto pairs = static_cast<std::ptrdiff_t>(n * n);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < pairs; ++k) {
        const auto i = static_cast<std::size_t>(k) / n;
        const auto j = static_cast<std::size_t>(k) % n;
        if (i < j) {
            const double v = complementarity(correct[i], correct[j]);
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    return out;
}

MomentSums moment_sums(const ImageBuffer& gray) {
    const Centroid c = centroid(gray);
    std::vector<std::array<std::complex<double>, 16>> rows(static_cast<std::size_t>(gray.height));
#pragma omp parallel for schedule(static)
    for (int y = 0; y < gray.height; ++y) rows[static_cast<std::size_t>(y)] = row_sums(gray, y, c);

    MomentSums out;
    out.m00 = static_cast<double>(c.mass);
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) out.c[k] += r[k];
    }
    return out;
}

namespace serial {

std::vector<ScoreRow> score_table(const PairedDataset& paired, ScoreKind kind) {
    std::vector<ScoreRow> rows;
    rows.reserve(paired.size());
    for (const auto& s : paired.samples) rows.push_back(make_row(s, kind));
    return rows;
}

std::vector<SweepCounts> sweep(std::span<const ScoreRow> rows, std::span<const double> lambdas, ScoreKind kind,
                               bool post_check) {
    std::vector<SweepCounts> out;
    out.reserve(lambdas.size());
    for (double lambda : lambdas) out.push_back(sweep_one(rows, lambda, kind, post_check));
    return out;
}

std::vector<double> complementarity_cells(const std::vector<std::vector<bool>>& correct) {
    const std::size_t n = correct.size();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) out[i * n + j] = complementarity(correct[i], correct[j]);
        }
    }
    return out;
}

// Single running accumulator in scan order.
MomentSums moment_sums(const ImageBuffer& gray) {
    const Centroid c = centroid(gray);
    MomentSums out;
    out.m00 = static_cast<double>(c.mass);
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            const double f = gray.at(x, y);
            if (f == 0.0) continue;
            accumulate_pixel(out.c, {static_cast<double>(x) - c.x, static_cast<double>(y) - c.y}, f);
        }
    }
    return out;
}

} // namespace serial

} // namespace dualcascade::kernels
