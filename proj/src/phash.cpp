#include "dualcascade/phash.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "dualcascade/error.hpp"
#include "dualcascade/kernels.hpp"

namespace dualcascade {

std::string fingerprint_text(const Fingerprint& fp) {
    if (const auto* d = std::get_if<DHashKey>(&fp)) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d->bits));
        return buf;
    }
    return std::get<MomentsKey>(fp).text;
}

std::size_t FingerprintHash::operator()(const Fingerprint& fp) const {
    if (const auto* d = std::get_if<DHashKey>(&fp)) return std::hash<std::uint64_t>{}(d->bits);
    return std::hash<std::string>{}(std::get<MomentsKey>(fp).text) ^ 0x9e3779b97f4a7c15ULL;
}

DHashKey dhash(const ImageBuffer& gray) {
    constexpr int kCols = 9;
    constexpr int kRows = 8;
    if (gray.channels != 1) throw DataError("dhash needs a 1-channel image");
    if (gray.width < kCols || gray.height < kRows) throw DataError("image smaller than 9x8");
    // Keeps sum * count products of two cells below 2^64.
    if (static_cast<std::uint64_t>(gray.width) * static_cast<std::uint64_t>(gray.height) > (std::uint64_t{1} << 31)) {
        throw DataError("image too large for dhash");
    }

    std::array<int, kCols + 1> bx{};
    std::array<int, kRows + 1> by{};
    for (int k = 0; k <= kCols; ++k) bx[k] = static_cast<int>(static_cast<long long>(k) * gray.width / kCols);
    for (int k = 0; k <= kRows; ++k) by[k] = static_cast<int>(static_cast<long long>(k) * gray.height / kRows);

    std::array<std::array<std::uint64_t, kCols>, kRows> sum{};
    std::array<std::array<std::uint64_t, kCols>, kRows> count{};
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c < kCols; ++c) {
            std::uint64_t s = 0;
            for (int y = by[r]; y < by[r + 1]; ++y) {
                for (int x = bx[c]; x < bx[c + 1]; ++x) s += gray.at(x, y);
            }
            sum[r][c] = s;
            count[r][c] = static_cast<std::uint64_t>(by[r + 1] - by[r]) * static_cast<std::uint64_t>(bx[c + 1] - bx[c]);
        }
    }

    std::uint64_t bits = 0;
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c + 1 < kCols; ++c) {
            // mean(left) > mean(right) without division.
            const std::uint64_t left = sum[r][c] * count[r][c + 1];
            const std::uint64_t right = sum[r][c + 1] * count[r][c];
            if (left > right) bits |= std::uint64_t{1} << (63 - (r * 8 + c));
        }
    }
    return {bits};
}

std::complex<double> complex_moment(const ImageBuffer& gray, int p, int q) {
    if (p < 0 || q < 0 || p + q > 3) throw DataError("complex moment order must satisfy p + q <= 3");
    const auto sums = kernels::moment_sums(gray);
    return sums.at(p, q) / std::pow(sums.m00, (p + q) / 2.0 + 1.0);
}

MomentInvariants moment_invariants(const ImageBuffer& gray) {
    const auto sums = kernels::moment_sums(gray);
    auto c = [&](int p, int q) { return sums.at(p, q) / std::pow(sums.m00, (p + q) / 2.0 + 1.0); };
    const auto c11 = c(1, 1);
    const auto c21 = c(2, 1);
    const auto c12 = c(1, 2);
    const auto c20 = c(2, 0);
    const auto c30 = c(3, 0);
    const auto t3 = c20 * c12 * c12;
    const auto t5 = c30 * c12 * c12 * c12;
    MomentInvariants inv;
    inv.phi = {c11.real(), (c21 * c12).real(), t3.real(), t3.imag(), t5.real(), t5.imag()};
    return inv;
}

double moments_scalar(const MomentInvariants& inv) {
    return inv.phi[0] + inv.phi[1] + inv.phi[2] + inv.phi[4];
}

std::string quantize_key(double value) {
    if (!std::isfinite(value)) throw DataError("moment fingerprint is not finite");
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    std::string key(buf);
    if (key == "-0") key = "0";
    return key;
}

MomentsKey moments_fingerprint(const ImageBuffer& gray) {
    return {quantize_key(moments_scalar(moment_invariants(gray)))};
}

} // namespace dualcascade
