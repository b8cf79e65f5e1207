#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <variant>

#include "dualcascade/image.hpp"

namespace dualcascade {

struct DHashKey {
    std::uint64_t bits = 0;
    bool operator==(const DHashKey&) const = default;
};

struct MomentsKey {
    std::string text;
    bool operator==(const MomentsKey&) const = default;
};

using Fingerprint = std::variant<DHashKey, MomentsKey>;

/// 16 lowercase hex digits for dHash, the decimal key for moments.
std::string fingerprint_text(const Fingerprint& fp);

struct FingerprintHash {
    std::size_t operator()(const Fingerprint& fp) const;
};

/// 64-bit difference hash over a 9x8 grid of integer cell sums.
/// Requires a 1-channel image at least 9 wide and 8 high.
DHashKey dhash(const ImageBuffer& gray);

/// Centroid-centred complex moment normalised by m00^((p+q)/2 + 1), p + q <= 3.
std::complex<double> complex_moment(const ImageBuffer& gray, int p, int q);

/// phi1 = c11, phi2 = |c21|^2, phi3/phi4 = Re/Im(c20 c12^2), phi5/phi6 = Re/Im(c30 c12^3).
/// Rotation invariant; phi4 and phi6 flip sign under mirroring.
struct MomentInvariants {
    std::array<double, 6> phi{};
};

MomentInvariants moment_invariants(const ImageBuffer& gray);

/// phi1 + phi2 + phi3 + phi5, before quantisation.
double moments_scalar(const MomentInvariants& inv);

/// Scalar rounded to 9 significant digits.
std::string quantize_key(double value);

MomentsKey moments_fingerprint(const ImageBuffer& gray);

} // namespace dualcascade
