#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dualcascade {

/// Row-major 8-bit image, 1 (gray) or 3 (RGB) interleaved channels.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int x, int y, int c = 0) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool operator==(const ImageBuffer&) const = default;
};

ImageBuffer make_image(int width, int height, int channels);

/// Decodes binary PGM (P5) or PPM (P6) with maxval 255.
ImageBuffer load_image_pnm(std::span<const std::uint8_t> bytes);
ImageBuffer load_image_file(const std::string& path);

std::vector<std::uint8_t> encode_pnm(const ImageBuffer& image);
void save_image_file(const std::string& path, const ImageBuffer& image);

/// BT.601 luma, integer rounded. Gray input is returned unchanged.
ImageBuffer to_grayscale(const ImageBuffer& image);

// Exact pixel permutations used to build transformed duplicates.
ImageBuffer rotate90(const ImageBuffer& image); // clockwise
ImageBuffer rotate180(const ImageBuffer& image);
ImageBuffer rotate270(const ImageBuffer& image);
ImageBuffer mirror_horizontal(const ImageBuffer& image); // flip left/right
ImageBuffer mirror_vertical(const ImageBuffer& image);   // flip top/bottom

} // namespace dualcascade
