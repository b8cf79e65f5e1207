#include "dualcascade/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>

#include "dualcascade/error.hpp"

namespace dualcascade {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then reads one unsigned decimal token.
    long next_number() {
        skip_space_and_comments();
        long value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) throw DataError("invalid PNM header (number too large)");
            ++pos_;
            ++digits;
        }
        if (digits == 0) throw DataError("invalid PNM header");
        return value;
    }

    // Exactly one whitespace byte separates maxval from the payload.
    std::size_t payload_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) throw DataError("invalid PNM header");
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

template <typename Map>
ImageBuffer remap(const ImageBuffer& src, int out_w, int out_h, Map map) {
    ImageBuffer out = make_image(out_w, out_h, src.channels);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            const auto [sx, sy] = map(x, y);
            for (int c = 0; c < src.channels; ++c) out.at(x, y, c) = src.at(sx, sy, c);
        }
    }
    return out;
}

} // namespace

ImageBuffer make_image(int width, int height, int channels) {
    if (width <= 0 || height <= 0) throw DataError("image dimensions must be positive");
    if (channels != 1 && channels != 3) throw DataError("image must have 1 or 3 channels");
    ImageBuffer img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.pixels.assign(static_cast<std::size_t>(width) * height * channels, 0);
    return img;
}

ImageBuffer load_image_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw DataError("wrong magic (expected P5 or P6)");
    }
    const int channels = bytes[1] == '5' ? 1 : 3;
    HeaderReader header(bytes);
    const long width = header.next_number();
    const long height = header.next_number();
    const long maxval = header.next_number();
    if (maxval != 255) throw DataError("maxval must be 255");
    if (width <= 0 || height <= 0) throw DataError("invalid PNM header (zero dimension)");
    const std::size_t offset = header.payload_offset();

    ImageBuffer img = make_image(static_cast<int>(width), static_cast<int>(height), channels);
    if (bytes.size() - offset < img.pixels.size()) throw DataError("truncated payload");
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(offset), img.pixels.size(), img.pixels.begin());
    return img;
}

ImageBuffer load_image_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        return load_image_pnm(bytes);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::vector<std::uint8_t> encode_pnm(const ImageBuffer& image) {
    const std::string header = std::string(image.channels == 1 ? "P5" : "P6") + "\n" +
                               std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

void save_image_file(const std::string& path, const ImageBuffer& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    const auto bytes = encode_pnm(image);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ImageBuffer to_grayscale(const ImageBuffer& image) {
    if (image.channels == 1) return image;
    ImageBuffer out = make_image(image.width, image.height, 1);
    const std::size_t n = out.pixels.size();
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned r = image.pixels[3 * i];
        const unsigned g = image.pixels[3 * i + 1];
        const unsigned b = image.pixels[3 * i + 2];
        // round(0.299 R + 0.587 G + 0.114 B) in exact integer arithmetic; max 255.
        out.pixels[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
    }
    return out;
}

ImageBuffer rotate90(const ImageBuffer& image) {
    const int h = image.height;
    return remap(image, image.height, image.width,
                 [h](int x, int y) { return std::pair{y, h - 1 - x}; });
}

ImageBuffer rotate180(const ImageBuffer& image) {
    const int w = image.width;
    const int h = image.height;
    return remap(image, w, h, [w, h](int x, int y) { return std::pair{w - 1 - x, h - 1 - y}; });
}

ImageBuffer rotate270(const ImageBuffer& image) {
    const int w = image.width;
    return remap(image, image.height, image.width,
                 [w](int x, int y) { return std::pair{w - 1 - y, x}; });
}

ImageBuffer mirror_horizontal(const ImageBuffer& image) {
    const int w = image.width;
    return remap(image, w, image.height, [w](int x, int y) { return std::pair{w - 1 - x, y}; });
}

ImageBuffer mirror_vertical(const ImageBuffer& image) {
    const int h = image.height;
    return remap(image, image.width, h, [h](int x, int y) { return std::pair{x, h - 1 - y}; });
}

} // namespace dualcascade
