#pragma once

#include <filesystem>

#include "gridadapt/image.hpp"

namespace gridadapt {

enum class ImageFormat {
  Auto,       ///< choose from the file extension (.pgm -> binary graymap, .png)
  PgmBinary,  ///< P5
  PgmAscii,   ///< P2
  Png,
};

/// Reads a 2-D graymap or PNG. Colour PNGs are reduced to Rec. 601 luma;
/// alpha is ignored. Sample values are returned unscaled (0..maxval).
Image loadImage(const std::filesystem::path& path, ImageFormat format = ImageFormat::Auto);

/// Writes an 8-bit grayscale file; values are rounded and clamped to [0, 255].
void saveImage(const Image& img, const std::filesystem::path& path,
               ImageFormat format = ImageFormat::Auto);

/// Encodes an 8-bit grayscale or RGB buffer as PNG bytes.
std::vector<unsigned char> encodePng(std::span<const unsigned char> pixels, std::size_t width,
                                     std::size_t height, int channels);

}  // namespace gridadapt
