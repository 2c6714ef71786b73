#include "gridadapt/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "gridadapt/errors.hpp"

namespace gridadapt {
namespace {

namespace fs = std::filesystem;

ImageFormat resolveFormat(const fs::path& path, ImageFormat format, bool forWrite) {
  if (format != ImageFormat::Auto) return format;
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") return ImageFormat::Png;
  if (ext == ".pgm" || ext == ".pnm") return ImageFormat::PgmBinary;
  if (!forWrite) {
    // Sniff the magic bytes.
    std::ifstream in(path, std::ios::binary);
    char magic[2]{};
    if (in.read(magic, 2)) {
      if (magic[0] == 'P' && magic[1] == '5') return ImageFormat::PgmBinary;
      if (magic[0] == 'P' && magic[1] == '2') return ImageFormat::PgmAscii;
      if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') return ImageFormat::Png;
    }
  }
  throw IoError("cannot determine image format for '" + path.string() + "'");
}

// Next whitespace-delimited token of a graymap header, skipping '#' comments.
std::string headerToken(std::istream& in) {
  std::string token;
  int c = 0;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      if (!token.empty()) return token;
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

std::size_t headerNumber(std::istream& in, const fs::path& path, const char* what) {
  const std::string token = headerToken(in);
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw IoError("malformed graymap header in '" + path.string() + "': bad " + what + " '" +
                  token + "'");
  }
}

Image loadPgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  const std::string magic = headerToken(in);
  if (magic != "P2" && magic != "P5") {
    throw IoError("'" + path.string() + "' is not a graymap (magic '" + magic + "')");
  }
  const std::size_t width = headerNumber(in, path, "width");
  const std::size_t height = headerNumber(in, path, "height");
  const std::size_t maxval = headerNumber(in, path, "maxval");
  if (width == 0 || height == 0) throw IoError("'" + path.string() + "' has zero extent");
  if (maxval == 0 || maxval > 65535) {
    throw IoError("unsupported graymap bit depth in '" + path.string() +
                  "': maxval " + std::to_string(maxval));
  }
  std::vector<double> data(width * height);
  if (magic == "P5") {
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(data.size() * bytes);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
      throw IoError("truncated pixel data in '" + path.string() + "'");
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      data[i] = bytes == 1 ? raw[i] : static_cast<double>((raw[2 * i] << 8) | raw[2 * i + 1]);
    }
  } else {
    for (double& v : data) {
      v = static_cast<double>(headerNumber(in, path, "sample"));
    }
  }
  return Image({width, height}, std::move(data));
}

unsigned char toByte(double v) {
  return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
}

void savePgm(const Image& img, const fs::path& path, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << (binary ? "P5" : "P2") << '\n' << img.width() << ' ' << img.height() << "\n255\n";
  const auto data = img.data();
  if (binary) {
    std::vector<unsigned char> raw(data.size());
    std::transform(data.begin(), data.end(), raw.begin(), toByte);
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  } else {
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        out << static_cast<int>(toByte(img.at(x, y))) << (x + 1 < img.width() ? ' ' : '\n');
      }
    }
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Image loadPng(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw IoError("cannot read PNG '" + path.string() + "': " + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw IoError("unsupported PNG bit depth in '" + path.string() + "': only 8-bit is read");
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG '" + path.string() + "': " + msg);
  }
  const std::size_t w = image.width;
  const std::size_t h = image.height;
  std::vector<double> data(w * h);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (channels == 1) {
      data[i] = buffer[i];
    } else {
      const unsigned char* p = &buffer[3 * i];
      if (p[0] == p[1] && p[1] == p[2]) {
        data[i] = p[0];
      } else {
        data[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
      }
    }
  }
  return Image({w, h}, std::move(data));
}

void writeBytes(const fs::path& path, std::span<const unsigned char> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<unsigned char> encodePng(std::span<const unsigned char> pixels, std::size_t width,
                                     std::size_t height, int channels) {
  if (channels != 1 && channels != 3) throw ParameterError("PNG encoder takes 1 or 3 channels");
  if (pixels.size() != width * height * static_cast<std::size_t>(channels)) {
    throw ParameterError("PNG pixel buffer size mismatch");
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encoding failed: ") + image.message);
  }
  std::vector<unsigned char> bytes(size);
  if (!png_image_write_to_memory(&image, bytes.data(), &size, 0, pixels.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encoding failed: ") + image.message);
  }
  bytes.resize(size);
  return bytes;
}

Image loadImage(const fs::path& path, ImageFormat format) {
  if (!fs::exists(path)) throw IoError("image file '" + path.string() + "' does not exist");
  switch (resolveFormat(path, format, false)) {
    case ImageFormat::PgmAscii:
    case ImageFormat::PgmBinary: return loadPgm(path);
    case ImageFormat::Png: return loadPng(path);
    case ImageFormat::Auto: break;
  }
  throw IoError("unsupported image format for '" + path.string() + "'");
}

void saveImage(const Image& img, const fs::path& path, ImageFormat format) {
  if (img.dimension() != 2) throw IoError("only 2-D images can be written");
  switch (resolveFormat(path, format, true)) {
    case ImageFormat::PgmBinary: savePgm(img, path, true); return;
    case ImageFormat::PgmAscii: savePgm(img, path, false); return;
    case ImageFormat::Png: {
      std::vector<unsigned char> raw(img.size());
      std::transform(img.data().begin(), img.data().end(), raw.begin(), toByte);
      writeBytes(path, encodePng(raw, img.width(), img.height(), 1));
      return;
    }
    case ImageFormat::Auto: break;
  }
  throw IoError("unsupported image format for '" + path.string() + "'");
}

}  // namespace gridadapt
