#include "splatsim/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "splatsim/errors.hpp"

namespace splatsim {

namespace {

uint8_t quantize(float v) {
    return uint8_t(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

std::vector<uint8_t> to_bytes(const Image& image) {
    std::vector<uint8_t> bytes(image.pixels.size());
    for (size_t i = 0; i < image.pixels.size(); ++i) bytes[i] = quantize(image.pixels[i]);
    return bytes;
}

void save_png(const Image& image, const std::filesystem::path& path) {
    const std::vector<uint8_t> bytes = to_bytes(image);
    png_image png = {};
    png.version = PNG_IMAGE_VERSION;
    png.width = png_uint_32(image.width);
    png.height = png_uint_32(image.height);
    png.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, bytes.data(),
                                 png_int_32(3 * image.width), nullptr)) {
        throw IoError("failed to write PNG '" + path.string() + "': " + png.message);
    }
}

void save_ppm(const Image& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    const std::vector<uint8_t> bytes = to_bytes(image);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

Image load_png(const std::filesystem::path& path) {
    png_image png = {};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str()))
        throw IoError("failed to read PNG '" + path.string() + "': " + png.message);
    png.format = PNG_FORMAT_RGB;
    std::vector<uint8_t> bytes(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, bytes.data(), 0, nullptr))
        throw IoError("failed to decode PNG '" + path.string() + "': " + png.message);

    Image image(int(png.width), int(png.height));
    for (size_t i = 0; i < bytes.size(); ++i) image.pixels[i] = float(bytes[i]) / 255.0f;
    return image;
}

Image load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P6" || w <= 0 || h <= 0 || maxval != 255)
        throw ParseError("unsupported PPM header in '" + path.string() + "'");
    in.get();  // single whitespace after maxval
    std::vector<uint8_t> bytes(size_t(w) * size_t(h) * 3);
    in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!in) throw ParseError("truncated PPM payload in '" + path.string() + "'");
    Image image(w, h);
    for (size_t i = 0; i < bytes.size(); ++i) image.pixels[i] = float(bytes[i]) / 255.0f;
    return image;
}

}  // namespace

Image::Image(int w, int h, const Eigen::Vector3d& fill) : width(w), height(h) {
    pixels.resize(size_t(w) * size_t(h) * 3);
    for (size_t i = 0; i < pixels.size(); i += 3) {
        pixels[i] = float(fill.x());
        pixels[i + 1] = float(fill.y());
        pixels[i + 2] = float(fill.z());
    }
}

void Image::set(int x, int y, const Eigen::Vector3d& rgb) {
    float* p = at(x, y);
    p[0] = float(rgb.x());
    p[1] = float(rgb.y());
    p[2] = float(rgb.z());
}

Eigen::Vector3d Image::get(int x, int y) const {
    const float* p = at(x, y);
    return {p[0], p[1], p[2]};
}

void save_frame(const Image& image, const std::filesystem::path& path) {
    if (image.width <= 0 || image.height <= 0)
        throw ValidationError("cannot save empty image");
    if (const auto parent = path.parent_path(); !parent.empty())
        std::filesystem::create_directories(parent);
    if (path.extension() == ".ppm")
        save_ppm(image, path);
    else
        save_png(image, path);
}

Image load_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw IoError("image '" + path.string() + "' does not exist");
    if (path.extension() == ".ppm") return load_ppm(path);
    return load_png(path);
}

}  // namespace splatsim
