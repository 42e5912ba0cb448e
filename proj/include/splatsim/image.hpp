#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

namespace splatsim {

// Row-major RGB image, float channels in [0,1] until quantization at save.
struct Image {
    int width = 0, height = 0;
    std::vector<float> pixels;  // 3 floats per pixel

    Image() = default;
    Image(int w, int h, const Eigen::Vector3d& fill = Eigen::Vector3d::Zero());

    float* at(int x, int y) { return pixels.data() + 3 * (size_t(y) * size_t(width) + size_t(x)); }
    const float* at(int x, int y) const {
        return pixels.data() + 3 * (size_t(y) * size_t(width) + size_t(x));
    }
    void set(int x, int y, const Eigen::Vector3d& rgb);
    Eigen::Vector3d get(int x, int y) const;
};

// Writes 8-bit RGB, format chosen by extension (.png default, .ppm fallback).
// Encoder settings are fixed so identical pixels give identical bytes.
void save_frame(const Image& image, const std::filesystem::path& path);

Image load_image(const std::filesystem::path& path);

}  // namespace splatsim
