#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pinvminres/types.hpp"

namespace pinvminres {

class ImageError : public std::runtime_error {
public:
    ImageError(const std::string& what, std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Square image, one matrix per channel (1 or 3), samples nominally in [0, 1].
struct ImagePlane {
    Index n = 0;
    std::vector<RealMatrix> channels;

    int channel_count() const { return static_cast<int>(channels.size()); }
};

ImagePlane make_plane(Index n, int channels, double fill = 0.0);

// binary P5 / P6 with maxval 255
ImagePlane read_image(const std::string& path);
ImagePlane decode_pnm(const std::string& bytes);
void write_image(const ImagePlane& plane, const std::string& path);
std::string encode_pnm(const ImagePlane& plane);

ImagePlane clamp01(const ImagePlane& plane);

// column-major vec of one channel, and back
Vector vec(const RealMatrix& channel);
RealMatrix unvec(const Vector& v, Index n);

// 10 log10(1 / MSE); +infinity for identical images
double psnr(const ImagePlane& x, const ImagePlane& y);
bool psnr_is_infinite(double value);

// mean SSIM over valid 11x11 Gaussian windows (sigma 1.5), C1 = 0.01^2, C2 = 0.03^2,
// averaged over channels
double ssim(const ImagePlane& x, const ImagePlane& y);

ImagePlane add_noise(const ImagePlane& plane, double sigma, std::uint64_t seed);

// deterministic test picture with flat regions, edges and a smooth ramp
ImagePlane make_test_image(Index n, int channels = 1);

}  // namespace pinvminres
