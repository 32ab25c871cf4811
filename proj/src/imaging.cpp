#include "pinvminres/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pinvminres/random.hpp"

namespace pinvminres {

ImageError::ImageError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

ImagePlane make_plane(Index n, int channels, double fill) {
    if (channels != 1 && channels != 3) throw std::invalid_argument("images have 1 or 3 channels");
    ImagePlane p;
    p.n = n;
    p.channels.assign(static_cast<std::size_t>(channels), RealMatrix::Constant(n, n, fill));
    return p;
}

namespace {

struct HeaderReader {
    const std::string& s;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < s.size()) {
            const unsigned char c = static_cast<unsigned char>(s[pos]);
            if (std::isspace(c)) {
                ++pos;
            } else if (c == '#') {
                while (pos < s.size() && s[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    long number(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos;
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            if (v > 1'000'000) throw ImageError(std::string(what) + " is too large", start);
            ++pos;
        }
        if (pos == start) {
            if (pos >= s.size()) throw ImageError(std::string("header ends before ") + what, start);
            throw ImageError(std::string("expected ") + what, start);
        }
        return v;
    }
};

void check_same_shape(const ImagePlane& x, const ImagePlane& y) {
    if (x.n != y.n || x.channels.size() != y.channels.size()) throw std::invalid_argument("image shapes differ");
}

RealVector gaussian_window(int size, double sigma) {
    RealVector g(size);
    const int half = size / 2;
    for (int i = 0; i < size; ++i) g(i) = std::exp(-0.5 * (i - half) * (i - half) / (sigma * sigma));
    return g / g.sum();
}

// valid-mode separable filtering with the same 1-D kernel on rows and columns
RealMatrix filter_valid(const RealMatrix& m, const RealVector& g) {
    const Index k = g.size();
    const Index out = m.rows() - k + 1;
    RealMatrix tmp = RealMatrix::Zero(out, m.cols());
    for (Index i = 0; i < k; ++i) tmp += g(i) * m.middleRows(i, out);
    RealMatrix res = RealMatrix::Zero(out, out);
    for (Index j = 0; j < k; ++j) res += g(j) * tmp.middleCols(j, out);
    return res;
}

double ssim_channel(const RealMatrix& x, const RealMatrix& y) {
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;
    const RealVector g = gaussian_window(11, 1.5);
    const RealMatrix mx = filter_valid(x, g);
    const RealMatrix my = filter_valid(y, g);
    const RealMatrix exx = filter_valid(x.cwiseProduct(x), g);
    const RealMatrix eyy = filter_valid(y.cwiseProduct(y), g);
    const RealMatrix exy = filter_valid(x.cwiseProduct(y), g);
    double total = 0.0;
    for (Index j = 0; j < mx.cols(); ++j)
        for (Index i = 0; i < mx.rows(); ++i) {
            const double ux = mx(i, j), uy = my(i, j);
            const double sxx = exx(i, j) - ux * ux;
            const double syy = eyy(i, j) - uy * uy;
            const double sxy = exy(i, j) - ux * uy;
            const double num = (2 * ux * uy + c1) * (2 * sxy + c2);
            const double den = (ux * ux + uy * uy + c1) * (sxx + syy + c2);
            total += num / den;
        }
    return total / static_cast<double>(mx.size());
}

}  // namespace

ImagePlane decode_pnm(const std::string& bytes) {
    HeaderReader r{bytes};
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        throw ImageError("not a binary PGM (P5) or PPM (P6) file", 0);
    const int channels = bytes[1] == '5' ? 1 : 3;
    r.pos = 2;
    const std::size_t width_at = r.pos;
    const long width = r.number("width");
    const long height = r.number("height");
    const std::size_t maxval_at = r.pos;
    const long maxval = r.number("maxval");
    if (maxval != 255) throw ImageError("unsupported maxval " + std::to_string(maxval) + ", expected 255", maxval_at);
    if (width != height)
        throw ImageError("image is " + std::to_string(width) + "x" + std::to_string(height) + ", expected square",
                         width_at);
    if (width < 1) throw ImageError("empty image", width_at);
    if (r.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[r.pos])))
        throw ImageError("missing whitespace after maxval", r.pos);
    ++r.pos;

    const std::size_t n = static_cast<std::size_t>(width);
    const std::size_t need = n * n * static_cast<std::size_t>(channels);
    const std::size_t have = bytes.size() - r.pos;
    if (have < need)
        throw ImageError("truncated pixel data: missing " + std::to_string(need - have) + " of " + std::to_string(need) +
                             " bytes",
                         bytes.size());

    ImagePlane p = make_plane(static_cast<Index>(n), channels);
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data() + r.pos);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x)
            for (int c = 0; c < channels; ++c)
                p.channels[static_cast<std::size_t>(c)](static_cast<Index>(y), static_cast<Index>(x)) =
                    data[(y * n + x) * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)] / 255.0;
    return p;
}

ImagePlane read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return decode_pnm(ss.str());
}

std::string encode_pnm(const ImagePlane& plane) {
    const int channels = plane.channel_count();
    if (channels != 1 && channels != 3) throw std::invalid_argument("images have 1 or 3 channels");
    const std::size_t n = static_cast<std::size_t>(plane.n);
    std::string out = (channels == 1 ? "P5\n" : "P6\n") + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + n * n * static_cast<std::size_t>(channels));
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x)
            for (int c = 0; c < channels; ++c) {
                double v = plane.channels[static_cast<std::size_t>(c)](static_cast<Index>(y), static_cast<Index>(x));
                v = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
                out[header + (y * n + x) * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)] =
                    static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
            }
    return out;
}

void write_image(const ImagePlane& plane, const std::string& path) {
    const std::string bytes = encode_pnm(plane);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing image '" + path + "'");
}

ImagePlane clamp01(const ImagePlane& plane) {
    ImagePlane out = plane;
    for (RealMatrix& c : out.channels) c = c.cwiseMax(0.0).cwiseMin(1.0);
    return out;
}

Vector vec(const RealMatrix& channel) {
    return Eigen::Map<const RealVector>(channel.data(), channel.size()).cast<Complex>();
}

RealMatrix unvec(const Vector& v, Index n) {
    require_same_size(n * n, v.size(), "image vector");
    const RealVector re = v.real();
    return Eigen::Map<const RealMatrix>(re.data(), n, n);
}

double psnr(const ImagePlane& x, const ImagePlane& y) {
    check_same_shape(x, y);
    double sum = 0.0;
    double count = 0.0;
    for (std::size_t c = 0; c < x.channels.size(); ++c) {
        sum += (x.channels[c] - y.channels[c]).squaredNorm();
        count += static_cast<double>(x.channels[c].size());
    }
    if (sum == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(count / sum);
}

bool psnr_is_infinite(double value) { return std::isinf(value) && value > 0; }

double ssim(const ImagePlane& x, const ImagePlane& y) {
    check_same_shape(x, y);
    if (x.n < 11) throw std::invalid_argument("ssim needs images of side at least 11");
    double total = 0.0;
    for (std::size_t c = 0; c < x.channels.size(); ++c) total += ssim_channel(x.channels[c], y.channels[c]);
    return total / static_cast<double>(x.channels.size());
}

ImagePlane add_noise(const ImagePlane& plane, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise level must be non-negative");
    ImagePlane out = plane;
    if (sigma == 0.0) return out;
    CounterRng rng(seed, 41);
    for (RealMatrix& c : out.channels) c += sigma * rng.normal_matrix(c.rows(), c.cols());
    return out;
}

ImagePlane make_test_image(Index n, int channels) {
    ImagePlane p = make_plane(n, channels);
    const double s = static_cast<double>(n);
    for (int c = 0; c < channels; ++c) {
        RealMatrix& m = p.channels[static_cast<std::size_t>(c)];
        const double tint = 0.1 * c;
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i) {
                const double y = (i + 0.5) / s;
                const double x = (j + 0.5) / s;
                double v = 0.15 + 0.25 * x;  // ramp
                if (x > 0.12 && x < 0.45 && y > 0.15 && y < 0.55) v = 0.85 - tint;
                const double dx = x - 0.68, dy = y - 0.35;
                if (dx * dx + dy * dy < 0.04) v = 0.55 + tint;
                if (y > 0.68 && y < 0.9 && std::fmod(x * 8.0, 1.0) < 0.5) v = 0.95 - 2 * tint;
                if (std::abs(x - y) < 0.02 && x < 0.6) v = 0.05;
                m(i, j) = std::clamp(v, 0.0, 1.0);
            }
    }
    return p;
}

}  // namespace pinvminres
