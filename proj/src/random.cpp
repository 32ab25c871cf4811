#include "pinvminres/random.hpp"

#include <cmath>
#include <numbers>

namespace pinvminres {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

std::uint64_t CounterRng::next_u64() {
    return mix(mix(seed_ ^ mix(stream_)) + counter_++);
}

double CounterRng::uniform() {
    // 53 random bits, shifted off zero
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

RealVector CounterRng::normal_vector(Index n) {
    RealVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal();
    return v;
}

RealMatrix CounterRng::normal_matrix(Index rows, Index cols) {
    RealMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
}

Vector CounterRng::complex_normal_vector(Index n) {
    Vector v(n);
    const double scale = std::sqrt(0.5);
    for (Index i = 0; i < n; ++i) {
        const double re = normal();
        const double im = normal();
        v(i) = Complex(scale * re, scale * im);
    }
    return v;
}

Matrix CounterRng::complex_normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) m.col(j) = complex_normal_vector(rows);
    return m;
}

Matrix CounterRng::unitary(Index n, bool real) {
    Matrix g = real ? Matrix(normal_matrix(n, n).cast<Complex>()) : complex_normal_matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

CounterRng CounterRng::split(std::uint64_t stream) const {
    return CounterRng(mix(seed_ + 0x632be59bd9b4e019ULL * (stream_ + 1)), stream);
}

}  // namespace pinvminres
