#pragma once

#include <cstdint>

#include "pinvminres/types.hpp"

namespace pinvminres {

// Counter-based generator: the k-th draw is splitmix64(seed, stream, k), so a
// sequence is reproducible bit-for-bit from (seed, stream) on every platform.
// Normal samples use Box-Muller on top of it because std::normal_distribution
// is implementation-defined.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    double uniform();  // (0, 1)
    double normal();

    RealVector normal_vector(Index n);
    RealMatrix normal_matrix(Index rows, Index cols);
    // real and imaginary parts independent N(0, 1/2)
    Vector complex_normal_vector(Index n);
    Matrix complex_normal_matrix(Index rows, Index cols);
    // Haar-distributed orthonormal columns (QR of a Gaussian with phase fix)
    Matrix unitary(Index n, bool real = false);

    CounterRng split(std::uint64_t stream) const;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pinvminres
