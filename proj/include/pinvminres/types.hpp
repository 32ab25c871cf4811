#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pinvminres {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Symmetry { hermitian, skew_hermitian, complex_symmetric };

const char* to_string(Symmetry kind);
Symmetry parse_symmetry(const std::string& name);

// Raised when a numerical precondition of an algorithm is violated at run time
// (non-finite operator output, indefinite preconditioner, degenerate lifting).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// <x, y> = x^H y
inline Complex inner(const Vector& x, const Vector& y) { return x.dot(y); }

inline bool all_finite(const Vector& v) { return v.allFinite(); }

void require_same_size(Index expected, Index got, const char* what);

}  // namespace pinvminres
