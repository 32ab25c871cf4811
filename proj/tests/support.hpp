#pragma once

// Independent dense references used by the tests. They deliberately avoid the
// library's oracle module so that module can be tested against them too.

#include <Eigen/Dense>

#include "pinvminres/types.hpp"

namespace testref {

using pinvminres::Complex;
using pinvminres::Index;
using pinvminres::Matrix;
using pinvminres::RealMatrix;
using pinvminres::Vector;

// pseudo-inverse through a complete orthogonal decomposition
inline Matrix cod_pinv(const Matrix& a, double tol = 1e-10) {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
    cod.setThreshold(tol);
    return cod.pseudoInverse();
}

inline RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
    RealMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

inline double rel(const Vector& x, const Vector& ref) {
    const double n = ref.norm();
    return (x - ref).norm() / (n > 0 ? n : 1.0);
}

inline Vector cvec(std::initializer_list<Complex> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (const Complex& c : v) out(i++) = c;
    return out;
}

}  // namespace testref
