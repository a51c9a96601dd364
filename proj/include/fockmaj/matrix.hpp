#pragma once

#include <cstddef>
#include <vector>

namespace fockmaj {

// Dense row-major real matrix. Just enough linear algebra for transition
// kernels; not a general-purpose type.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// OpenMP over output rows; the inner accumulation order is fixed, so the
// result does not depend on the thread count.
Matrix matmul(const Matrix& lhs, const Matrix& rhs);

Matrix transpose(const Matrix& m);

} // namespace fockmaj
