#include "fockmaj/matrix.hpp"

#include <cstdint>

#include "fockmaj/errors.hpp"

namespace fockmaj {

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols != rhs.rows)
        throw DimensionMismatch("matmul: inner dimensions differ");
    Matrix out(lhs.rows, rhs.cols);
    const std::int64_t rows = static_cast<std::int64_t>(lhs.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        const std::size_t r = static_cast<std::size_t>(i);
        for (std::size_t k = 0; k < lhs.cols; ++k) {
            const double v = lhs.at(r, k);
            if (v == 0.0)
                continue;
            for (std::size_t j = 0; j < rhs.cols; ++j)
                out.at(r, j) += v * rhs.at(k, j);
        }
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            out.at(c, r) = m.at(r, c);
    return out;
}

} // namespace fockmaj
