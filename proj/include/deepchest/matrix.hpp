#ifndef DEEPCHEST_MATRIX_HPP
#define DEEPCHEST_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace deepchest {

/// Dense row-major matrix of doubles. Just storage plus indexing; all the
/// arithmetic this project needs is written out at the point of use.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

} // namespace deepchest

#endif
