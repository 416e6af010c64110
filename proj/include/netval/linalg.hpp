#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace netval {

// Dense row-major matrix. Everything in this library is small (clearing
// systems are 2n x 2n with n a handful of firms), so a plain O(n^3) toolkit
// is all that is needed.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<double>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transposed() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    std::vector<double> operator*(const std::vector<double>& v) const;

    double max_abs_diff(const Matrix& other) const;
    // Induced 1-norm: max over columns of the absolute column sum.
    double max_abs_col_sum() const;

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Solves A X = B by Gaussian elimination with partial pivoting; B may carry
// several right-hand sides. Throws SingularSystemError on a vanishing pivot.
Matrix solve(Matrix a, Matrix b);

}  // namespace netval
