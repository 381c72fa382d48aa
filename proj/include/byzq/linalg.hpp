#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace byzq {

class SingularMatrixError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Minimal dense square matrix, row-major, value semantics. Sized for the
/// alphabet dimensions used here (M <= 256), so a direct solver is enough.
class SquareMatrix {
 public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
    SquareMatrix(std::size_t n, std::vector<double> values);

    static SquareMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    const std::vector<double>& data() const { return data_; }

    SquareMatrix transposed() const;
    SquareMatrix operator*(const SquareMatrix& rhs) const;
    std::vector<double> row_times(const std::vector<double>& x) const;  // x^T * A
    std::vector<double> times_col(const std::vector<double>& x) const;  // A * x

    double one_norm() const;
    double max_abs_diff(const SquareMatrix& rhs) const;

 private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
std::vector<double> solve(const SquareMatrix& a, const std::vector<double>& b);

/// Dense inverse via the same elimination. Throws SingularMatrixError when a
/// pivot degenerates.
SquareMatrix inverse(const SquareMatrix& a);

/// One-norm condition estimate ||A||_1 * ||A^-1||_1.
double condition_estimate(const SquareMatrix& a);

}  // namespace byzq
