#include "byzq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace byzq {

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> values)
    : n_(n), data_(std::move(values)) {
    if (data_.size() != n * n) throw std::invalid_argument("SquareMatrix: size mismatch");
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::transposed() const {
    SquareMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
    if (rhs.n_ != n_) throw std::invalid_argument("SquareMatrix: dimension mismatch");
    SquareMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

std::vector<double> SquareMatrix::row_times(const std::vector<double>& x) const {
    if (x.size() != n_) throw std::invalid_argument("row_times: dimension mismatch");
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out[j] += x[i] * (*this)(i, j);
    return out;
}

std::vector<double> SquareMatrix::times_col(const std::vector<double>& x) const {
    if (x.size() != n_) throw std::invalid_argument("times_col: dimension mismatch");
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        out[i] = std::inner_product(x.begin(), x.end(), data_.begin() + i * n_, 0.0);
    return out;
}

double SquareMatrix::one_norm() const {
    double best = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n_; ++i) col += std::fabs((*this)(i, j));
        best = std::max(best, col);
    }
    return best;
}

double SquareMatrix::max_abs_diff(const SquareMatrix& rhs) const {
    if (rhs.n_ != n_) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double best = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k)
        best = std::max(best, std::fabs(data_[k] - rhs.data_[k]));
    return best;
}

namespace {
// LU factorization with partial pivoting, in place. Returns the permutation.
std::vector<std::size_t> lu_factor(SquareMatrix& a) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) throw SingularMatrixError("matrix is singular");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(perm[k], perm[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return perm;
}

std::vector<double> lu_solve(const SquareMatrix& lu, const std::vector<std::size_t>& perm,
                             const std::vector<double>& b) {
    const std::size_t n = lu.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu(ii, j) * x[j];
        x[ii] /= lu(ii, ii);
    }
    return x;
}
}  // namespace

std::vector<double> solve(const SquareMatrix& a, const std::vector<double>& b) {
    if (b.size() != a.size()) throw std::invalid_argument("solve: dimension mismatch");
    SquareMatrix lu = a;
    const auto perm = lu_factor(lu);
    return lu_solve(lu, perm, b);
}

SquareMatrix inverse(const SquareMatrix& a) {
    const std::size_t n = a.size();
    SquareMatrix lu = a;
    const auto perm = lu_factor(lu);
    SquareMatrix inv(n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const auto col = lu_solve(lu, perm, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    return inv;
}

double condition_estimate(const SquareMatrix& a) {
    try {
        return a.one_norm() * inverse(a).one_norm();
    } catch (const SingularMatrixError&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace byzq
