#include "bellbound/complex_matrix.hpp"

#include "bellbound/errors.hpp"
#include "bellbound/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bellbound {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cd> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw Error::validation("matrix entries length " +
                                std::to_string(entries_.size()) +
                                " does not equal rows*cols = " +
                                std::to_string(rows_ * cols_));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cd> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m.at(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<cd> values) {
    return diagonal(std::span<const cd>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::outer(std::span<const cd> u,
                                   std::span<const cd> v) {
    std::vector<cd> vc(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) vc[j] = std::conj(v[j]);
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        simd::scale(vc.size(), u[i], vc.data(), m.row_ptr(i));
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m.at(j, i) = std::conj(at(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        m.entries_[i] = std::conj(entries_[i]);
    return m;
}

cd ComplexMatrix::trace() const {
    cd t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cd& e : entries_) s += std::norm(e);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cd& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double ComplexMatrix::hermiticity_error() const {
    if (!is_square()) return frobenius_norm() + 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
    return worst;
}

void ComplexMatrix::set_zero() {
    std::fill(entries_.begin(), entries_.end(), cd(0.0));
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error::validation("matrix shape mismatch in addition");
    simd::axpy(entries_.size(), 1.0, other.entries_.data(), entries_.data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error::validation("matrix shape mismatch in subtraction");
    simd::axpy(entries_.size(), -1.0, other.entries_.data(), entries_.data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cd scalar) {
    simd::scale(entries_.size(), scalar, entries_.data(), entries_.data());
    return *this;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw Error::validation(
            "matmul shape mismatch: " + std::to_string(a.cols()) + " vs " +
            std::to_string(b.rows()));
    ComplexMatrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cd* ci = c.row_ptr(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cd aik = a.at(i, k);
            if (aik == cd(0.0)) continue;
            simd::axpy(n, aik, b.row_ptr(k), ci);
        }
    }
    return c;
}

cd trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw Error::validation("trace_product shape mismatch");
    cd t = 0.0;
    // tr[AB] = sum_i A[i,:] . B[:,i]; B columns are strided, keep scalar.
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            t += a.at(i, k) * b.at(k, i);
    return t;
}

std::vector<cd> apply(const ComplexMatrix& a, std::span<const cd> x) {
    if (a.cols() != x.size())
        throw Error::validation("apply shape mismatch");
    std::vector<cd> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cd s          = 0.0;
        const cd* row = a.row_ptr(i);
        for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

double norm(std::span<const cd> v) {
    return std::sqrt(simd::dotc(v.size(), v.data(), v.data()).real());
}

void normalize(std::span<cd> v) {
    const double n = norm(v);
    if (n == 0.0) throw Error::validation("cannot normalize zero vector");
    simd::scale(v.size(), 1.0 / n, v.data(), v.data());
}

cd inner(std::span<const cd> u, std::span<const cd> v) {
    if (u.size() != v.size())
        throw Error::validation("inner product length mismatch");
    return simd::dotc(u.size(), u.data(), v.data());
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error::validation("max_abs_diff shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

std::size_t DimVector::product() const {
    std::size_t p = 1;
    for (int d : dims) p *= static_cast<std::size_t>(d);
    return p;
}

void DimVector::require_matches(std::size_t dim, const char* what) const {
    for (int d : dims)
        if (d <= 0)
            throw Error::validation(std::string(what) +
                                    ": non-positive factor dimension");
    if (product() != dim)
        throw Error::validation(std::string(what) + ": factor dims product " +
                                std::to_string(product()) +
                                " does not match matrix dimension " +
                                std::to_string(dim));
}

} // namespace bellbound
