#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace bellbound {

using cd = std::complex<double>;

// Dense complex matrix, row-major. The universal numeric carrier for states,
// measurement operators, Bell operators and source operators.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cd> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const cd> values);
    static ComplexMatrix diagonal(std::initializer_list<cd> values);
    // Rank-1 |u><v|.
    static ComplexMatrix outer(std::span<const cd> u, std::span<const cd> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    std::size_t size() const noexcept { return entries_.size(); }

    cd& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cd& at(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }
    cd* row_ptr(std::size_t i) { return entries_.data() + i * cols_; }
    const cd* row_ptr(std::size_t i) const {
        return entries_.data() + i * cols_;
    }
    std::vector<cd>& data() noexcept { return entries_; }
    const std::vector<cd>& data() const noexcept { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    cd trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    // max_{ij} |A_ij - conj(A_ji)|; zero for exactly Hermitian matrices.
    double hermiticity_error() const;
    bool is_hermitian(double tol) const { return hermiticity_error() <= tol; }

    void set_zero();

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cd scalar);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
        a += b;
        return a;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
        a -= b;
        return a;
    }
    friend ComplexMatrix operator*(cd s, ComplexMatrix a) {
        a *= s;
        return a;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cd> entries_;
};

// C = A * B, kernel-backed.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

// tr[A * B] without forming the product.
cd trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

// y = A * x
std::vector<cd> apply(const ComplexMatrix& a, std::span<const cd> x);

// Vector helpers for state vectors.
double norm(std::span<const cd> v);
void normalize(std::span<cd> v);
cd inner(std::span<const cd> u, std::span<const cd> v); // <u|v>
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Local Hilbert-space dimensions of a tensor factorization.
struct DimVector {
    std::vector<int> dims;

    DimVector() = default;
    DimVector(std::initializer_list<int> d) : dims(d) {}
    explicit DimVector(std::vector<int> d) : dims(std::move(d)) {}

    std::size_t product() const;
    std::size_t size() const noexcept { return dims.size(); }
    int operator[](std::size_t i) const { return dims[i]; }

    // Faults (validation) unless product() == dim.
    void require_matches(std::size_t dim, const char* what) const;
};

} // namespace bellbound
