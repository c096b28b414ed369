#pragma once

// Dense row-major vectors and matrices, just large enough for backprop and
// rank-two quasi-Newton updates on a few hundred parameters.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hbp {

class RealVector {
public:
    /// Zero vector of length `len` (len ≥ 1).
    explicit RealVector(std::size_t len);
    RealVector(std::initializer_list<double> values);
    /// Throws NonFiniteError on NaN/Inf, DimensionError on empty input.
    explicit RealVector(std::vector<double> values);

    std::size_t size() const noexcept { return data_.size(); }
    double operator[](std::size_t i) const noexcept { return data_[i]; }
    double& operator[](std::size_t i) noexcept { return data_[i]; }

    std::span<const double> span() const noexcept { return data_; }
    std::span<double> span() noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    bool all_finite() const noexcept;

    friend bool operator==(const RealVector&, const RealVector&) = default;

private:
    std::vector<double> data_;
};

class RealMatrix {
public:
    RealMatrix(std::size_t rows, std::size_t cols);
    /// Row-major elements; rows*cols must equal values.size().
    RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    RealMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static RealMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }
    const std::vector<double>& values() const noexcept { return data_; }

    RealMatrix transposed() const;

    /// |a_ij − a_ji| ≤ tol · max(1, |a_ij|) for every pair.
    bool is_symmetric(double tol = 1e-12) const noexcept;
    /// Largest |a_ij − a_ji|.
    double asymmetry() const noexcept;

    friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

double dot(const RealVector& a, const RealVector& b);
RealVector matvec(const RealMatrix& m, const RealVector& v);
RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
RealMatrix outer(const RealVector& a, const RealVector& b);
double norm2(const RealVector& v);

/// Cholesky elimination; true iff every pivot exceeds `tol`.
/// Throws DimensionError for non-square input.
bool is_spd(const RealMatrix& m, double tol);

/// a + scale * b
RealVector axpy(double scale, const RealVector& b, const RealVector& a);
RealVector operator-(const RealVector& a, const RealVector& b);
RealVector operator*(double s, const RealVector& v);

}  // namespace hbp
