#include "hbp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hbp/errors.hpp"

namespace hbp {
namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw NonFiniteError(std::string(what) + ": non-finite element at index " + std::to_string(i));
        }
    }
}

void require_same_length(const RealVector& a, const RealVector& b, const char* op) {
    if (a.size() != b.size()) {
        throw DimensionError(std::string(op) + ": length mismatch " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    }
}

}  // namespace

RealVector::RealVector(std::size_t len) : data_(len, 0.0) {
    if (len == 0) throw DimensionError("RealVector: length must be >= 1");
}

RealVector::RealVector(std::initializer_list<double> values) : RealVector(std::vector<double>(values)) {}

RealVector::RealVector(std::vector<double> values) : data_(std::move(values)) {
    if (data_.empty()) throw DimensionError("RealVector: length must be >= 1");
    require_finite(data_, "RealVector");
}

bool RealVector::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw DimensionError("RealMatrix: empty shape");
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (rows == 0 || cols == 0) throw DimensionError("RealMatrix: empty shape");
    if (data_.size() != rows * cols) {
        throw DimensionError("RealMatrix: expected " + std::to_string(rows * cols) + " elements, got " +
                             std::to_string(data_.size()));
    }
    require_finite(data_, "RealMatrix");
}

RealMatrix::RealMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    if (rows_ == 0 || cols_ == 0) throw DimensionError("RealMatrix: empty shape");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("RealMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    require_finite(data_, "RealMatrix");
}

RealMatrix RealMatrix::identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RealMatrix RealMatrix::transposed() const {
    RealMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool RealMatrix::is_symmetric(double tol) const noexcept {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = i + 1; j < cols_; ++j) {
            const double a = (*this)(i, j);
            if (std::abs(a - (*this)(j, i)) > tol * std::max(1.0, std::abs(a))) return false;
        }
    }
    return true;
}

double RealMatrix::asymmetry() const noexcept {
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_ && j < rows_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
}

double dot(const RealVector& a, const RealVector& b) {
    require_same_length(a, b, "dot");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

RealVector matvec(const RealMatrix& m, const RealVector& v) {
    if (m.cols() != v.size()) {
        throw DimensionError("matvec: matrix has " + std::to_string(m.cols()) + " columns, vector has length " +
                             std::to_string(v.size()));
    }
    RealVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) sum += row[j] * v[j];
        out[i] = sum;
    }
    return out;
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
    RealMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

RealMatrix outer(const RealVector& a, const RealVector& b) {
    RealMatrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
    return m;
}

double norm2(const RealVector& v) {
    // Scaled accumulation so huge or tiny entries neither overflow nor underflow.
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double sum = 0.0;
    for (double x : v) {
        const double r = x / scale;
        sum += r * r;
    }
    return scale * std::sqrt(sum);
}

bool is_spd(const RealMatrix& m, double tol) {
    if (!m.square()) throw DimensionError("is_spd: matrix is not square");
    const std::size_t n = m.rows();
    // Lower-triangular Cholesky factor; only the lower triangle of m is read.
    std::vector<double> l(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = m(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= l[j * n + k] * l[j * n + k];
        if (!(pivot > tol)) return false;
        const double root = std::sqrt(pivot);
        l[j * n + j] = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = m(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = v / root;
        }
    }
    return true;
}

RealVector axpy(double scale, const RealVector& b, const RealVector& a) {
    require_same_length(a, b, "axpy");
    RealVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + scale * b[i];
    return out;
}

RealVector operator-(const RealVector& a, const RealVector& b) {
    require_same_length(a, b, "operator-");
    RealVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

RealVector operator*(double s, const RealVector& v) {
    RealVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}

}  // namespace hbp
