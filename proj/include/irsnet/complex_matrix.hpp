#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace irsnet {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Small dimensions only (channel blocks,
// beamforming vectors); no BLAS backing needed.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  ComplexMatrix conjugate_transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        out(c, r) = std::conj((*this)(r, c));
      }
    }
    return out;
  }

  ComplexMatrix operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) {
      throw std::invalid_argument("ComplexMatrix: inner dimensions mismatch");
    }
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const cplx v = (*this)(r, k);
        for (std::size_t c = 0; c < rhs.cols_; ++c) {
          out(r, c) += v * rhs(k, c);
        }
      }
    }
    return out;
  }

  ComplexMatrix operator+(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
      throw std::invalid_argument("ComplexMatrix: shape mismatch in addition");
    }
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
  }

  ComplexMatrix& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  double squared_norm() const {
    double acc = 0.0;
    for (const auto& v : data_) acc += std::norm(v);
    return acc;
  }

  bool operator==(const ComplexMatrix& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<cplx> data_;
};

// Inner product of a 1xN row with an N-element beam vector.
inline cplx row_dot(const ComplexMatrix& row, const std::vector<cplx>& w) {
  if (row.rows() != 1 || row.cols() != w.size()) {
    throw std::invalid_argument("row_dot: shape mismatch");
  }
  cplx acc{0.0, 0.0};
  for (std::size_t c = 0; c < row.cols(); ++c) acc += row(0, c) * w[c];
  return acc;
}

}  // namespace irsnet
