#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace codec {

/// Dense row-major matrix of doubles; one row per observation.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  /// Builds an n x k matrix from k columns of equal length n.
  static Matrix from_columns(std::span<const std::span<const double>> columns);
  static Matrix from_column(std::span<const double> column);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double> column(std::size_t c) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Column concatenation [a | b]; row counts must match.
Matrix hconcat(const Matrix& a, const Matrix& b);

}  // namespace codec
