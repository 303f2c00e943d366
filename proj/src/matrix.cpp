#include "codec/matrix.hpp"

#include <algorithm>
#include <string>

#include "codec/errors.hpp"

namespace codec {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::dimension, "matrix data has " + std::to_string(data_.size()) +
                                          " values, expected " + std::to_string(rows_ * cols_));
  }
}

Matrix Matrix::from_columns(std::span<const std::span<const double>> columns) {
  if (columns.empty()) return {};
  const std::size_t rows = columns.front().size();
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) {
      throw Error(ErrorKind::dimension, "column " + std::to_string(c) + " has length " +
                                            std::to_string(columns[c].size()) + ", expected " +
                                            std::to_string(rows));
    }
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Matrix Matrix::from_column(std::span<const double> column) {
  return Matrix(column.size(), 1, std::vector<double>(column.begin(), column.end()));
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::dimension, "cannot concatenate matrices with " +
                                          std::to_string(a.rows()) + " and " +
                                          std::to_string(b.rows()) + " rows");
  }
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    std::ranges::copy(a.row(r), dst.begin());
    std::ranges::copy(b.row(r), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

}  // namespace codec
