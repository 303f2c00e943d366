#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codec/matrix.hpp"

namespace codec {

struct Column {
  std::string name;
  std::vector<double> values;
  /// Set by standardize() when the column had zero variance.
  bool constant = false;
};

/// Column-oriented numeric table with a designated response column.
/// Immutable after construction; the constructor enforces
///   n >= 2, equal column lengths, finite values, unique names,
///   and that `response` names one of the columns.
class Dataset {
 public:
  Dataset(std::vector<Column> columns, std::string response);

  std::size_t n() const noexcept { return n_; }
  std::size_t num_columns() const noexcept { return columns_.size(); }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Column& column(std::size_t index) const { return columns_.at(index); }

  const std::string& response() const noexcept { return response_; }
  std::size_t response_index() const noexcept { return response_index_; }
  std::span<const double> y() const noexcept { return columns_[response_index_].values; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Like find() but throws a schema error naming the missing column.
  std::size_t index_of(std::string_view name) const;
  std::span<const double> values(std::string_view name) const;

  /// Every column except the response, in file order.
  std::vector<std::size_t> predictor_indices() const;

  /// n x k matrix whose columns are the given column indices.
  Matrix matrix(std::span<const std::size_t> column_indices) const;

 private:
  std::vector<Column> columns_;
  std::string response_;
  std::size_t response_index_ = 0;
  std::size_t n_ = 0;
};

/// R_i = #{j : y_j <= y_i} and L_i = #{j : y_j >= y_i}.
struct RankVector {
  std::vector<std::int64_t> r;
  std::vector<std::int64_t> l;

  std::size_t size() const noexcept { return r.size(); }
};

/// Sort-and-scan rank computation, O(n log n). Ties share the counting
/// definitions above; no midranks.
RankVector ranks(std::span<const double> y);

/// Parses comma-separated text with a header row.
Dataset parse_csv(std::istream& in, const std::string& response);
Dataset load_csv(const std::filesystem::path& path, const std::string& response);

/// Writes the dataset as CSV with shortest round-trip number formatting.
void write_csv(std::ostream& out, const Dataset& d);
void save_csv(const std::filesystem::path& path, const Dataset& d);

/// Z-scores columns using the n-1 divisor. Zero-variance columns become all
/// zeros with `constant` set. The response is left alone when
/// exclude_response is true.
Dataset standardize(const Dataset& d, bool exclude_response = true);

}  // namespace codec
