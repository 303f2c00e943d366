#include "codec/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "codec/errors.hpp"

namespace codec {

Dataset::Dataset(std::vector<Column> columns, std::string response)
    : columns_(std::move(columns)), response_(std::move(response)) {
  if (columns_.empty()) throw Error(ErrorKind::schema, "dataset has no columns");
  std::unordered_set<std::string> seen;
  for (const auto& col : columns_) {
    if (!seen.insert(col.name).second) {
      throw Error(ErrorKind::schema, "duplicate column name '" + col.name + "'");
    }
  }
  n_ = columns_.front().values.size();
  for (const auto& col : columns_) {
    if (col.values.size() != n_) {
      throw Error(ErrorKind::dimension, "column '" + col.name + "' has " +
                                            std::to_string(col.values.size()) +
                                            " values, expected " + std::to_string(n_));
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (!std::isfinite(col.values[i])) {
        throw Error(ErrorKind::ingestion, "non-finite value in column '" + col.name + "' at row " +
                                              std::to_string(i + 1));
      }
    }
  }
  if (n_ < 2) {
    throw Error(ErrorKind::size, "need at least 2 observations, got " + std::to_string(n_));
  }
  auto it = std::ranges::find(columns_, response_, &Column::name);
  if (it == columns_.end()) {
    throw Error(ErrorKind::schema, "response column '" + response_ + "' not found");
  }
  response_index_ = static_cast<std::size_t>(it - columns_.begin());
}

std::optional<std::size_t> Dataset::find(std::string_view name) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].name == name) return c;
  }
  return std::nullopt;
}

std::size_t Dataset::index_of(std::string_view name) const {
  if (auto c = find(name)) return *c;
  throw Error(ErrorKind::schema, "column '" + std::string(name) + "' not found");
}

std::span<const double> Dataset::values(std::string_view name) const {
  return columns_[index_of(name)].values;
}

std::vector<std::size_t> Dataset::predictor_indices() const {
  std::vector<std::size_t> out;
  out.reserve(columns_.size() - 1);
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c != response_index_) out.push_back(c);
  }
  return out;
}

Matrix Dataset::matrix(std::span<const std::size_t> column_indices) const {
  Matrix m(n_, column_indices.size());
  for (std::size_t k = 0; k < column_indices.size(); ++k) {
    const auto& v = columns_.at(column_indices[k]).values;
    for (std::size_t i = 0; i < n_; ++i) m(i, k) = v[i];
  }
  return m;
}

RankVector ranks(std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::sort(order, [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });

  RankVector out;
  out.r.resize(n);
  out.l.resize(n);
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && y[order[end]] == y[order[begin]]) ++end;
    // Sorted positions [begin, end) share a value: begin values lie strictly
    // below it and n - end strictly above.
    for (std::size_t k = begin; k < end; ++k) {
      out.r[order[k]] = static_cast<std::int64_t>(end);
      out.l[order[k]] = static_cast<std::int64_t>(n - begin);
    }
    begin = end;
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::string& response) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ingestion, "empty CSV input: no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::vector<Column> columns;
  for (auto name : split_commas(line)) {
    if (name.empty()) throw Error(ErrorKind::schema, "empty column name in header");
    columns.push_back(Column{std::string(name), {}, false});
  }

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_commas(line);
    if (fields.size() != columns.size()) {
      throw Error(ErrorKind::ingestion, "row " + std::to_string(row) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(columns.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_number(fields[c], v)) {
        throw Error(ErrorKind::ingestion, "row " + std::to_string(row) + ", column '" +
                                              columns[c].name + "': cannot parse '" +
                                              std::string(fields[c]) + "' as a finite number");
      }
      columns[c].values.push_back(v);
    }
  }
  return Dataset(std::move(columns), response);
}

Dataset load_csv(const std::filesystem::path& path, const std::string& response) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ingestion, "cannot open '" + path.string() + "'");
  return parse_csv(in, response);
}

void write_csv(std::ostream& out, const Dataset& d) {
  const auto& cols = d.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out << ',';
    out << cols[c].name;
  }
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < d.n(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out << ',';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, cols[c].values[i]);
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ingestion, "cannot write '" + path.string() + "'");
  write_csv(out, d);
  if (!out) throw Error(ErrorKind::ingestion, "write failed for '" + path.string() + "'");
}

Dataset standardize(const Dataset& d, bool exclude_response) {
  std::vector<Column> cols = d.columns();
  const auto n = static_cast<double>(d.n());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (exclude_response && c == d.response_index()) continue;
    auto& v = cols[c].values;
    const bool is_constant = std::ranges::all_of(v, [&](double x) { return x == v.front(); });
    if (is_constant) {
      std::ranges::fill(v, 0.0);
      cols[c].constant = true;
      continue;
    }
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    for (double& x : v) x = (x - mean) / sd;
    cols[c].constant = false;
  }
  return Dataset(std::move(cols), d.response());
}

}  // namespace codec
