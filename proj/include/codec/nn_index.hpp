#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "codec/matrix.hpp"
#include "codec/random.hpp"

namespace codec {

/// Every point at the minimal squared Euclidean distance from `query`,
/// excluding the query point itself.
struct TieSet {
  std::size_t query = 0;
  std::vector<std::size_t> candidates;  // ascending
  double min_sq_distance = 0.0;

  double min_distance() const;
};

/// Exact nearest-neighbor index over the rows of an n x d matrix.
///
/// Distances are compared as squared distances computed in coordinate order,
/// sum_k (a_k - b_k)^2, and two candidates tie only when those sums are
/// bit-equal. Bit-identical rows are grouped into one location first, so heavy
/// duplication (discrete data) costs no more than the number of distinct rows.
/// In one dimension the sorted locations are walked directly; otherwise they
/// go into a median-split k-d tree, or a flat table when d is large or there
/// are few of them. Immutable once built; safe for concurrent queries.
class NeighborIndex {
 public:
  static constexpr std::size_t kBruteForceMaxDim = 16;
  static constexpr std::size_t kBruteForceMinLocations = 64;
  static constexpr std::size_t kLeafSize = 8;

  explicit NeighborIndex(Matrix points);

  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dim() const noexcept { return points_.cols(); }
  const Matrix& points() const noexcept { return points_; }
  std::size_t location_count() const noexcept { return loc_begin_.size() - 1; }
  bool uses_tree() const noexcept { return !nodes_.empty(); }

  TieSet tie_set(std::size_t i) const;

  /// Uniform draw from tie_set(i). Consumes exactly one bounded draw from the
  /// stream and returns the same index as pick_neighbor(tie_set(i), stream).
  std::size_t pick(std::size_t i, CounterStream& stream) const;

  /// pick() for every observation, observation i drawing from
  /// CounterStream(derive_key(key, i)). Each location is searched once.
  std::vector<std::size_t> pick_all(std::uint64_t key) const;

 private:
  struct Node {
    std::uint32_t begin = 0;  // range into tree order
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t dim = 0;
    double split = 0.0;
  };

  // Other locations at the minimal distance from a location. When the
  // location is itself duplicated the minimum is zero and `self_tie` is set.
  struct Nearest {
    std::vector<std::uint32_t> locations;
    double sq_distance = 0.0;
    bool self_tie = false;
  };

  struct BuildScratch {
    struct Key {
      double value;
      std::uint32_t offset;
    };
    std::vector<Key> keys;
    std::vector<std::uint32_t> ids;
    std::vector<double> coords;
  };

  Nearest nearest_locations(std::uint32_t loc) const;
  void search(std::int32_t node, const double* q, std::uint32_t exclude, double* offsets,
              double& best, std::vector<std::uint32_t>& found) const;
  std::int32_t build_node(std::uint32_t begin, std::uint32_t end, BuildScratch& scratch);
  std::size_t choose(std::size_t i, const Nearest& nearest, CounterStream& stream) const;
  std::size_t candidate_count(std::size_t i, const Nearest& nearest) const;
  std::size_t multiplicity(std::uint32_t loc) const {
    return loc_begin_[loc + 1] - loc_begin_[loc];
  }
  const double* loc_coords(std::uint32_t loc) const { return loc_coords_.data() + loc * dim(); }

  Matrix points_;
  std::vector<std::uint32_t> location_of_;  // observation -> location
  std::vector<std::uint32_t> loc_begin_;    // CSR offsets into loc_members_
  std::vector<std::uint32_t> loc_members_;  // ascending observation indices per location
  std::vector<double> loc_coords_;          // location-major coordinates

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> tree_ids_;   // tree order -> location
  std::vector<double> tree_coords_;       // coordinates in tree order
};

/// Uniform choice among the candidates: candidates[stream.below(size)].
std::size_t pick_neighbor(const TieSet& ts, CounterStream& stream);

}  // namespace codec
