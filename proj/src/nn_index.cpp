#include "codec/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "codec/errors.hpp"

namespace codec {

namespace {

inline double squared_distance(const double* a, const double* b, std::size_t d) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

}  // namespace

double TieSet::min_distance() const { return std::sqrt(min_sq_distance); }

NeighborIndex::NeighborIndex(Matrix points) : points_(std::move(points)) {
  const std::size_t n = points_.rows();
  const std::size_t d = points_.cols();
  if (n < 2) throw Error(ErrorKind::size, "neighbor index needs at least 2 points, got " + std::to_string(n));
  if (d < 1) throw Error(ErrorKind::dimension, "neighbor index needs dimension >= 1");
  if (n >= std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::size, "too many points for neighbor index: " + std::to_string(n));
  }
  for (double v : points_.data()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::argument, "neighbor index coordinates must be finite");
  }

  // Group bit-equal rows (under ==) into locations; members stay ascending.
  // The first coordinate rides along in the sort key to keep comparisons local.
  struct Key {
    double first;
    std::uint32_t index;
  };
  std::vector<Key> keys(n);
  const double* base = points_.data().data();
  for (std::size_t i = 0; i < n; ++i) keys[i] = {base[i * d], static_cast<std::uint32_t>(i)};
  std::ranges::sort(keys, [&](const Key& a, const Key& b) {
    if (a.first != b.first) return a.first < b.first;
    const double* pa = base + std::size_t{a.index} * d;
    const double* pb = base + std::size_t{b.index} * d;
    for (std::size_t k = 1; k < d; ++k) {
      if (pa[k] < pb[k]) return true;
      if (pb[k] < pa[k]) return false;
    }
    return a.index < b.index;
  });
  std::vector<std::uint32_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = keys[k].index;

  location_of_.resize(n);
  loc_members_.reserve(n);
  loc_begin_.push_back(0);
  for (std::size_t k = 0; k < n; ++k) {
    const double* row = base + std::size_t{order[k]} * d;
    const bool same = k > 0 && std::equal(row, row + d, base + std::size_t{order[k - 1]} * d);
    if (k > 0 && !same) loc_begin_.push_back(static_cast<std::uint32_t>(k));
    if (!same) loc_coords_.insert(loc_coords_.end(), row, row + d);
    loc_members_.push_back(order[k]);
    location_of_[order[k]] = static_cast<std::uint32_t>(loc_begin_.size() - 1);
  }
  loc_begin_.push_back(static_cast<std::uint32_t>(n));

  const std::size_t locations = location_count();
  if (d > 1 && d <= kBruteForceMaxDim && locations >= kBruteForceMinLocations) {
    tree_ids_.resize(locations);
    std::iota(tree_ids_.begin(), tree_ids_.end(), 0u);
    tree_coords_ = loc_coords_;
    nodes_.reserve(2 * locations / kLeafSize + 2);
    BuildScratch scratch;
    build_node(0, static_cast<std::uint32_t>(locations), scratch);
  }
}

std::int32_t NeighborIndex::build_node(std::uint32_t begin, std::uint32_t end, BuildScratch& scratch) {
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, 0, 0.0});
  if (end - begin <= kLeafSize) return self;

  const std::size_t d = dim();
  const double* rows = tree_coords_.data();
  std::uint32_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t k = 0; k < d; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::uint32_t t = begin; t < end; ++t) {
      const double v = rows[std::size_t{t} * d + k];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = static_cast<std::uint32_t>(k);
    }
  }

  // Partition around the median of best_dim, then apply the permutation to
  // ids and coordinate rows. Left half holds coordinates <= split, right >= split.
  const std::uint32_t count = end - begin;
  const std::uint32_t half = count / 2;
  scratch.keys.resize(count);
  for (std::uint32_t t = 0; t < count; ++t) scratch.keys[t] = {rows[std::size_t{begin + t} * d + best_dim], t};
  std::nth_element(scratch.keys.begin(), scratch.keys.begin() + half, scratch.keys.end(),
                   [](const BuildScratch::Key& a, const BuildScratch::Key& b) { return a.value < b.value; });
  const double split = scratch.keys[half].value;

  scratch.ids.resize(count);
  scratch.coords.resize(std::size_t{count} * d);
  for (std::uint32_t t = 0; t < count; ++t) {
    const std::uint32_t from = begin + scratch.keys[t].offset;
    scratch.ids[t] = tree_ids_[from];
    std::copy_n(rows + std::size_t{from} * d, d, scratch.coords.data() + std::size_t{t} * d);
  }
  std::copy(scratch.ids.begin(), scratch.ids.end(), tree_ids_.begin() + begin);
  std::copy(scratch.coords.begin(), scratch.coords.end(),
            tree_coords_.begin() + static_cast<std::ptrdiff_t>(std::size_t{begin} * d));

  const std::uint32_t mid = begin + half;
  const std::int32_t left = build_node(begin, mid, scratch);
  const std::int32_t right = build_node(mid, end, scratch);
  nodes_[self].left = left;
  nodes_[self].right = right;
  nodes_[self].dim = best_dim;
  nodes_[self].split = split;
  return self;
}

// Branch-and-bound over the tree. A subtree is skipped only when its lower
// bound is strictly greater than the current best, so every tie is visited.
// The bound is the coordinate-order sum of per-axis squared gaps, each no
// larger than the corresponding term of any point's distance; rounded
// addition is monotone, so the bound never exceeds a computed distance.
void NeighborIndex::search(std::int32_t node_id, const double* q, std::uint32_t exclude,
                           double* offsets, double& best, std::vector<std::uint32_t>& found) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  const std::size_t d = dim();
  if (node.left < 0) {
    for (std::uint32_t t = node.begin; t < node.end; ++t) {
      const std::uint32_t id = tree_ids_[t];
      if (id == exclude) continue;
      const double dist = squared_distance(q, tree_coords_.data() + std::size_t{t} * d, d);
      if (dist < best) {
        best = dist;
        found.clear();
        found.push_back(id);
      } else if (dist == best) {
        found.push_back(id);
      }
    }
    return;
  }
  const double diff = q[node.dim] - node.split;
  const std::int32_t near = diff < 0.0 ? node.left : node.right;
  const std::int32_t far = diff < 0.0 ? node.right : node.left;
  search(near, q, exclude, offsets, best, found);

  const double saved = offsets[node.dim];
  offsets[node.dim] = diff * diff;
  double bound = 0.0;
  for (std::size_t k = 0; k < d; ++k) bound += offsets[k];
  if (bound <= best) search(far, q, exclude, offsets, best, found);
  offsets[node.dim] = saved;
}

NeighborIndex::Nearest NeighborIndex::nearest_locations(std::uint32_t loc) const {
  Nearest out;
  out.self_tie = multiplicity(loc) > 1;
  double best = out.self_tie ? 0.0 : std::numeric_limits<double>::infinity();
  const double* q = loc_coords(loc);
  if (dim() == 1) {
    // Locations are sorted, and squared gaps are nondecreasing walking away
    // from loc in either direction.
    const double v = *q;
    auto visit = [&](std::uint32_t other) {
      const double t = v - *loc_coords(other);
      const double dist = t * t;
      if (dist > best) return false;
      if (dist < best) {
        best = dist;
        out.locations.clear();
      }
      out.locations.push_back(other);
      return true;
    };
    for (std::uint32_t other = loc; other > 0 && visit(other - 1); --other) {
    }
    for (std::uint32_t other = loc + 1; other < location_count() && visit(other); ++other) {
    }
  } else if (uses_tree()) {
    double offsets[kBruteForceMaxDim] = {};
    search(0, q, loc, offsets, best, out.locations);
  } else {
    const std::size_t d = dim();
    for (std::uint32_t other = 0; other < location_count(); ++other) {
      if (other == loc) continue;
      const double dist = squared_distance(q, loc_coords(other), d);
      if (dist < best) {
        best = dist;
        out.locations.clear();
        out.locations.push_back(other);
      } else if (dist == best) {
        out.locations.push_back(other);
      }
    }
  }
  out.sq_distance = best;
  return out;
}

std::size_t NeighborIndex::candidate_count(std::size_t i, const Nearest& nearest) const {
  std::size_t total = nearest.self_tie ? multiplicity(location_of_[i]) - 1 : 0;
  for (auto loc : nearest.locations) total += multiplicity(loc);
  return total;
}

std::size_t NeighborIndex::choose(std::size_t i, const Nearest& nearest, CounterStream& stream) const {
  const std::size_t k = stream.below(candidate_count(i, nearest));
  const std::uint32_t own = location_of_[i];

  if (nearest.locations.empty()) {
    // Only the other copies of this point; skip i within its sorted group.
    const auto* first = loc_members_.data() + loc_begin_[own];
    const auto* last = loc_members_.data() + loc_begin_[own + 1];
    const auto pos = static_cast<std::size_t>(std::lower_bound(first, last, static_cast<std::uint32_t>(i)) - first);
    return k < pos ? first[k] : first[k + 1];
  }
  if (!nearest.self_tie && nearest.locations.size() == 1) {
    return loc_members_[loc_begin_[nearest.locations.front()] + k];
  }
  std::vector<std::uint32_t> all;
  if (nearest.self_tie) {
    for (auto t = loc_begin_[own]; t < loc_begin_[own + 1]; ++t) {
      if (loc_members_[t] != i) all.push_back(loc_members_[t]);
    }
  }
  for (auto loc : nearest.locations) {
    all.insert(all.end(), loc_members_.begin() + loc_begin_[loc], loc_members_.begin() + loc_begin_[loc + 1]);
  }
  std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  return all[k];
}

TieSet NeighborIndex::tie_set(std::size_t i) const {
  if (i >= size()) {
    throw Error(ErrorKind::argument, "observation index " + std::to_string(i) + " out of range [0, " +
                                         std::to_string(size()) + ")");
  }
  const std::uint32_t own = location_of_[i];
  const Nearest nearest = nearest_locations(own);
  TieSet ts;
  ts.query = i;
  ts.min_sq_distance = nearest.sq_distance;
  if (nearest.self_tie) {
    for (auto t = loc_begin_[own]; t < loc_begin_[own + 1]; ++t) {
      if (loc_members_[t] != i) ts.candidates.push_back(loc_members_[t]);
    }
  }
  for (auto loc : nearest.locations) {
    ts.candidates.insert(ts.candidates.end(), loc_members_.begin() + loc_begin_[loc],
                         loc_members_.begin() + loc_begin_[loc + 1]);
  }
  std::ranges::sort(ts.candidates);
  return ts;
}

std::size_t NeighborIndex::pick(std::size_t i, CounterStream& stream) const {
  if (i >= size()) {
    throw Error(ErrorKind::argument, "observation index " + std::to_string(i) + " out of range");
  }
  return choose(i, nearest_locations(location_of_[i]), stream);
}

std::vector<std::size_t> NeighborIndex::pick_all(std::uint64_t key) const {
  std::vector<std::size_t> out(size());
  // Tree order keeps consecutive queries spatially close.
  for (std::uint32_t t = 0; t < location_count(); ++t) {
    const std::uint32_t loc = uses_tree() ? tree_ids_[t] : t;
    const Nearest nearest = nearest_locations(loc);
    for (auto t = loc_begin_[loc]; t < loc_begin_[loc + 1]; ++t) {
      const std::uint32_t i = loc_members_[t];
      CounterStream stream(derive_key(key, i));
      out[i] = choose(i, nearest, stream);
    }
  }
  return out;
}

std::size_t pick_neighbor(const TieSet& ts, CounterStream& stream) {
  if (ts.candidates.empty()) throw Error(ErrorKind::argument, "empty tie set");
  return ts.candidates[stream.below(ts.candidates.size())];
}

}  // namespace codec
