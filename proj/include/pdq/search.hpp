#ifndef PDQ_SEARCH_HPP
#define PDQ_SEARCH_HPP

// Exact-cover search for Steiner quadruple systems and for families of
// pairwise disjoint ones. Items are the triples of [0,v); options are the
// 4-subsets, each covering its four triples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pdq/core.hpp"
#include "pdq/verify.hpp"

namespace pdq {

/// Dancing links over a fixed item/option matrix. Items [0, primary) must
/// be covered exactly once, the rest at most once. Column choice is minimum
/// remaining values with seeded random tie-breaking.
class ExactCover {
 public:
  ExactCover(std::size_t itemCount, const std::vector<std::vector<std::uint32_t>>& options,
             std::optional<std::size_t> primary = std::nullopt)
      : items_(itemCount)
  {
    const std::size_t primaryCount = primary.value_or(itemCount);
    if (primaryCount > itemCount) throw std::invalid_argument("more primary items than items");
    const std::size_t header = items_ + 1;
    left_.resize(header);
    right_.resize(header);
    up_.resize(header);
    down_.resize(header);
    col_.resize(header);
    row_.resize(header, -1);
    size_.assign(header, 0);
    for (std::size_t k = 0; k < header; ++k) {
      if (k <= primaryCount) {
        left_[k] = static_cast<std::int32_t>(k == 0 ? primaryCount : k - 1);
        right_[k] = static_cast<std::int32_t>(k == primaryCount ? 0 : k + 1);
      } else {
        left_[k] = right_[k] = static_cast<std::int32_t>(k);
      }
      up_[k] = down_[k] = static_cast<std::int32_t>(k);
      col_[k] = static_cast<std::int32_t>(k);
    }
    for (std::size_t o = 0; o < options.size(); ++o) {
      std::int32_t first = -1;
      for (const auto item : options[o]) {
        if (item >= items_) throw std::out_of_range("exact cover item out of range");
        const auto c = static_cast<std::int32_t>(item + 1);
        const auto node = static_cast<std::int32_t>(left_.size());
        col_.push_back(c);
        row_.push_back(static_cast<std::int32_t>(o));
        up_.push_back(up_[c]);
        down_.push_back(c);
        down_[up_[c]] = node;
        up_[c] = node;
        ++size_[c];
        if (first < 0) {
          first = node;
          left_.push_back(node);
          right_.push_back(node);
        } else {
          left_.push_back(left_[first]);
          right_.push_back(first);
          right_[left_[first]] = node;
          left_[first] = node;
        }
      }
    }
  }

  enum class Status { Found, Exhausted, NodeLimit };

  struct Outcome {
    Status status = Status::Exhausted;
    std::vector<std::uint32_t> options;
    std::uint64_t nodes = 0;
  };

  /// One solution. Ties in the item choice and the order of candidate
  /// options are randomized by `rng`.
  Outcome solve(std::mt19937_64& rng, std::uint64_t nodeLimit)
  {
    Outcome out;
    std::vector<std::int32_t> chosen;
    const auto st = search(rng, nodeLimit, out.nodes, chosen);
    out.status = st;
    if (st == Status::Found)
      for (auto node : chosen) out.options.push_back(static_cast<std::uint32_t>(row_[node]));
    // Leave the matrix as built so the object can be reused.
    return out;
  }

 private:
  void cover(std::int32_t c)
  {
    right_[left_[c]] = right_[c];
    left_[right_[c]] = left_[c];
    for (auto i = down_[c]; i != c; i = down_[i])
      for (auto j = right_[i]; j != i; j = right_[j]) {
        down_[up_[j]] = down_[j];
        up_[down_[j]] = up_[j];
        --size_[col_[j]];
      }
  }
  void uncover(std::int32_t c)
  {
    for (auto i = up_[c]; i != c; i = up_[i])
      for (auto j = left_[i]; j != i; j = left_[j]) {
        ++size_[col_[j]];
        down_[up_[j]] = j;
        up_[down_[j]] = j;
      }
    right_[left_[c]] = c;
    left_[right_[c]] = c;
  }

  Status search(std::mt19937_64& rng, std::uint64_t limit, std::uint64_t& nodes, std::vector<std::int32_t>& chosen)
  {
    if (right_[0] == 0) return Status::Found;
    if (++nodes > limit) return Status::NodeLimit;
    std::int32_t best = -1;
    std::int32_t bestSize = std::numeric_limits<std::int32_t>::max();
    std::uint64_t ties = 0;
    for (auto c = right_[0]; c != 0; c = right_[c]) {
      if (size_[c] < bestSize) {
        best = c;
        bestSize = size_[c];
        ties = 1;
      } else if (size_[c] == bestSize && std::uniform_int_distribution<std::uint64_t>(0, ties++)(rng) == 0) {
        best = c;
      }
    }
    if (bestSize == 0) return Status::Exhausted;

    std::vector<std::int32_t> rows;
    for (auto r = down_[best]; r != best; r = down_[r]) rows.push_back(r);
    std::shuffle(rows.begin(), rows.end(), rng);

    cover(best);
    Status result = Status::Exhausted;
    for (const auto r : rows) {
      chosen.push_back(r);
      for (auto j = right_[r]; j != r; j = right_[j]) cover(col_[j]);
      result = search(rng, limit, nodes, chosen);
      for (auto j = left_[r]; j != r; j = left_[j]) uncover(col_[j]);
      if (result == Status::Found) break;
      chosen.pop_back();
      if (result == Status::NodeLimit) break;
    }
    uncover(best);
    return result;
  }

  std::size_t items_;
  std::vector<std::int32_t> left_, right_, up_, down_, col_, row_, size_;
};

enum class SearchStatus { Found, NotFound };

inline const char* to_string(SearchStatus s) { return s == SearchStatus::Found ? "FOUND" : "NOT_FOUND"; }

struct SqsSearchResult {
  SearchStatus status = SearchStatus::NotFound;
  std::optional<QuadSystem> system;
  std::uint64_t nodes = 0;
  bool exhausted = false;  ///< true when the space was proven empty
};

namespace detail {

inline std::vector<Quadruple> all_quadruples(std::size_t v)
{
  std::vector<Quadruple> quads;
  quads.reserve(binomial(v, 4));
  const auto uv = static_cast<Point>(v);
  // Colex order, so quads[k].rank() == k.
  for (Point d = 3; d < uv; ++d)
    for (Point c = 2; c < d; ++c)
      for (Point b = 1; b < c; ++b)
        for (Point a = 0; a < b; ++a) quads.emplace_back(a, b, c, d);
  return quads;
}

}  // namespace detail

/// Searches for an SQS(v) avoiding every quadruple whose rank is flagged in
/// `forbidden` (empty means nothing is forbidden).
inline SqsSearchResult search_sqs(std::size_t v, std::uint64_t seed, std::uint64_t nodeLimit,
                                  const std::vector<char>& forbidden = {})
{
  if (!is_admissible_sqs_order(v))
    throw std::domain_error("no SQS(" + std::to_string(v) + ") exists: order must be 2 or 4 mod 6");
  const auto quads = detail::all_quadruples(v);
  if (!forbidden.empty() && forbidden.size() != quads.size())
    throw std::invalid_argument("forbidden mask has the wrong size");

  std::vector<std::vector<std::uint32_t>> options;
  std::vector<std::uint32_t> optionQuad;
  for (std::size_t k = 0; k < quads.size(); ++k) {
    if (!forbidden.empty() && forbidden[k]) continue;
    std::vector<std::uint32_t> items;
    for (const auto& t : quads[k].triples()) items.push_back(static_cast<std::uint32_t>(rank_triple(t[0], t[1], t[2])));
    options.push_back(std::move(items));
    optionQuad.push_back(static_cast<std::uint32_t>(k));
  }

  SqsSearchResult result;
  if (v < 4) {
    // Only the empty system; there are no triples to cover.
    result.status = SearchStatus::Found;
    result.system = QuadSystem(v, {});
    return result;
  }
  ExactCover dlx(binomial(v, 3), options);
  std::mt19937_64 rng(seed);
  auto out = dlx.solve(rng, nodeLimit);
  result.nodes = out.nodes;
  if (out.status == ExactCover::Status::Found) {
    std::vector<Quadruple> blocks;
    for (auto o : out.options) blocks.push_back(quads[optionQuad[o]]);
    result.status = SearchStatus::Found;
    result.system = QuadSystem(v, std::move(blocks));
  }
  result.exhausted = out.status == ExactCover::Status::Exhausted;
  return result;
}

struct WitnessResult {
  std::vector<QuadSystem> systems;  ///< systems[0] is the base
  std::uint64_t evaluated = 0;      ///< relabelings and local moves tried
};

namespace detail {

inline QuadSystem relabel(const QuadSystem& s, const std::vector<Point>& pi)
{
  std::vector<Quadruple> blocks;
  blocks.reserve(s.size());
  for (const auto& q : s.blocks()) blocks.emplace_back(pi[q[0]], pi[q[1]], pi[q[2]], pi[q[3]]);
  return QuadSystem(s.order(), std::move(blocks));
}

/// Annealing over relabelings pi of `base`, minimizing the number of blocks
/// of pi(base) already flagged in `used`. Moves swap two images. Returns
/// true with pi set to a collision-free relabeling.
inline bool anneal_relabeling(const QuadSystem& base, const std::vector<char>& used, std::vector<Point>& pi,
                              std::mt19937_64& rng, std::uint64_t moves, std::uint64_t& evaluated)
{
  const std::size_t v = base.order();
  std::vector<std::vector<std::size_t>> incident(v);
  for (std::size_t b = 0; b < base.size(); ++b)
    for (int t = 0; t < 4; ++t) incident[base.blocks()[b][t]].push_back(b);
  auto hit = [&](std::size_t b) {
    const auto& q = base.blocks()[b];
    return static_cast<long>(used[Quadruple(pi[q[0]], pi[q[1]], pi[q[2]], pi[q[3]]).rank()]);
  };
  long cost = 0;
  for (std::size_t b = 0; b < base.size(); ++b) cost += hit(b);

  std::uniform_int_distribution<std::size_t> point(0, v - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<char> mark(base.size(), 0);
  std::vector<std::size_t> touched;
  double temperature = 1.0;
  for (std::uint64_t m = 0; m < moves && cost > 0; ++m) {
    ++evaluated;
    const auto a = point(rng);
    const auto b = point(rng);
    if (a == b) continue;
    touched.clear();
    for (auto x : incident[a])
      if (!mark[x]) mark[x] = 1, touched.push_back(x);
    for (auto x : incident[b])
      if (!mark[x]) mark[x] = 1, touched.push_back(x);
    long before = 0;
    for (auto x : touched) before += hit(x), mark[x] = 0;
    std::swap(pi[a], pi[b]);
    long after = 0;
    for (auto x : touched) after += hit(x);
    const long delta = after - before;
    if (delta <= 0 || unit(rng) < std::exp(-static_cast<double>(delta) / temperature))
      cost += delta;
    else
      std::swap(pi[a], pi[b]);
    temperature = std::max(0.05, temperature * 0.9999);
  }
  return cost == 0;
}

}  // namespace detail

/// Up to k pairwise disjoint images of `base` under point relabelings, base
/// first. Candidates are tried in this order for each new witness: the
/// cyclic shifts x -> x+s (mod v), uniform random relabelings, then
/// annealed relabelings. `budget` caps the total number of relabelings and
/// local moves evaluated. May return fewer than k.
inline WitnessResult disjoint_witnesses(const QuadSystem& base, std::size_t k, std::uint64_t budget,
                                        std::uint64_t seed = 1)
{
  if (auto cert = verify_sqs(base); !cert.passed())
    throw std::invalid_argument("disjoint_witnesses: base is not a Steiner quadruple system");
  const std::size_t v = base.order();
  WitnessResult out;
  if (k == 0) return out;
  out.systems.push_back(base);
  // At most v-3 systems can be disjoint; for v = 4 that is the base alone.
  const std::size_t cap = std::min(k, v >= 4 ? v - 3 : std::size_t{1});
  std::vector<char> used(binomial(v, 4), 0);
  auto take = [&](QuadSystem s) {
    for (const auto& q : s.blocks()) used[q.rank()] = 1;
    out.systems.push_back(std::move(s));
  };
  auto fresh = [&](const QuadSystem& s) {
    return std::none_of(s.blocks().begin(), s.blocks().end(), [&](const Quadruple& q) { return used[q.rank()]; });
  };
  for (const auto& q : base.blocks()) used[q.rank()] = 1;

  std::vector<Point> pi(v);
  for (std::size_t s = 1; s < v && out.systems.size() < cap && out.evaluated < budget; ++s) {
    ++out.evaluated;
    for (std::size_t x = 0; x < v; ++x) pi[x] = static_cast<Point>((x + s) % v);
    auto image = detail::relabel(base, pi);
    if (fresh(image)) take(std::move(image));
  }

  std::mt19937_64 rng(seed);
  const std::uint64_t randomShare = budget / 10;
  while (out.systems.size() < cap && out.evaluated < randomShare) {
    ++out.evaluated;
    std::iota(pi.begin(), pi.end(), Point{0});
    std::shuffle(pi.begin(), pi.end(), rng);
    auto image = detail::relabel(base, pi);
    if (fresh(image)) take(std::move(image));
  }

  const std::uint64_t movesPerRestart = 20000;
  while (out.systems.size() < cap && out.evaluated < budget) {
    std::iota(pi.begin(), pi.end(), Point{0});
    std::shuffle(pi.begin(), pi.end(), rng);
    const auto moves = std::min(movesPerRestart, budget - out.evaluated);
    if (detail::anneal_relabeling(base, used, pi, rng, moves, out.evaluated)) take(detail::relabel(base, pi));
  }
  return out;
}

}  // namespace pdq

#endif  // PDQ_SEARCH_HPP
