#ifndef PDQ_CORE_HPP
#define PDQ_CORE_HPP

// Shared vocabulary: points, quadruples, quadruple systems, matchings,
// Latin grids and the half partition used for configuration analysis.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdq {

using Point = std::uint32_t;

constexpr std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept
{
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

constexpr bool is_admissible_sqs_order(std::size_t v) noexcept
{
  return v == 1 || v == 2 || v % 6 == 2 || v % 6 == 4;
}

/// Colex rank of a sorted 3-subset {a<b<c}: C(a,1) + C(b,2) + C(c,3).
constexpr std::uint64_t rank_triple(Point a, Point b, Point c) noexcept
{
  return binomial(a, 1) + binomial(b, 2) + binomial(c, 3);
}

/// Colex rank of a sorted 4-subset.
constexpr std::uint64_t rank_quad(Point a, Point b, Point c, Point d) noexcept
{
  return binomial(a, 1) + binomial(b, 2) + binomial(c, 3) + binomial(d, 4);
}

/// Four distinct points, kept sorted ascending.
class Quadruple {
 public:
  Quadruple() = default;
  Quadruple(Point a, Point b, Point c, Point d) : p_{a, b, c, d}
  {
    std::sort(p_.begin(), p_.end());
    if (p_[0] == p_[1] || p_[1] == p_[2] || p_[2] == p_[3])
      throw std::invalid_argument("quadruple has a repeated point");
  }
  explicit Quadruple(const std::array<Point, 4>& pts) : Quadruple(pts[0], pts[1], pts[2], pts[3]) {}

  const std::array<Point, 4>& points() const noexcept { return p_; }
  Point operator[](std::size_t i) const noexcept { return p_[i]; }
  Point max() const noexcept { return p_[3]; }
  bool contains(Point x) const noexcept { return std::binary_search(p_.begin(), p_.end(), x); }
  std::uint64_t rank() const noexcept { return rank_quad(p_[0], p_[1], p_[2], p_[3]); }

  /// The four 3-subsets, each sorted.
  std::array<std::array<Point, 3>, 4> triples() const noexcept
  {
    return {{{p_[1], p_[2], p_[3]}, {p_[0], p_[2], p_[3]}, {p_[0], p_[1], p_[3]}, {p_[0], p_[1], p_[2]}}};
  }

  std::string to_string() const
  {
    return "{" + std::to_string(p_[0]) + "," + std::to_string(p_[1]) + "," + std::to_string(p_[2]) + "," +
           std::to_string(p_[3]) + "}";
  }

  friend auto operator<=>(const Quadruple&, const Quadruple&) = default;

 private:
  std::array<Point, 4> p_{0, 1, 2, 3};
};

/// Blocks of 4-subsets over [0, order). Blocks are kept in lexicographic
/// order; duplicates are representable so verifiers can report them.
class QuadSystem {
 public:
  QuadSystem() = default;
  QuadSystem(std::size_t order, std::vector<Quadruple> blocks) : order_(order), blocks_(std::move(blocks))
  {
    for (const auto& q : blocks_)
      if (q.max() >= order_)
        throw std::domain_error("block " + q.to_string() + " outside point set of order " + std::to_string(order_));
    std::sort(blocks_.begin(), blocks_.end());
  }

  std::size_t order() const noexcept { return order_; }
  const std::vector<Quadruple>& blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  /// Block count of an SQS of this order.
  std::uint64_t steiner_size() const noexcept { return binomial(order_, 3) / 4; }

  friend bool operator==(const QuadSystem&, const QuadSystem&) = default;

 private:
  std::size_t order_ = 0;
  std::vector<Quadruple> blocks_;
};

/// Ordered systems over a common point set.
class PdqCollection {
 public:
  PdqCollection() = default;
  PdqCollection(std::size_t order, std::vector<QuadSystem> systems) : order_(order), systems_(std::move(systems))
  {
    for (const auto& s : systems_)
      if (s.order() != order_) throw std::invalid_argument("collection mixes systems of different orders");
  }

  std::size_t order() const noexcept { return order_; }
  const std::vector<QuadSystem>& systems() const noexcept { return systems_; }
  std::size_t size() const noexcept { return systems_.size(); }

  void append(QuadSystem s)
  {
    if (s.order() != order_) throw std::invalid_argument("collection mixes systems of different orders");
    systems_.push_back(std::move(s));
  }

 private:
  std::size_t order_ = 0;
  std::vector<QuadSystem> systems_;
};

class PairEdge {
 public:
  PairEdge() = default;
  PairEdge(Point a, Point b) : lo_(std::min(a, b)), hi_(std::max(a, b))
  {
    if (a == b) throw std::invalid_argument("edge endpoints coincide");
  }
  constexpr Point lo() const noexcept { return lo_; }
  constexpr Point hi() const noexcept { return hi_; }
  bool touches(Point x) const noexcept { return lo_ == x || hi_ == x; }
  std::string to_string() const { return "{" + std::to_string(lo_) + "," + std::to_string(hi_) + "}"; }
  friend auto operator<=>(const PairEdge&, const PairEdge&) = default;

 private:
  Point lo_ = 0;
  Point hi_ = 1;
};

/// Index of an unordered pair {a<b} in colex order.
constexpr std::uint64_t rank_pair(const PairEdge& e) noexcept { return binomial(e.hi(), 2) + e.lo(); }

/// A set of edges on [0, vertexCount). Whether it really is a perfect
/// matching is a property checked by verify, not enforced here.
class OneFactor {
 public:
  OneFactor() = default;
  OneFactor(std::size_t vertexCount, std::vector<PairEdge> edges) : n_(vertexCount), edges_(std::move(edges))
  {
    for (const auto& e : edges_)
      if (e.hi() >= n_) throw std::domain_error("edge " + e.to_string() + " outside vertex set");
    std::sort(edges_.begin(), edges_.end());
  }
  std::size_t vertex_count() const noexcept { return n_; }
  const std::vector<PairEdge>& edges() const noexcept { return edges_; }

  bool is_perfect_matching() const
  {
    if (n_ % 2 != 0 || edges_.size() != n_ / 2) return false;
    std::vector<char> seen(n_, 0);
    for (const auto& e : edges_) {
      if (seen[e.lo()] || seen[e.hi()]) return false;
      seen[e.lo()] = seen[e.hi()] = 1;
    }
    return true;
  }

  friend bool operator==(const OneFactor&, const OneFactor&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<PairEdge> edges_;
};

class OneFactorization {
 public:
  OneFactorization() = default;
  OneFactorization(std::size_t vertexCount, std::vector<OneFactor> factors) : n_(vertexCount), factors_(std::move(factors))
  {
    for (const auto& f : factors_)
      if (f.vertex_count() != n_) throw std::invalid_argument("factor on a different vertex set");
  }
  std::size_t vertex_count() const noexcept { return n_; }
  const std::vector<OneFactor>& factors() const noexcept { return factors_; }
  const OneFactor& operator[](std::size_t i) const { return factors_.at(i); }
  std::size_t size() const noexcept { return factors_.size(); }

 private:
  std::size_t n_ = 0;
  std::vector<OneFactor> factors_;
};

/// k x v array of symbols in [0, symbolCount). Latin-ness is a checked
/// property (is_latin_rectangle), not a constructor invariant.
class LatinGrid {
 public:
  LatinGrid() = default;
  LatinGrid(std::size_t rows, std::size_t cols, std::size_t symbolCount, std::vector<std::uint32_t> cells)
      : rows_(rows), cols_(cols), symbols_(symbolCount), cells_(std::move(cells))
  {
    if (cells_.size() != rows_ * cols_) throw std::invalid_argument("grid cell count does not match its shape");
    for (auto s : cells_)
      if (s >= symbols_) throw std::domain_error("grid symbol out of range");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t symbol_count() const noexcept { return symbols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::uint32_t operator()(std::size_t r, std::size_t c) const { return cells_.at(r * cols_ + c); }
  std::span<const std::uint32_t> row(std::size_t r) const
  {
    if (r >= rows_) throw std::out_of_range("row out of range");
    return std::span<const std::uint32_t>(cells_).subspan(r * cols_, cols_);
  }
  const std::vector<std::uint32_t>& cells() const noexcept { return cells_; }

  /// Rows are permutations of the symbols and columns hold distinct entries.
  bool is_latin_rectangle() const
  {
    if (symbols_ != cols_ || rows_ > cols_) return false;
    std::vector<char> seen(symbols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t c = 0; c < cols_; ++c) {
        auto s = (*this)(r, c);
        if (seen[s]) return false;
        seen[s] = 1;
      }
    }
    for (std::size_t c = 0; c < cols_; ++c) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t r = 0; r < rows_; ++r) {
        auto s = (*this)(r, c);
        if (seen[s]) return false;
        seen[s] = 1;
      }
    }
    return true;
  }
  bool is_latin_square() const { return is_square() && is_latin_rectangle(); }

  friend bool operator==(const LatinGrid&, const LatinGrid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t symbols_ = 0;
  std::vector<std::uint32_t> cells_;
};

/// [0, 2m) split into a low half [0, m) and a high half [m, 2m).
class HalfPartition {
 public:
  explicit HalfPartition(std::size_t order) : order_(order)
  {
    if (order == 0 || order % 2 != 0) throw std::domain_error("half partition needs a positive even order");
  }
  std::size_t order() const noexcept { return order_; }
  std::size_t half() const noexcept { return order_ / 2; }
  bool in_low_half(Point p) const
  {
    if (p >= order_) throw std::domain_error("point " + std::to_string(p) + " outside partition");
    return p < order_ / 2;
  }

 private:
  std::size_t order_;
};

struct Configuration {
  int low = 0;
  int high = 0;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

/// (|q n low|, |q n high|).
inline Configuration configuration_of(const Quadruple& q, const HalfPartition& p)
{
  int low = 0;
  for (Point x : q.points()) low += p.in_low_half(x) ? 1 : 0;
  return {low, 4 - low};
}

/// (x, eps) in Z_v x Z_2 -> x + eps*v.
inline Point flatten(Point x, int eps, std::size_t v)
{
  if (x >= v || (eps != 0 && eps != 1)) throw std::domain_error("flatten: point outside Z_v x Z_2");
  return static_cast<Point>(x + static_cast<std::size_t>(eps) * v);
}

inline std::pair<Point, int> unflatten(Point p, std::size_t v)
{
  if (p >= 2 * v) throw std::domain_error("unflatten: point outside Z_2v");
  return p < v ? std::pair<Point, int>{p, 0} : std::pair<Point, int>{static_cast<Point>(p - v), 1};
}

}  // namespace pdq

#endif  // PDQ_CORE_HPP
