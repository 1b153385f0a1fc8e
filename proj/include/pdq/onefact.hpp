#ifndef PDQ_ONEFACT_HPP
#define PDQ_ONEFACT_HPP

// Pair families A_i, B_i, C_i, D_i on [0, 2n) and the one-factorizations R
// and T of K_2n obtained by splitting the cycles of A_i and B_i.

#include <map>
#include <numeric>
#include <vector>

#include "pdq/core.hpp"
#include "pdq/latin.hpp"

namespace pdq {

struct PairFamily {
  char kind = 'A';  ///< 'A', 'B', 'C' or 'D'
  int index = 0;
  int n = 0;
  std::vector<PairEdge> edges;

  OneFactor as_factor() const { return OneFactor(2 * static_cast<std::size_t>(n), edges); }
};

/// A_i: differences i within {0..n-1}; B_i: the same within {n..2n-1};
/// C_i: crossing pairs with x+y = i (mod n); D_i: crossing with y-x = i.
inline PairFamily pair_family(int n, char kind, int i)
{
  detail::require_odd_order(n);
  PairFamily f{kind, i, n, {}};
  const auto un = static_cast<Point>(n);
  switch (kind) {
    case 'A':
    case 'B': {
      if (i < 1 || i > (n - 1) / 2) throw std::domain_error("A/B family index out of range");
      const Point off = kind == 'A' ? 0 : un;
      for (int x = 0; x < n; ++x) f.edges.emplace_back(off + x, off + detail::mod(x + i, n));
      break;
    }
    case 'C':
    case 'D': {
      if (i < 0 || i > n - 1) throw std::domain_error("C/D family index out of range");
      for (int x = 0; x < n; ++x) {
        const auto y = kind == 'C' ? detail::mod(i - x, n) : detail::mod(x + i, n);
        f.edges.emplace_back(static_cast<Point>(x), un + y);
      }
      break;
    }
    default: throw std::domain_error("unknown pair family kind");
  }
  std::sort(f.edges.begin(), f.edges.end());
  return f;
}

/// Cycle as a vertex sequence; edges join consecutive vertices and close up.
using Cycle = std::vector<Point>;

/// gcd(i,n) cycles of length n/gcd(i,n); cycle j starts at residue j and
/// steps by +i.
inline std::vector<Cycle> cycle_decomposition(const PairFamily& f)
{
  if (f.kind != 'A' && f.kind != 'B') throw std::invalid_argument("cycle decomposition needs an A or B family");
  const int n = f.n;
  const int i = f.index;
  const int rho = std::gcd(i, n);
  const int len = n / rho;
  const Point off = f.kind == 'A' ? 0 : static_cast<Point>(n);
  std::vector<Cycle> cycles;
  for (int j = 0; j < rho; ++j) {
    Cycle c;
    for (int s = 0; s < len; ++s) c.push_back(off + detail::mod(j + static_cast<long long>(s) * i, n));
    cycles.push_back(std::move(c));
  }
  return cycles;
}

struct CycleHalves {
  std::vector<PairEdge> first;   ///< misses `removed.first`
  std::vector<PairEdge> second;  ///< misses `removed.second`
};

/// Drops the edge {a,b} from an odd cycle and walks the remaining path from
/// b to a, giving alternate edges to the two halves. The first half covers
/// every vertex of the cycle but a, the second every vertex but b.
inline CycleHalves split_cycle(const Cycle& cycle, std::pair<Point, Point> removed)
{
  const std::size_t len = cycle.size();
  if (len < 3 || len % 2 == 0) throw std::invalid_argument("split_cycle needs an odd cycle");
  const auto [a, b] = removed;
  std::size_t pa = len;
  for (std::size_t k = 0; k < len; ++k)
    if (cycle[k] == a) pa = k;
  if (pa == len) throw std::invalid_argument("split_cycle: edge not in cycle");
  int step = 0;
  if (cycle[(pa + 1) % len] == b) step = 1;
  else if (cycle[(pa + len - 1) % len] == b) step = -1;
  else throw std::invalid_argument("split_cycle: edge not in cycle");

  CycleHalves out;
  std::size_t cur = (pa + len + step) % len;  // b
  for (std::size_t e = 1; e < len; ++e) {
    const std::size_t next = (cur + len + step) % len;
    (e % 2 == 1 ? out.first : out.second).emplace_back(cycle[cur], cycle[next]);
    cur = next;
  }
  return out;
}

/// One-factorization R (C-based) or T (D-based) of K_2n, labeled by the
/// r_side_labels / t_side_labels alphabets.
class RTFactorization {
 public:
  RTFactorization(char kind, int n, std::vector<FactorLabel> labels, std::vector<OneFactor> factors)
      : kind_(kind), n_(n), labels_(std::move(labels)), factors_(std::move(factors))
  {
    for (std::size_t k = 0; k < labels_.size(); ++k) index_.emplace(labels_[k], k);
  }

  char kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  const std::vector<FactorLabel>& labels() const noexcept { return labels_; }
  const std::vector<OneFactor>& factors() const noexcept { return factors_; }

  /// Accepts tail aliases such as R_{6,1} for n = 11 (== C_5).
  const OneFactor& at(const FactorLabel& label) const
  {
    auto it = index_.find(canonical_label(n_, label));
    if (it == index_.end()) throw std::out_of_range("no factor labeled " + label.to_string());
    return factors_[it->second];
  }
  std::size_t index_of(const FactorLabel& label) const
  {
    auto it = index_.find(canonical_label(n_, label));
    if (it == index_.end()) throw std::out_of_range("no factor labeled " + label.to_string());
    return it->second;
  }

  OneFactorization as_one_factorization() const { return OneFactorization(2 * static_cast<std::size_t>(n_), factors_); }

 private:
  char kind_;
  int n_;
  std::vector<FactorLabel> labels_;
  std::vector<OneFactor> factors_;
  std::map<FactorLabel, std::size_t> index_;
};

namespace detail {

inline void require_rt_order(int n)
{
  if (n < 7 || (n % 6 != 1 && n % 6 != 5))
    throw std::domain_error("R/T factorizations need n >= 7 with n = 1 or 5 (mod 6)");
}

inline std::size_t cycle_containing(const std::vector<Cycle>& cycles, Point x)
{
  for (std::size_t k = 0; k < cycles.size(); ++k)
    if (std::find(cycles[k].begin(), cycles[k].end(), x) != cycles[k].end()) return k;
  throw std::logic_error("vertex not on any cycle");
}

/// For each i and each cycle j of A_i the removed edges are {j, i+j} and a
/// B_i edge {beta, b}; the anchors {j, beta}, {i+j, b} lie in the
/// companion family (C_{i-1} for R, D_{i-1} for T).
///   R: beta = n + (i-1-j), b = n + (-1-j)     (mod n offsets)
///   T: beta = n + (i+j-1), b = n + (2i+j-1)
inline RTFactorization build_rt(int n, char kind)
{
  require_rt_order(n);
  const int h = (n - 1) / 2;
  const char companion = kind == 'R' ? 'C' : 'D';
  const auto un = static_cast<Point>(n);
  std::vector<OneFactor> factors;
  const std::size_t v = 2 * static_cast<std::size_t>(n);

  for (int i = 1; i <= h; ++i) {
    const auto aCycles = cycle_decomposition(pair_family(n, 'A', i));
    const auto bCycles = cycle_decomposition(pair_family(n, 'B', i));
    const int rho = std::gcd(i, n);
    std::vector<PairEdge> f1;
    std::vector<PairEdge> f2;
    auto f3Edges = pair_family(n, companion, i - 1).edges;
    std::vector<PairEdge> anchors;
    std::vector<PairEdge> patches;

    for (int j = 0; j < rho; ++j) {
      const Point a0 = static_cast<Point>(j);
      const Point a1 = mod(i + j, n);
      const Point beta = un + (kind == 'R' ? mod(i - 1 - j, n) : mod(i + j - 1, n));
      const Point b = un + (kind == 'R' ? mod(-1 - j, n) : mod(2 * i + j - 1, n));

      const auto aHalves = split_cycle(aCycles[static_cast<std::size_t>(j)], {a0, a1});
      const auto bHalves = split_cycle(bCycles[cycle_containing(bCycles, beta)], {beta, b});
      f1.insert(f1.end(), aHalves.first.begin(), aHalves.first.end());
      f1.insert(f1.end(), bHalves.first.begin(), bHalves.first.end());
      f1.emplace_back(a0, beta);
      f2.insert(f2.end(), aHalves.second.begin(), aHalves.second.end());
      f2.insert(f2.end(), bHalves.second.begin(), bHalves.second.end());
      f2.emplace_back(a1, b);
      anchors.emplace_back(a0, beta);
      anchors.emplace_back(a1, b);
      patches.emplace_back(a0, a1);
      patches.emplace_back(beta, b);
    }
    std::erase_if(f3Edges, [&](const PairEdge& e) { return std::find(anchors.begin(), anchors.end(), e) != anchors.end(); });
    f3Edges.insert(f3Edges.end(), patches.begin(), patches.end());

    factors.emplace_back(v, std::move(f1));
    factors.emplace_back(v, std::move(f2));
    factors.emplace_back(v, std::move(f3Edges));
  }
  for (int c = h; c <= n - 1; ++c) factors.push_back(pair_family(n, companion, c).as_factor());

  return RTFactorization(kind, n, kind == 'R' ? r_side_labels(n) : t_side_labels(n), std::move(factors));
}

}  // namespace detail

inline RTFactorization build_R(int n) { return detail::build_rt(n, 'R'); }
inline RTFactorization build_T(int n) { return detail::build_rt(n, 'T'); }

}  // namespace pdq

#endif  // PDQ_ONEFACT_HPP
