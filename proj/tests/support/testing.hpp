#ifndef PDQ_TESTS_SUPPORT_TESTING_HPP
#define PDQ_TESTS_SUPPORT_TESTING_HPP

// Shared helpers for the unit and acceptance suites: cached base systems,
// a circle-method one-factorization, and single-element fault injectors
// whose reported counterexamples are re-checked by brute force.

#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pdq/pdq.hpp"

namespace testing_support {

using namespace pdq;

/// SQS(v) from a fixed-seed search; cached per order.
inline const QuadSystem& base_sqs(std::size_t v)
{
  static std::map<std::size_t, QuadSystem> cache;
  auto it = cache.find(v);
  if (it == cache.end()) {
    auto r = search_sqs(v, 1, 50'000'000);
    if (!r.system) throw std::runtime_error("test base search failed for v = " + std::to_string(v));
    it = cache.emplace(v, *r.system).first;
  }
  return it->second;
}

inline const DlsOutput& dls_output(int n)
{
  static std::map<int, DlsOutput> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, dls_construct(base_sqs(2 * static_cast<std::size_t>(n)), build_M(n))).first;
  return it->second;
}

/// Only the configuration (2,2) blocks of the DLS systems from M_n:
/// {x1, x2, alpha_i(x1)+2n, alpha_i(x2)+2n}. Those blocks do not depend on
/// the base system, so this stands in for orders where no SQS(2n) is at
/// hand (2n = 22, 26).
inline DlsOutput pair_step_output(int n)
{
  const auto m = build_M(n);
  const auto v = static_cast<Point>(2 * n);
  std::vector<QuadSystem> systems;
  for (Point i = 0; i < v; ++i) {
    std::vector<Quadruple> blocks;
    for (Point x1 = 0; x1 < v; ++x1)
      for (Point x2 = x1 + 1; x2 < v; ++x2) blocks.emplace_back(x1, x2, m(i, x1) + v, m(i, x2) + v);
    systems.emplace_back(2 * v, std::move(blocks));
  }
  return DlsOutput{PdqCollection(2 * v, std::move(systems)), HalfPartition(2 * v), m};
}

/// Circle method: vertex v-1 fixed, factor r pairs {r, v-1} and
/// {r+k, r-k} (mod v-1).
inline OneFactorization round_robin(std::size_t v)
{
  const std::size_t m = v - 1;
  std::vector<OneFactor> factors;
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<PairEdge> edges{PairEdge(static_cast<Point>(r), static_cast<Point>(m))};
    for (std::size_t k = 1; k <= (m - 1) / 2; ++k)
      edges.emplace_back(static_cast<Point>((r + k) % m), static_cast<Point>((r + m - k) % m));
    factors.emplace_back(v, std::move(edges));
  }
  return OneFactorization(v, std::move(factors));
}

inline std::set<PairEdge> edge_set(const std::vector<std::pair<int, int>>& pairs)
{
  std::set<PairEdge> out;
  for (auto [a, b] : pairs) out.emplace(static_cast<Point>(a), static_cast<Point>(b));
  return out;
}

inline std::set<PairEdge> edge_set(const std::vector<PairEdge>& edges) { return {edges.begin(), edges.end()}; }

inline FactorLabel label(const std::string& text) { return FactorLabel::parse(text); }

// ---------------------------------------------------------------------------
// Fault injection

struct Trial {
  bool detected = false;
  bool counterexampleValid = false;
  std::string detail;
};

namespace detail {

inline std::size_t occurrences(const QuadSystem& s, Point a, Point b, Point c)
{
  std::size_t k = 0;
  for (const auto& q : s.blocks())
    if (q.contains(a) && q.contains(b) && q.contains(c)) ++k;
  return k;
}

inline Quadruple quad_from(const Json& j) { return Quadruple(j[0].get<Point>(), j[1].get<Point>(), j[2].get<Point>(), j[3].get<Point>()); }

inline bool system_has(const QuadSystem& s, const Quadruple& q)
{
  return std::binary_search(s.blocks().begin(), s.blocks().end(), q);
}

/// Replaces one point of block `b` with a point outside it.
inline QuadSystem mutate_point(const QuadSystem& s, std::size_t b, std::mt19937_64& rng)
{
  auto blocks = s.blocks();
  const auto q = blocks[b];
  std::uniform_int_distribution<int> pos(0, 3);
  std::uniform_int_distribution<Point> pt(0, static_cast<Point>(s.order() - 1));
  auto pts = q.points();
  Point x;
  do x = pt(rng);
  while (q.contains(x));
  pts[pos(rng)] = x;
  blocks[b] = Quadruple(pts);
  return QuadSystem(s.order(), std::move(blocks));
}

inline bool sqs_counterexample_ok(const QuadSystem& s, const Json& ce)
{
  const auto& t = ce.at("triple");
  const auto k = occurrences(s, t[0].get<Point>(), t[1].get<Point>(), t[2].get<Point>());
  return k != 1 && k == ce.at("count").get<std::size_t>();
}

/// Independent restatement of the (2,2) classes hit by DLS with M_n.
inline bool conf22_predicted(const Quadruple& q, int n)
{
  const auto un = static_cast<Point>(n);
  const Point half = 2 * un;
  struct Kind {
    char family;
    int index;
  };
  auto classify = [&](Point a, Point b, bool high) -> Kind {
    const bool aLow = a < un;
    const bool bLow = b < un;
    if (aLow == bLow) {
      const int d = static_cast<int>((b + un - a) % un);
      return {'S', std::min(d, n - d)};  // A or B family, same index
    }
    const Point x = aLow ? a : b;
    const Point y = aLow ? b : a;
    if (!high) return {'C', static_cast<int>((x + y) % un)};
    return {'D', static_cast<int>((y - un + un - x) % un)};
  };
  const auto lo = classify(q[0], q[1], false);
  const auto hi = classify(q[2] - half, q[3] - half, true);
  if (lo.family == 'S' && hi.family == 'S') return lo.index == hi.index;
  if (lo.family == 'C' && hi.family == 'D') return hi.index == lo.index || hi.index == (lo.index + n - 1) % n;
  return false;
}

}  // namespace detail

inline Trial sqs_fault(const QuadSystem& s, std::mt19937_64& rng)
{
  std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
  const auto bad = detail::mutate_point(s, pick(rng), rng);
  const auto cert = verify_sqs(bad);
  Trial t;
  t.detected = !cert.passed();
  if (const auto* f = cert.first_failure()) {
    t.detail = f->name;
    t.counterexampleValid = f->name == "triple_coverage" && detail::sqs_counterexample_ok(bad, f->counterexample);
  }
  return t;
}

/// Copies one block of system a over a block of system b.
inline Trial pdq_fault(const PdqCollection& c, std::mt19937_64& rng)
{
  std::uniform_int_distribution<std::size_t> sys(0, c.size() - 1);
  const auto a = sys(rng);
  std::size_t b;
  do b = sys(rng);
  while (b == a);
  std::uniform_int_distribution<std::size_t> blk(0, c.systems()[a].size() - 1);
  auto systems = c.systems();
  auto blocks = systems[b].blocks();
  blocks[blk(rng)] = systems[a].blocks()[blk(rng)];
  systems[b] = QuadSystem(c.order(), std::move(blocks));
  const PdqCollection bad(c.order(), systems);
  const auto cert = verify_pdq(bad);
  Trial t;
  t.detected = !cert.passed();
  t.counterexampleValid = t.detected;
  for (const auto& r : cert.results()) {
    if (r.pass) continue;
    t.detail += r.name + " ";
    if (r.name == "pairwise_disjoint") {
      const auto q = detail::quad_from(r.counterexample.at("quadruple"));
      const auto sa = r.counterexample.at("system_a").get<std::size_t>();
      const auto sb = r.counterexample.at("system_b").get<std::size_t>();
      t.counterexampleValid &= sa != sb && detail::system_has(systems[sa], q) && detail::system_has(systems[sb], q);
    } else if (r.name == "each_sqs") {
      const auto k = r.counterexample.at("system").get<std::size_t>();
      t.counterexampleValid &= detail::sqs_counterexample_ok(systems[k], r.counterexample.at("detail"));
    } else {
      t.counterexampleValid = false;
    }
  }
  return t;
}

/// Moves one endpoint of one edge to a different vertex.
inline Trial onefact_fault(const OneFactorization& f, std::mt19937_64& rng)
{
  const std::size_t v = f.vertex_count();
  std::uniform_int_distribution<std::size_t> fac(0, f.size() - 1);
  std::uniform_int_distribution<Point> pt(0, static_cast<Point>(v - 1));
  auto factors = f.factors();
  const auto k = fac(rng);
  auto edges = factors[k].edges();
  std::uniform_int_distribution<std::size_t> e(0, edges.size() - 1);
  const auto idx = e(rng);
  const auto old = edges[idx];
  Point x;
  do x = pt(rng);
  while (x == old.lo() || x == old.hi());
  edges[idx] = PairEdge(old.lo(), x);
  factors[k] = OneFactor(v, std::move(edges));
  const OneFactorization bad(v, factors);
  const auto cert = verify_one_factorization(bad);
  Trial t;
  t.detected = !cert.passed();
  t.counterexampleValid = t.detected;
  for (const auto& r : cert.results()) {
    if (r.pass) continue;
    t.detail += r.name + " ";
    const auto& ce = r.counterexample;
    if (r.name == "perfect_matchings") {
      const auto fk = ce.at("factor").get<std::size_t>();
      const auto vx = ce.at("vertex").get<Point>();
      std::size_t seen = 0;
      for (const auto& ed : factors[fk].edges()) seen += ed.touches(vx) ? 1 : 0;
      t.counterexampleValid &= seen != 1 && seen == ce.at("occurrences").get<std::size_t>();
    } else if (r.name == "edge_tiling") {
      const PairEdge p(ce.at("pair")[0].get<Point>(), ce.at("pair")[1].get<Point>());
      std::size_t seen = 0;
      for (const auto& fct : factors)
        for (const auto& ed : fct.edges()) seen += ed == p ? 1 : 0;
      t.counterexampleValid &= seen != 1 && seen == ce.at("count").get<std::size_t>();
    } else {
      t.counterexampleValid = false;
    }
  }
  return t;
}

/// Overwrites one cell with a different symbol.
inline Trial latin_fault(const LatinGrid& g, std::mt19937_64& rng)
{
  std::uniform_int_distribution<std::size_t> row(0, g.rows() - 1);
  std::uniform_int_distribution<std::size_t> col(0, g.cols() - 1);
  std::uniform_int_distribution<std::uint32_t> sym(0, static_cast<std::uint32_t>(g.symbol_count() - 1));
  auto cells = g.cells();
  const auto r = row(rng);
  const auto c = col(rng);
  std::uint32_t s;
  do s = sym(rng);
  while (s == cells[r * g.cols() + c]);
  cells[r * g.cols() + c] = s;
  const LatinGrid bad(g.rows(), g.cols(), g.symbol_count(), cells);
  const auto cert = verify_latin(bad);
  Trial t;
  t.detected = !cert.passed();
  t.counterexampleValid = t.detected;
  for (const auto& res : cert.results()) {
    if (res.pass) continue;
    t.detail += res.name + " ";
    const auto& ce = res.counterexample;
    const auto rr = ce.at("row").get<std::size_t>();
    const auto cc = ce.at("col").get<std::size_t>();
    const auto ss = ce.at("symbol").get<std::uint32_t>();
    if (res.name == "rows")
      t.counterexampleValid &= bad(rr, cc) == ss && bad(rr, ce.at("repeats_col").get<std::size_t>()) == ss &&
                               ce.at("repeats_col").get<std::size_t>() != cc;
    else if (res.name == "columns")
      t.counterexampleValid &= bad(rr, cc) == ss && bad(ce.at("repeats_row").get<std::size_t>(), cc) == ss &&
                               ce.at("repeats_row").get<std::size_t>() != rr;
    else
      t.counterexampleValid = false;
  }
  return t;
}

namespace detail {

inline DlsOutput with_system(const DlsOutput& out, std::size_t k, QuadSystem s)
{
  auto systems = out.systems.systems();
  systems[k] = std::move(s);
  return DlsOutput{PdqCollection(out.systems.order(), std::move(systems)), out.partition, out.latin};
}

inline std::size_t count_in(const PdqCollection& c, const Quadruple& q)
{
  std::size_t k = 0;
  for (const auto& s : c.systems()) k += std::count(s.blocks().begin(), s.blocks().end(), q);
  return k;
}

/// Random block of a random system whose configuration satisfies `want`.
template <typename Pred>
std::pair<std::size_t, std::size_t> pick_block(const DlsOutput& out, std::mt19937_64& rng, Pred want)
{
  std::uniform_int_distribution<std::size_t> sys(0, out.systems.size() - 1);
  while (true) {
    const auto k = sys(rng);
    const auto& s = out.systems.systems()[k];
    std::uniform_int_distribution<std::size_t> blk(0, s.size() - 1);
    const auto b = blk(rng);
    if (want(configuration_of(s.blocks()[b], out.partition))) return {k, b};
  }
}

}  // namespace detail

/// Mutates a (3,1) or (1,3) block of a DLS output.
inline Trial conf13_fault(const DlsOutput& out, std::mt19937_64& rng)
{
  const auto [k, b] = detail::pick_block(out, rng, [](Configuration c) { return c.low == 1 || c.low == 3; });
  const auto bad = detail::with_system(out, k, detail::mutate_point(out.systems.systems()[k], b, rng));
  const auto cert = verify_lemma_conf13(bad);
  Trial t;
  t.detected = !cert.passed();
  if (const auto* f = cert.first_failure()) {
    t.detail = f->name;
    const auto q = detail::quad_from(f->counterexample.at("quadruple"));
    const auto conf = configuration_of(q, out.partition);
    const auto seen = detail::count_in(bad.systems, q);
    t.counterexampleValid = (conf.low == 1 || conf.low == 3) && seen != 1 &&
                            seen == f->counterexample.at("count").get<std::size_t>();
  }
  return t;
}

/// Mutates a (2,2) block of a DLS output built from M_n.
inline Trial conf22_fault(const DlsOutput& out, int n, std::mt19937_64& rng)
{
  const auto [k, b] = detail::pick_block(out, rng, [](Configuration c) { return c.low == 2; });
  const auto bad = detail::with_system(out, k, detail::mutate_point(out.systems.systems()[k], b, rng));
  const auto cert = config22_census(bad);
  Trial t;
  t.detected = !cert.passed();
  if (const auto* f = cert.first_failure()) {
    t.detail = f->name;
    const auto q = detail::quad_from(f->counterexample.at("quadruple"));
    const bool predicted = detail::conf22_predicted(q, n);
    const auto seen = detail::count_in(bad.systems, q);
    t.counterexampleValid = configuration_of(q, out.partition).low == 2 &&
                            predicted == f->counterexample.at("predicted").get<bool>() &&
                            (predicted ? seen != 1 : seen >= 1);
  }
  return t;
}

}  // namespace testing_support

#endif  // PDQ_TESTS_SUPPORT_TESTING_HPP
