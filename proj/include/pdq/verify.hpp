#ifndef PDQ_VERIFY_HPP
#define PDQ_VERIFY_HPP

// Exhaustive checks for systems, collections, one-factorizations and Latin
// grids. Every failed property carries the smallest counterexample found.
//
// Triples and quadruples are addressed by their colex rank
// (C(a,1)+C(b,2)+C(c,3)[+C(d,4)] for a<b<c<d); coverage counters are one
// byte each and saturate.

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pdq/core.hpp"
#include "pdq/format.hpp"
#include "pdq/latin.hpp"

namespace pdq {

using Json = nlohmann::ordered_json;

inline std::string sha256_hex(std::string_view bytes)
{
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream out;
  for (unsigned int k = 0; k < len; ++k) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
  return out.str();
}

struct PropertyResult {
  std::string name;
  bool pass = true;
  std::string message;
  Json counterexample;  ///< null on PASS
};

class Certificate {
 public:
  Certificate(std::string subject, std::size_t order) : subject_(std::move(subject)), order_(order) {}

  const std::string& subject() const noexcept { return subject_; }
  std::size_t order() const noexcept { return order_; }
  const std::vector<PropertyResult>& results() const noexcept { return results_; }
  const std::vector<std::pair<std::string, std::uint64_t>>& counts() const noexcept { return counts_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  const std::string& digest() const noexcept { return digest_; }

  bool passed() const
  {
    return std::all_of(results_.begin(), results_.end(), [](const auto& r) { return r.pass; });
  }
  const PropertyResult* find(std::string_view name) const
  {
    for (const auto& r : results_)
      if (r.name == name) return &r;
    return nullptr;
  }
  /// First failing property, if any.
  const PropertyResult* first_failure() const
  {
    for (const auto& r : results_)
      if (!r.pass) return &r;
    return nullptr;
  }

  void count(std::string name, std::uint64_t value) { counts_.emplace_back(std::move(name), value); }
  void pass(std::string name) { results_.push_back({std::move(name), true, {}, nullptr}); }
  void fail(std::string name, std::string message, Json counterexample)
  {
    results_.push_back({std::move(name), false, std::move(message), std::move(counterexample)});
  }
  void record(PropertyResult r) { results_.push_back(std::move(r)); }
  void note(std::string text) { notes_.push_back(std::move(text)); }
  void set_content(std::string_view canonicalText) { digest_ = sha256_hex(canonicalText); }
  void set_digest(std::string hex) { digest_ = std::move(hex); }

  /// Fixed key order: format, subject, order, verdict, counts, results, notes, digest.
  Json to_json() const
  {
    Json j;
    j["format"] = "pdq-certificate 1";
    j["subject"] = subject_;
    j["order"] = order_;
    j["verdict"] = passed() ? "PASS" : "FAIL";
    Json counts = Json::object();
    for (const auto& [k, v] : counts_) counts[k] = v;
    j["counts"] = counts;
    Json results = Json::array();
    for (const auto& r : results_) {
      Json e;
      e["property"] = r.name;
      e["result"] = r.pass ? "PASS" : "FAIL";
      if (!r.pass) {
        e["message"] = r.message;
        e["counterexample"] = r.counterexample;
      }
      results.push_back(std::move(e));
    }
    j["results"] = results;
    if (!notes_.empty()) j["notes"] = notes_;
    j["content_sha256"] = digest_;
    return j;
  }
  std::string to_text() const { return to_json().dump(2) + "\n"; }

 private:
  std::string subject_;
  std::size_t order_;
  std::vector<std::pair<std::string, std::uint64_t>> counts_;
  std::vector<PropertyResult> results_;
  std::vector<std::string> notes_;
  std::string digest_;
};

namespace detail {

inline void bump(std::vector<std::uint8_t>& counters, std::uint64_t rank)
{
  auto& c = counters[rank];
  if (c != std::numeric_limits<std::uint8_t>::max()) ++c;
}

inline Json triple_json(Point a, Point b, Point c) { return Json::array({a, b, c}); }

inline Json quad_json(const Quadruple& q) { return Json::array({q[0], q[1], q[2], q[3]}); }

}  // namespace detail

/// PASS iff every 3-subset of [0, order) lies in exactly one block.
inline Certificate verify_sqs(const QuadSystem& s)
{
  Certificate cert("sqs", s.order());
  const std::size_t v = s.order();
  const std::uint64_t triples = binomial(v, 3);
  cert.count("blocks", s.size());
  cert.count("triples", triples);

  if (triples % 4 != 0 || s.size() != triples / 4) {
    Json ce;
    ce["expected_blocks"] = triples % 4 == 0 ? Json(triples / 4) : Json(nullptr);
    ce["actual_blocks"] = s.size();
    cert.fail("block_count", triples % 4 == 0 ? "wrong number of blocks" : "order is not admissible for an SQS", ce);
  } else {
    cert.pass("block_count");
  }

  std::vector<std::uint8_t> counters(triples, 0);
  for (const auto& q : s.blocks())
    for (const auto& t : q.triples()) detail::bump(counters, rank_triple(t[0], t[1], t[2]));

  bool ok = true;
  // Colex order: c outermost, so the first hit has the smallest rank.
  for (Point c = 2; c < v && ok; ++c)
    for (Point b = 1; b < c && ok; ++b)
      for (Point a = 0; a < b && ok; ++a) {
        const auto k = counters[rank_triple(a, b, c)];
        if (k != 1) {
          Json ce;
          ce["triple"] = detail::triple_json(a, b, c);
          ce["count"] = k;
          cert.fail("triple_coverage", k == 0 ? "triple not covered" : "triple covered more than once", ce);
          ok = false;
        }
      }
  if (ok) cert.pass("triple_coverage");
  cert.set_content(system_to_text(s));
  return cert;
}

inline std::string collection_text(const PdqCollection& c)
{
  std::string text;
  for (const auto& s : c.systems()) text += system_to_text(s);
  return text;
}

/// Counting-bound precheck |systems| <= v-3, then a full duplicate scan
/// across systems.
inline Certificate verify_pairwise_disjoint(const PdqCollection& c)
{
  Certificate cert("pdq-disjointness", c.order());
  const std::size_t v = c.order();
  cert.count("systems", c.size());
  std::uint64_t total = 0;
  for (const auto& s : c.systems()) total += s.size();
  cert.count("blocks", total);

  if (v >= 4 && c.size() > v - 3) {
    Json ce;
    ce["systems"] = c.size();
    ce["bound"] = v - 3;
    cert.fail("system_count_bound",
              "|systems| > v-3: at most " + std::to_string(v - 3) + " pairwise disjoint SQS(" + std::to_string(v) +
                  ") exist",
              ce);
  } else {
    cert.pass("system_count_bound");
  }

  std::vector<std::int32_t> owner(binomial(v, 4), -1);
  std::optional<Json> found;
  std::uint64_t bestRank = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t k = 0; k < c.size(); ++k)
    for (const auto& q : c.systems()[k].blocks()) {
      const auto r = q.rank();
      auto& o = owner[r];
      if (o < 0) {
        o = static_cast<std::int32_t>(k);
      } else if (static_cast<std::size_t>(o) != k && r < bestRank) {
        bestRank = r;
        Json ce;
        ce["system_a"] = o;
        ce["system_b"] = k;
        ce["quadruple"] = detail::quad_json(q);
        found = ce;
      }
    }
  if (found) cert.fail("pairwise_disjoint", "a quadruple occurs in two systems", *found);
  else cert.pass("pairwise_disjoint");
  cert.set_content(collection_text(c));
  return cert;
}

/// Each system an SQS plus pairwise disjointness and the counting bound.
inline Certificate verify_pdq(const PdqCollection& c)
{
  Certificate cert = verify_pairwise_disjoint(c);
  Certificate out("pdq", c.order());
  for (const auto& [k, v] : cert.counts()) out.count(k, v);
  bool allSqs = true;
  for (std::size_t k = 0; k < c.size() && allSqs; ++k) {
    const auto sc = verify_sqs(c.systems()[k]);
    if (!sc.passed()) {
      const auto* f = sc.first_failure();
      Json ce;
      ce["system"] = k;
      ce["property"] = f->name;
      ce["detail"] = f->counterexample;
      out.fail("each_sqs", "system " + std::to_string(k) + ": " + f->message, ce);
      allSqs = false;
    }
  }
  if (allSqs) out.pass("each_sqs");
  for (const auto& r : cert.results()) out.record(r);
  out.set_digest(cert.digest());
  return out;
}

inline Certificate verify_one_factorization(const OneFactorization& f)
{
  Certificate cert("onefact", f.vertex_count());
  const std::size_t v = f.vertex_count();
  cert.count("factors", f.size());

  if (v % 2 != 0 || f.size() != v - 1) {
    Json ce;
    ce["expected_factors"] = v > 0 ? v - 1 : 0;
    ce["actual_factors"] = f.size();
    cert.fail("factor_count", v % 2 != 0 ? "odd vertex count" : "wrong number of factors", ce);
  } else {
    cert.pass("factor_count");
  }

  std::optional<Json> bad;
  std::vector<int> seen(v);
  for (std::size_t k = 0; k < f.size() && !bad; ++k) {
    std::fill(seen.begin(), seen.end(), 0);
    for (const auto& e : f[k].edges()) {
      ++seen[e.lo()];
      ++seen[e.hi()];
    }
    for (std::size_t x = 0; x < v; ++x)
      if (seen[x] != 1) {
        Json ce;
        ce["factor"] = k;
        ce["vertex"] = x;
        ce["occurrences"] = seen[x];
        bad = ce;
        break;
      }
  }
  if (bad) cert.fail("perfect_matchings", "a factor is not a perfect matching", *bad);
  else cert.pass("perfect_matchings");

  std::vector<std::uint8_t> counters(binomial(v, 2), 0);
  for (const auto& factor : f.factors())
    for (const auto& e : factor.edges()) detail::bump(counters, rank_pair(e));
  bool ok = true;
  for (Point b = 1; b < v && ok; ++b)
    for (Point a = 0; a < b && ok; ++a) {
      const auto k = counters[rank_pair(PairEdge(a, b))];
      if (k != 1) {
        Json ce;
        ce["pair"] = Json::array({a, b});
        ce["count"] = k;
        cert.fail("edge_tiling", k == 0 ? "pair not covered" : "pair covered more than once", ce);
        ok = false;
      }
    }
  if (ok) cert.pass("edge_tiling");
  cert.set_content(factorization_to_text(f));
  return cert;
}

/// Rows permutations, columns repetition-free; optionally no 2x2 subsquare.
inline Certificate verify_latin(const LatinGrid& g, bool checkIntercalates = false)
{
  Certificate cert(g.is_square() ? "latin-square" : "latin-rectangle", g.cols());
  cert.count("rows", g.rows());
  cert.count("cols", g.cols());
  auto cell = [](std::size_t r, std::size_t c, std::uint32_t s) {
    Json ce;
    ce["row"] = r;
    ce["col"] = c;
    ce["symbol"] = s;
    return ce;
  };

  if (g.symbol_count() != g.cols() || g.rows() > g.cols()) {
    Json ce;
    ce["rows"] = g.rows();
    ce["cols"] = g.cols();
    ce["symbols"] = g.symbol_count();
    cert.fail("shape", "grid shape cannot be Latin", ce);
  } else {
    cert.pass("shape");
  }

  std::vector<std::int64_t> where(g.symbol_count());
  std::optional<Json> rowBad;
  for (std::size_t r = 0; r < g.rows() && !rowBad; ++r) {
    std::fill(where.begin(), where.end(), -1);
    for (std::size_t c = 0; c < g.cols(); ++c) {
      const auto s = g(r, c);
      if (where[s] >= 0) {
        rowBad = cell(r, c, s);
        (*rowBad)["repeats_col"] = where[s];
        break;
      }
      where[s] = static_cast<std::int64_t>(c);
    }
  }
  if (rowBad) cert.fail("rows", "symbol repeated in a row", *rowBad);
  else cert.pass("rows");

  std::optional<Json> colBad;
  for (std::size_t c = 0; c < g.cols() && !colBad; ++c) {
    std::fill(where.begin(), where.end(), -1);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      const auto s = g(r, c);
      if (where[s] >= 0) {
        colBad = cell(r, c, s);
        (*colBad)["repeats_row"] = where[s];
        break;
      }
      where[s] = static_cast<std::int64_t>(r);
    }
  }
  if (colBad) cert.fail("columns", "symbol repeated in a column", *colBad);
  else cert.pass("columns");

  if (checkIntercalates) {
    if (!g.is_latin_square()) {
      Json ce;
      ce["rows"] = g.rows();
      ce["cols"] = g.cols();
      cert.fail("intercalate_free", "intercalate scan needs a Latin square", ce);
    } else if (auto ic = find_intercalate(g)) {
      Json ce;
      ce["rows"] = Json::array({ic->row1, ic->row2});
      ce["cols"] = Json::array({ic->col1, ic->col2});
      cert.fail("intercalate_free", "2x2 subsquare found", ce);
    } else {
      cert.pass("intercalate_free");
    }
  }
  cert.set_content(grid_to_csv(g));
  return cert;
}

/// Configuration (3,1) and (1,3) census across doubled systems: every such
/// 4-subset of the point set appears in exactly one system.
inline Certificate verify_lemma_conf13(const PdqCollection& c, const HalfPartition& p)
{
  Certificate cert("census-conf31", c.order());
  if (p.order() != c.order()) throw std::invalid_argument("partition order differs from collection order");
  const std::size_t v = c.order();
  const auto m = static_cast<Point>(p.half());
  std::vector<std::uint8_t> counters(binomial(v, 4), 0);
  for (const auto& s : c.systems())
    for (const auto& q : s.blocks()) {
      const auto conf = configuration_of(q, p);
      if (conf.low == 3 || conf.low == 1) detail::bump(counters, q.rank());
    }

  std::uint64_t enumerated = 0;
  std::uint64_t bestRank = std::numeric_limits<std::uint64_t>::max();
  std::optional<Quadruple> worst;
  std::uint8_t worstCount = 0;
  // Singleton in one half, a 3-subset of the other.
  for (int side = 0; side < 2; ++side) {
    const Point single0 = side == 0 ? 0 : m;
    const Point triple0 = side == 0 ? m : 0;
    for (Point s = single0; s < single0 + m; ++s)
      for (Point a = triple0; a < triple0 + m; ++a)
        for (Point b = a + 1; b < triple0 + m; ++b)
          for (Point d = b + 1; d < triple0 + m; ++d) {
            ++enumerated;
            const Quadruple q(s, a, b, d);
            const auto r = q.rank();
            if (counters[r] != 1 && r < bestRank) {
              bestRank = r;
              worst = q;
              worstCount = counters[r];
            }
          }
  }
  cert.count("enumerated", enumerated);
  if (worst) {
    Json ce;
    ce["quadruple"] = detail::quad_json(*worst);
    ce["count"] = worstCount;
    cert.fail("conf31_exactly_once", worstCount == 0 ? "quadruple missing" : "quadruple repeated", ce);
  } else {
    cert.pass("conf31_exactly_once");
  }
  cert.set_content(collection_text(c));
  return cert;
}

}  // namespace pdq

#endif  // PDQ_VERIFY_HPP
