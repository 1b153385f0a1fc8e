#ifndef PDQ_CONSTRUCTIONS_HPP
#define PDQ_CONSTRUCTIONS_HPP

// The two doubling constructions and the pipeline that combines them into
// 2n + k pairwise disjoint SQS(4n).
//
// Doubled points (x, eps) in Z_v x Z_2 are flattened to x + eps*v, so the
// low half is [0, v) and the high half is [v, 2v).

#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdq/core.hpp"
#include "pdq/latin.hpp"
#include "pdq/onefact.hpp"
#include "pdq/verify.hpp"

namespace pdq {

/// Thrown when an input or output fails a mandatory certification step.
class CertificationError : public std::runtime_error {
 public:
  explicit CertificationError(const Certificate& cert, const std::string& context)
      : std::runtime_error(describe(cert, context)), cert_(cert)
  {
  }
  const Certificate& certificate() const noexcept { return cert_; }

 private:
  static std::string describe(const Certificate& cert, const std::string& context)
  {
    std::string msg = context + ": certification failed";
    if (const auto* f = cert.first_failure())
      msg += " [" + f->name + "] " + f->message + " " + f->counterexample.dump();
    return msg;
  }
  Certificate cert_;
};

struct DlsOutput {
  PdqCollection systems;
  HalfPartition partition;
  LatinGrid latin;
};

/// All quadruples {x1,x2} u {y1,y2} for x-edges on the low half and
/// y-edges on the high half (y shifted by `offset`).
inline std::vector<Quadruple> direct_product(const OneFactor& left, const OneFactor& right, std::size_t offset)
{
  std::vector<Quadruple> out;
  out.reserve(left.edges().size() * right.edges().size());
  const auto off = static_cast<Point>(offset);
  for (const auto& x : left.edges())
    for (const auto& y : right.edges()) out.emplace_back(x.lo(), x.hi(), y.lo() + off, y.hi() + off);
  return out;
}

/// v systems B_0..B_{v-1} of order 2v from an SQS(v) and an intercalate-free
/// v x v Latin square. B_i uses alpha_i = row i of the square:
///   - each base block yields 8 blocks: three points stay in one half and
///     the fourth crosses, by alpha_i going up and by alpha_i^-1 going down;
///   - each pair {x1,x2} yields {x1, x2, alpha_i(x1)+v, alpha_i(x2)+v}.
/// Moving down by alpha_i itself would only cover every (1,2) triple once
/// when alpha_i is an involution.
inline DlsOutput dls_construct(const QuadSystem& base, const LatinGrid& m)
{
  const std::size_t v = base.order();
  if (auto cert = verify_sqs(base); !cert.passed()) throw CertificationError(cert, "DLS base system");
  if (m.rows() != v || m.cols() != v || m.symbol_count() != v)
    throw std::invalid_argument("DLS Latin square must be " + std::to_string(v) + " x " + std::to_string(v));
  if (!m.is_latin_square()) throw std::invalid_argument("DLS square is not Latin");
  if (auto ic = find_intercalate(m))
    throw std::invalid_argument("DLS square has a 2x2 subsquare at rows " + std::to_string(ic->row1) + "," +
                                std::to_string(ic->row2) + " cols " + std::to_string(ic->col1) + "," +
                                std::to_string(ic->col2));

  const auto uv = static_cast<Point>(v);
  std::vector<QuadSystem> systems;
  systems.reserve(v);
  for (std::size_t i = 0; i < v; ++i) {
    const auto alpha = m.row(i);
    std::vector<Point> inverse(v);
    for (std::size_t x = 0; x < v; ++x) inverse[alpha[x]] = static_cast<Point>(x);
    std::vector<Quadruple> blocks;
    blocks.reserve(8 * base.size() + binomial(v, 2));
    for (const auto& q : base.blocks()) {
      for (int moved = 0; moved < 4; ++moved)
        for (Point eps = 0; eps < 2; ++eps) {
          std::array<Point, 4> pts{};
          for (int t = 0; t < 4; ++t)
            pts[t] = t != moved ? q[t] + eps * uv : eps == 0 ? alpha[q[t]] + uv : inverse[q[t]];
          blocks.emplace_back(pts);
        }
    }
    for (Point x1 = 0; x1 < uv; ++x1)
      for (Point x2 = x1 + 1; x2 < uv; ++x2) blocks.emplace_back(x1, x2, alpha[x1] + uv, alpha[x2] + uv);
    systems.emplace_back(2 * v, std::move(blocks));
  }
  return DlsOutput{PdqCollection(2 * v, std::move(systems)), HalfPartition(2 * v), m};
}

/// k systems of order 2v. System t holds both copies of bases[t] (one per
/// half) and the direct products f_i x fprime_{perms(t,i)} for every i.
inline PdqCollection db_construct(const std::vector<QuadSystem>& bases, const OneFactorization& f,
                                  const OneFactorization& fprime, const LatinGrid& perms)
{
  const std::size_t v = f.vertex_count();
  if (fprime.vertex_count() != v) throw std::invalid_argument("DB factorizations live on different vertex sets");
  if (auto c = verify_one_factorization(f); !c.passed()) throw CertificationError(c, "DB factorization F");
  if (auto c = verify_one_factorization(fprime); !c.passed()) throw CertificationError(c, "DB factorization F'");
  if (perms.rows() != bases.size() || perms.cols() != v - 1 || !perms.is_latin_rectangle())
    throw std::invalid_argument("DB permutations must be the rows of a " + std::to_string(bases.size()) + " x " +
                                std::to_string(v - 1) + " Latin rectangle");
  for (std::size_t t = 0; t < bases.size(); ++t) {
    if (bases[t].order() != v) throw std::invalid_argument("DB base system has the wrong order");
    if (auto c = verify_sqs(bases[t]); !c.passed()) throw CertificationError(c, "DB base " + std::to_string(t));
  }
  if (bases.size() > 1) {
    // Only disjointness matters here; the counting bound is implied.
    auto c = verify_pairwise_disjoint(PdqCollection(v, bases));
    if (const auto* d = c.find("pairwise_disjoint"); d && !d->pass) throw CertificationError(c, "DB base systems");
  }

  const auto uv = static_cast<Point>(v);
  PdqCollection out(2 * v, {});
  for (std::size_t t = 0; t < bases.size(); ++t) {
    std::vector<Quadruple> blocks;
    blocks.reserve(2 * bases[t].size() + (v - 1) * (v / 2) * (v / 2));
    for (const auto& q : bases[t].blocks()) {
      blocks.push_back(q);
      blocks.emplace_back(q[0] + uv, q[1] + uv, q[2] + uv, q[3] + uv);
    }
    for (std::size_t i = 0; i + 1 < v; ++i) {
      auto prod = direct_product(f[i], fprime[perms(t, i)], v);
      blocks.insert(blocks.end(), prod.begin(), prod.end());
    }
    out.append(QuadSystem(2 * v, std::move(blocks)));
  }
  return out;
}

namespace detail {

inline void require_construction_order(int n)
{
  if (n < 7 || (n % 6 != 1 && n % 6 != 5))
    throw std::domain_error("the recursive construction needs n >= 7 with n = 1 or 5 (mod 6)");
}

inline int dls_order_n(const DlsOutput& out)
{
  const auto v = out.latin.rows();
  if (v % 2 != 0 || out.systems.order() != 2 * v) throw std::invalid_argument("not a DLS output built from M_n");
  return static_cast<int>(v / 2);
}

/// Pairs of Z_2n that occur as the low (resp. high) half of a (2,2) block
/// of the DLS systems, as (low pair, high pair).
template <typename F>
void for_each_predicted_conf22(int n, F&& visit)
{
  const int h = (n - 1) / 2;
  for (int i = 1; i <= h; ++i) {
    auto ab = pair_family(n, 'A', i).edges;
    const auto b = pair_family(n, 'B', i).edges;
    ab.insert(ab.end(), b.begin(), b.end());
    for (const auto& x : ab)
      for (const auto& y : ab) visit(x, y);
  }
  for (int i = 0; i < n; ++i) {
    const auto c = pair_family(n, 'C', i).edges;
    const auto d0 = pair_family(n, 'D', static_cast<int>(mod(i - 1, n))).edges;
    const auto d1 = pair_family(n, 'D', i).edges;
    for (const auto& x : c) {
      for (const auto& y : d0) visit(x, y);
      for (const auto& y : d1) visit(x, y);
    }
  }
}

}  // namespace detail

/// Exhaustive census of the configuration (2,2) blocks of a DLS output built
/// from M_n: they must be exactly {v,x} u {y,z}+2n with both pairs in
/// A_i u B_i for one i, or {v,x} in C_i and {y,z} in D_{i-1} u D_i, each
/// exactly once across all systems.
inline Certificate config22_census(const DlsOutput& out)
{
  const int n = detail::dls_order_n(out);
  const std::size_t v = out.systems.order();
  const std::size_t half = v / 2;
  Certificate cert("census-conf22", v);

  std::vector<std::uint8_t> counters(binomial(v, 4), 0);
  std::uint64_t total = 0;
  for (const auto& s : out.systems.systems())
    for (const auto& q : s.blocks())
      if (configuration_of(q, out.partition).low == 2) {
        detail::bump(counters, q.rank());
        ++total;
      }
  cert.count("conf22_blocks", total);

  std::vector<char> predicted(counters.size(), 0);
  std::uint64_t predictedCount = 0;
  std::optional<Quadruple> worst;
  std::uint64_t worstRank = std::numeric_limits<std::uint64_t>::max();
  std::string why;
  detail::for_each_predicted_conf22(n, [&](const PairEdge& x, const PairEdge& y) {
    const Quadruple q(x.lo(), x.hi(), static_cast<Point>(y.lo() + half), static_cast<Point>(y.hi() + half));
    const auto r = q.rank();
    if (!predicted[r]) {
      predicted[r] = 1;
      ++predictedCount;
    }
  });
  cert.count("predicted_classes", predictedCount);
  for (const auto& s : out.systems.systems())
    for (const auto& q : s.blocks()) {
      if (configuration_of(q, out.partition).low != 2) continue;
      const auto r = q.rank();
      if ((!predicted[r] || counters[r] != 1) && r < worstRank) {
        worstRank = r;
        worst = q;
        why = !predicted[r] ? "block outside the predicted classes" : "predicted block repeated";
      }
    }
  // Missing predicted blocks.
  detail::for_each_predicted_conf22(n, [&](const PairEdge& x, const PairEdge& y) {
    const Quadruple q(x.lo(), x.hi(), static_cast<Point>(y.lo() + half), static_cast<Point>(y.hi() + half));
    const auto r = q.rank();
    if (counters[r] == 0 && r < worstRank) {
      worstRank = r;
      worst = q;
      why = "predicted block missing";
    }
  });
  if (worst) {
    Json ce;
    ce["quadruple"] = detail::quad_json(*worst);
    ce["count"] = counters[worstRank];
    ce["predicted"] = static_cast<bool>(predicted[worstRank]);
    cert.fail("conf22_classes_exactly_once", why, ce);
  } else {
    cert.pass("conf22_classes_exactly_once");
  }
  cert.set_content(collection_text(out.systems));
  return cert;
}

inline Certificate verify_lemma_conf13(const DlsOutput& out) { return verify_lemma_conf13(out.systems, out.partition); }

namespace detail {

/// pair rank -> index of the factor holding it.
inline std::vector<std::int32_t> factor_lookup(const RTFactorization& f)
{
  const std::size_t v = 2 * static_cast<std::size_t>(f.n());
  std::vector<std::int32_t> where(binomial(v, 2), -1);
  for (std::size_t k = 0; k < f.factors().size(); ++k)
    for (const auto& e : f.factors()[k].edges()) where[rank_pair(e)] = static_cast<std::int32_t>(k);
  return where;
}

}  // namespace detail

/// (column factor, entry factor) pairs, as indices into r and t, whose
/// direct product contains at least one (2,2) block of the DLS systems.
inline std::set<std::pair<std::size_t, std::size_t>> dls_touched_products(const DlsOutput& out, const RTFactorization& r,
                                                                          const RTFactorization& t)
{
  const std::size_t half = out.systems.order() / 2;
  const auto rWhere = detail::factor_lookup(r);
  const auto tWhere = detail::factor_lookup(t);
  std::set<std::pair<std::size_t, std::size_t>> touched;
  for (const auto& s : out.systems.systems())
    for (const auto& q : s.blocks()) {
      if (configuration_of(q, out.partition).low != 2) continue;
      const auto rf = rWhere[rank_pair(PairEdge(q[0], q[1]))];
      const auto tf = tWhere[rank_pair(PairEdge(static_cast<Point>(q[2] - half), static_cast<Point>(q[3] - half)))];
      if (rf < 0 || tf < 0) throw std::logic_error("factorization does not cover a pair");
      touched.emplace(static_cast<std::size_t>(rf), static_cast<std::size_t>(tf));
    }
  return touched;
}

/// Every configuration (2,2) block of the DLS systems lies in the direct
/// product of a column factor of H and the entry of one of H's first six
/// rows in that column.
inline Certificate verify_first_rows_cover(const DlsOutput& out, const RTFactorization& r, const RTFactorization& t,
                                           const LabelSquare& h, std::size_t coverRows = 6)
{
  const std::size_t v = out.systems.order();
  const std::size_t half = v / 2;
  Certificate cert("h-cover", v);
  const auto rWhere = detail::factor_lookup(r);
  const auto tWhere = detail::factor_lookup(t);
  const auto grid = h.to_index_grid(t.labels());
  std::vector<std::size_t> colOf(h.cols());
  for (std::size_t c = 0; c < h.cols(); ++c) colOf[c] = r.index_of(h.column_labels()[c]);
  // allowed[rFactor][tFactor]
  std::vector<std::vector<char>> allowed(r.factors().size(), std::vector<char>(t.factors().size(), 0));
  for (std::size_t row = 0; row < std::min(coverRows, grid.rows()); ++row)
    for (std::size_t c = 0; c < grid.cols(); ++c) allowed[colOf[c]][grid(row, c)] = 1;

  std::uint64_t checked = 0;
  for (std::size_t k = 0; k < out.systems.size(); ++k)
    for (const auto& q : out.systems.systems()[k].blocks()) {
      if (configuration_of(q, out.partition).low != 2) continue;
      ++checked;
      const PairEdge low(q[0], q[1]);
      const PairEdge high(static_cast<Point>(q[2] - half), static_cast<Point>(q[3] - half));
      const auto rf = rWhere[rank_pair(low)];
      const auto tf = tWhere[rank_pair(high)];
      if (rf < 0 || tf < 0 || !allowed[rf][tf]) {
        Json ce;
        ce["system"] = k;
        ce["quadruple"] = detail::quad_json(q);
        ce["column_factor"] = rf < 0 ? "none" : r.labels()[rf].to_string();
        ce["entry_factor"] = tf < 0 ? "none" : t.labels()[tf].to_string();
        cert.count("conf22_checked", checked);
        cert.fail("first_rows_cover_dls", "DLS block outside the direct products of the first rows", ce);
        return cert;
      }
    }
  cert.count("conf22_checked", checked);
  cert.pass("first_rows_cover_dls");
  return cert;
}

struct PipelineResult {
  PdqCollection systems;
  std::size_t dlsCount = 0;
  std::size_t dbCount = 0;
  Certificate certificate{"pdq-construction", 0};
};

/// Index grid of rows [first, first+k) of H in (R-column, T-entry) factor
/// coordinates.
inline LatinGrid h_rows_as_permutations(const LabelSquare& h, const RTFactorization& r, const RTFactorization& t,
                                        std::size_t first, std::size_t k)
{
  if (first + k > h.rows()) throw std::out_of_range("not enough rows in H");
  const std::size_t size = h.cols();
  std::vector<std::uint32_t> cells(k * size);
  for (std::size_t row = 0; row < k; ++row)
    for (std::size_t c = 0; c < size; ++c) {
      const auto col = r.index_of(h.column_labels()[c]);
      cells[row * size + col] = static_cast<std::uint32_t>(t.index_of(h.at(first + row, c)));
    }
  return LatinGrid(k, size, size, std::move(cells));
}

/// Builds and certifies 2n + k pairwise disjoint SQS(4n):
///   - DLS on `base2n` with M_n gives 2n systems;
///   - DB on the first k `extras` with R (low half), T (high half) and rows
///     7..6+k of H_{2n-1} gives k more.
/// `requestedK` defaults to extras.size(); asking for more than 2n-7 is an
/// error, asking for more than supplied degrades with a note.
inline PipelineResult theorem1_pipeline(int n, const QuadSystem& base2n, const std::vector<QuadSystem>& extras,
                                        std::optional<std::size_t> requestedK = std::nullopt)
{
  detail::require_construction_order(n);
  const std::size_t v = 2 * static_cast<std::size_t>(n);
  const std::size_t cap = v - 7;
  if (base2n.order() != v) throw std::invalid_argument("base system must have order 2n = " + std::to_string(v));
  std::size_t k = requestedK.value_or(extras.size());
  if (k > cap)
    throw std::invalid_argument("k exceeds 2n-7: requested " + std::to_string(k) + " DB systems but at most " +
                                std::to_string(cap) + " are available for n = " + std::to_string(n));
  std::vector<std::string> notes;
  if (k > extras.size()) {
    notes.push_back("requested k = " + std::to_string(k) + " but only " + std::to_string(extras.size()) +
                    " disjoint SQS(" + std::to_string(v) + ") supplied; using k = " + std::to_string(extras.size()));
    k = extras.size();
  }

  auto dls = dls_construct(base2n, build_M(n));
  const auto rFact = build_R(n);
  const auto tFact = build_T(n);
  const auto hSquare = build_H(n);

  Certificate master("pdq-construction", 2 * v);
  auto absorb = [&](const Certificate& c, const std::string& prefix) {
    for (const auto& r : c.results()) {
      auto copy = r;
      copy.name = prefix + "." + r.name;
      master.record(copy);
    }
  };
  const auto rCert = verify_one_factorization(rFact.as_one_factorization());
  const auto tCert = verify_one_factorization(tFact.as_one_factorization());
  if (!rCert.passed()) throw CertificationError(rCert, "R factorization");
  if (!tCert.passed()) throw CertificationError(tCert, "T factorization");
  absorb(rCert, "R");
  absorb(tCert, "T");
  if (!hSquare.is_latin_over(tFact.labels())) throw std::logic_error("H is not a Latin square over the T labels");
  master.pass("H.latin_square");
  const auto cover = verify_first_rows_cover(dls, rFact, tFact, hSquare);
  if (!cover.passed()) throw CertificationError(cover, "H first six rows");
  absorb(cover, "H");

  std::vector<QuadSystem> bases(extras.begin(), extras.begin() + static_cast<std::ptrdiff_t>(k));
  auto all = dls.systems;
  if (k > 0) {
    const auto perms = h_rows_as_permutations(hSquare, rFact, tFact, 6, k);
    auto db = db_construct(bases, rFact.as_one_factorization(), tFact.as_one_factorization(), perms);
    for (const auto& s : db.systems()) all.append(s);
  }

  const auto cert = verify_pdq(all);
  if (!cert.passed()) throw CertificationError(cert, "construction output");
  absorb(cert, "output");

  master.count("n", static_cast<std::uint64_t>(n));
  master.count("dls_systems", v);
  master.count("db_systems", k);
  master.count("systems", all.size());
  master.count("blocks_per_system", binomial(2 * v, 3) / 4);
  master.count("total_blocks", all.size() * (binomial(2 * v, 3) / 4));
  master.note("D(" + std::to_string(2 * v) + ") >= " + std::to_string(all.size()) + " (= " + std::to_string(v) + " + " +
              std::to_string(k) + ")");
  for (auto& note : notes) master.note(std::move(note));
  master.set_digest(cert.digest());

  PipelineResult result;
  result.systems = std::move(all);
  result.dlsCount = v;
  result.dbCount = k;
  result.certificate = std::move(master);
  return result;
}

}  // namespace pdq

#endif  // PDQ_CONSTRUCTIONS_HPP
