#ifndef PDQ_LATIN_HPP
#define PDQ_LATIN_HPP

// Structured Latin squares used by the doubling constructions: the
// intercalate-free square M_n = [B C; D B], Latin rectangle completion, and
// the label squares that pair the R-side and T-side one-factorizations.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdq/core.hpp"

namespace pdq {

namespace detail {

inline void require_odd_order(int n, int minimum = 5)
{
  if (n < minimum || n % 2 == 0)
    throw std::domain_error("order n=" + std::to_string(n) + " must be odd and at least " + std::to_string(minimum));
}

inline std::uint32_t mod(long long a, long long n) { return static_cast<std::uint32_t>(((a % n) + n) % n); }

template <typename F>
LatinGrid tabulate(int size, int symbols, F&& f)
{
  std::vector<std::uint32_t> cells(static_cast<std::size_t>(size) * size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) cells[static_cast<std::size_t>(i) * size + j] = f(i, j);
  return LatinGrid(size, size, symbols, std::move(cells));
}

}  // namespace detail

// The four n x n blocks, 0-indexed: A(i,j) = i+j, B(i,j) = i-j (mod n);
// C and D live on {n..2n-1}.

inline LatinGrid build_A(int n)
{
  detail::require_odd_order(n);
  return detail::tabulate(n, n, [n](int i, int j) { return detail::mod(i + j, n); });
}

inline LatinGrid build_B(int n)
{
  detail::require_odd_order(n);
  return detail::tabulate(n, n, [n](int i, int j) { return detail::mod(i - j, n); });
}

inline LatinGrid build_C(int n)
{
  detail::require_odd_order(n);
  return detail::tabulate(n, 2 * n, [n](int i, int j) { return detail::mod(i + j, n) + n; });
}

inline LatinGrid build_D(int n)
{
  detail::require_odd_order(n);
  return detail::tabulate(n, 2 * n, [n](int i, int j) { return detail::mod(i + j - 1, n) + n; });
}

/// The 2n x 2n square [B C; D B] over {0..2n-1}. It has no intercalates.
inline LatinGrid build_M(int n)
{
  detail::require_odd_order(n);
  const auto b = build_B(n);
  const auto c = build_C(n);
  const auto d = build_D(n);
  return detail::tabulate(2 * n, 2 * n, [&](int i, int j) {
    const bool top = i < n;
    const bool left = j < n;
    const int r = i % n;
    const int s = j % n;
    if (top) return left ? b(r, s) : c(r, s);
    return left ? d(r, s) : b(r, s);
  });
}

struct Intercalate {
  std::size_t row1, row2, col1, col2;
};

/// First 2x2 subsquare in row-pair, column-pair order.
inline std::optional<Intercalate> find_intercalate(const LatinGrid& g)
{
  if (!g.is_latin_square()) throw std::invalid_argument("intercalate scan needs a Latin square");
  const std::size_t v = g.rows();
  for (std::size_t r1 = 0; r1 < v; ++r1)
    for (std::size_t r2 = r1 + 1; r2 < v; ++r2)
      for (std::size_t c1 = 0; c1 < v; ++c1)
        for (std::size_t c2 = c1 + 1; c2 < v; ++c2)
          if (g(r1, c1) == g(r2, c2) && g(r1, c2) == g(r2, c1)) return Intercalate{r1, r2, c1, c2};
  return std::nullopt;
}

inline bool has_intercalate(const LatinGrid& g) { return find_intercalate(g).has_value(); }

/// alpha_i : j -> g(i, j).
inline std::vector<Point> row_permutation(const LatinGrid& g, std::size_t i)
{
  if (!g.is_latin_square()) throw std::invalid_argument("row permutation needs a Latin square");
  auto row = g.row(i);
  return {row.begin(), row.end()};
}

/// Extends a k x v Latin rectangle to a v x v Latin square, one row at a
/// time, each row a perfect matching of columns to their missing symbols.
/// Augmenting paths try columns in order and symbols lowest first.
inline LatinGrid complete_rectangle(const LatinGrid& r)
{
  if (!r.is_latin_rectangle()) throw std::invalid_argument("complete_rectangle: input is not a Latin rectangle");
  const std::size_t v = r.cols();
  std::vector<std::uint32_t> cells = r.cells();
  cells.reserve(v * v);
  std::vector<std::vector<char>> used(v, std::vector<char>(v, 0));  // [col][symbol]
  for (std::size_t row = 0; row < r.rows(); ++row)
    for (std::size_t c = 0; c < v; ++c) used[c][r(row, c)] = 1;

  std::vector<int> colOf(v);
  std::vector<int> symOf(v);
  std::vector<char> visited(v);
  auto augment = [&](auto&& self, std::size_t c) -> bool {
    for (std::size_t s = 0; s < v; ++s) {
      if (used[c][s] || visited[s]) continue;
      visited[s] = 1;
      if (colOf[s] < 0 || self(self, static_cast<std::size_t>(colOf[s]))) {
        colOf[s] = static_cast<int>(c);
        symOf[c] = static_cast<int>(s);
        return true;
      }
    }
    return false;
  };

  for (std::size_t row = r.rows(); row < v; ++row) {
    std::fill(colOf.begin(), colOf.end(), -1);
    std::fill(symOf.begin(), symOf.end(), -1);
    for (std::size_t c = 0; c < v; ++c) {
      std::fill(visited.begin(), visited.end(), 0);
      if (!augment(augment, c)) throw std::logic_error("complete_rectangle: no perfect matching (Hall violated)");
    }
    for (std::size_t c = 0; c < v; ++c) {
      cells.push_back(static_cast<std::uint32_t>(symOf[c]));
      used[c][static_cast<std::size_t>(symOf[c])] = 1;
    }
  }
  return LatinGrid(v, v, v, std::move(cells));
}

// ---------------------------------------------------------------------------
// One-factor labels and label squares.

struct FactorLabel {
  enum class Kind : std::uint8_t { R, T, C, D };
  Kind kind = Kind::R;
  int i = 0;
  int j = 0;  ///< sub index 1..3 for R/T factors; 0 for C/D and for R/T groups

  static FactorLabel r(int i, int j = 0) { return {Kind::R, i, j}; }
  static FactorLabel t(int i, int j = 0) { return {Kind::T, i, j}; }
  static FactorLabel c(int i) { return {Kind::C, i, 0}; }
  static FactorLabel d(int i) { return {Kind::D, i, 0}; }

  std::string to_string() const
  {
    static constexpr std::array<char, 4> letters{'R', 'T', 'C', 'D'};
    std::string s(1, letters[static_cast<int>(kind)]);
    s += std::to_string(i);
    if (j != 0) s += "." + std::to_string(j);
    return s;
  }

  /// Parses "R1.2", "T3.1", "C5", "D9" and group labels such as "T3".
  static FactorLabel parse(std::string_view text)
  {
    auto fail = [&] { return std::invalid_argument("bad factor label '" + std::string(text) + "'"); };
    if (text.size() < 2) throw fail();
    FactorLabel l;
    switch (text[0]) {
      case 'R': l.kind = Kind::R; break;
      case 'T': l.kind = Kind::T; break;
      case 'C': l.kind = Kind::C; break;
      case 'D': l.kind = Kind::D; break;
      default: throw fail();
    }
    auto body = text.substr(1);
    auto dot = body.find('.');
    auto to_int = [&](std::string_view s) {
      if (s.empty() || s.size() > 6) throw fail();
      int v = 0;
      for (char ch : s) {
        if (ch < '0' || ch > '9') throw fail();
        v = v * 10 + (ch - '0');
      }
      return v;
    };
    l.i = to_int(body.substr(0, dot));
    if (dot != std::string_view::npos) {
      if (l.kind == Kind::C || l.kind == Kind::D) throw fail();
      l.j = to_int(body.substr(dot + 1));
      if (l.j < 1 || l.j > 3) throw fail();
    }
    return l;
  }

  friend auto operator<=>(const FactorLabel&, const FactorLabel&) = default;
};

/// Labels of the R-side factorization in column order: R_{i,j} for
/// 1 <= i <= (n-1)/2, then C_c for (n-1)/2 <= c <= n-1. The same order
/// serves both residue classes; for n = 5 (mod 6) the tail groups
/// R_{i,.} with i > (n-1)/2 are these C factors.
inline std::vector<FactorLabel> r_side_labels(int n)
{
  std::vector<FactorLabel> out;
  const int h = (n - 1) / 2;
  for (int i = 1; i <= h; ++i)
    for (int j = 1; j <= 3; ++j) out.push_back(FactorLabel::r(i, j));
  for (int c = h; c <= n - 1; ++c) out.push_back(FactorLabel::c(c));
  return out;
}

inline std::vector<FactorLabel> t_side_labels(int n)
{
  std::vector<FactorLabel> out;
  const int h = (n - 1) / 2;
  for (int i = 1; i <= h; ++i)
    for (int j = 1; j <= 3; ++j) out.push_back(FactorLabel::t(i, j));
  for (int c = h; c <= n - 1; ++c) out.push_back(FactorLabel::d(c));
  return out;
}

/// Resolves R_{i,j} / T_{i,j} with i beyond (n-1)/2 to the C / D factor it
/// names (index 3i-n-3+j). Other labels are returned unchanged.
inline FactorLabel canonical_label(int n, FactorLabel l)
{
  const int h = (n - 1) / 2;
  if ((l.kind == FactorLabel::Kind::R || l.kind == FactorLabel::Kind::T) && l.j != 0 && l.i > h) {
    const int idx = 3 * l.i - n - 3 + l.j;
    return l.kind == FactorLabel::Kind::R ? FactorLabel::c(idx) : FactorLabel::d(idx);
  }
  return l;
}

/// A rows x cols array of labels with labeled columns.
class LabelSquare {
 public:
  LabelSquare() = default;
  LabelSquare(std::vector<FactorLabel> columnLabels, std::size_t rows, std::vector<FactorLabel> entries)
      : columns_(std::move(columnLabels)), rows_(rows), entries_(std::move(entries))
  {
    if (entries_.size() != rows_ * columns_.size())
      throw std::invalid_argument("label square entry count does not match its shape");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  const std::vector<FactorLabel>& column_labels() const noexcept { return columns_; }
  const std::vector<FactorLabel>& entries() const noexcept { return entries_; }
  const FactorLabel& at(std::size_t r, std::size_t c) const { return entries_.at(r * cols() + c); }
  /// Entry in row r (0-based) under the column carrying `column`.
  const FactorLabel& at(std::size_t r, const FactorLabel& column) const
  {
    for (std::size_t c = 0; c < cols(); ++c)
      if (columns_[c] == column) return at(r, c);
    throw std::out_of_range("no column labeled " + column.to_string());
  }

  /// Maps entries onto indices of `alphabet`; throws if a label is missing.
  LatinGrid to_index_grid(const std::vector<FactorLabel>& alphabet) const
  {
    std::map<FactorLabel, std::uint32_t> index;
    for (std::size_t k = 0; k < alphabet.size(); ++k) index.emplace(alphabet[k], static_cast<std::uint32_t>(k));
    std::vector<std::uint32_t> cells;
    cells.reserve(entries_.size());
    for (const auto& e : entries_) {
      auto it = index.find(e);
      if (it == index.end()) throw std::invalid_argument("label " + e.to_string() + " not in alphabet");
      cells.push_back(it->second);
    }
    return LatinGrid(rows_, cols(), alphabet.size(), std::move(cells));
  }

  /// Every row a permutation of `alphabet`, every column repetition-free.
  bool is_latin_over(const std::vector<FactorLabel>& alphabet) const
  {
    if (alphabet.size() != cols()) return false;
    try {
      return to_index_grid(alphabet).is_latin_rectangle();
    } catch (const std::invalid_argument&) {
      return false;
    }
  }

  LabelSquare first_rows(std::size_t k) const
  {
    if (k > rows_) throw std::out_of_range("first_rows beyond square");
    return LabelSquare(columns_, k, std::vector<FactorLabel>(entries_.begin(), entries_.begin() + k * cols()));
  }

  friend bool operator==(const LabelSquare&, const LabelSquare&) = default;

 private:
  std::vector<FactorLabel> columns_;
  std::size_t rows_ = 0;
  std::vector<FactorLabel> entries_;
};

inline LabelSquare label_square_from_grid(const LatinGrid& g, std::vector<FactorLabel> columns,
                                          const std::vector<FactorLabel>& alphabet)
{
  std::vector<FactorLabel> entries;
  entries.reserve(g.cells().size());
  for (auto s : g.cells()) entries.push_back(alphabet.at(s));
  return LabelSquare(std::move(columns), g.rows(), std::move(entries));
}

/// The nu x nu square, nu = (2n-1)/3, over groups T_1..T_nu with columns
/// R_1..R_nu. Row r (1-based) under R_i holds T_{((i-r) mod nu)+1}: row 1
/// is T_1..T_nu, row 2 starts with T_nu, later rows keep shifting.
inline LabelSquare build_label_square_M(int n)
{
  if (n < 11 || n % 6 != 5) throw std::domain_error("label square M needs n = 5 (mod 6), n >= 11");
  const int nu = (2 * n - 1) / 3;
  std::vector<FactorLabel> cols;
  for (int i = 1; i <= nu; ++i) cols.push_back(FactorLabel::r(i));
  std::vector<FactorLabel> entries;
  for (int r = 0; r < nu; ++r)
    for (int c = 0; c < nu; ++c) entries.push_back(FactorLabel::t(static_cast<int>(detail::mod(c - r, nu)) + 1));
  return LabelSquare(std::move(cols), nu, std::move(entries));
}

namespace detail {
/// 3x3 block substituted for an entry T_l: row k', column k -> T_{l, (k'+k) mod 3 + 1}.
inline int block_sub(int rowInBlock, int colInBlock) { return (rowInBlock + colInBlock) % 3 + 1; }
}  // namespace detail

/// Case n = 5 (mod 6): every cell T_l of M becomes the 3x3 block
/// T_{l,1} T_{l,2} T_{l,3} / T_{l,2} T_{l,3} T_{l,1} / T_{l,3} T_{l,1} T_{l,2}.
inline LabelSquare expand_M_to_H_case1(const LabelSquare& m, int n)
{
  if (n < 11 || n % 6 != 5) throw std::domain_error("case 1 expansion needs n = 5 (mod 6), n >= 11");
  const int nu = (2 * n - 1) / 3;
  if (m.rows() != static_cast<std::size_t>(nu) || m.cols() != static_cast<std::size_t>(nu))
    throw std::invalid_argument("label square M has the wrong size");
  std::vector<FactorLabel> groups;
  for (int i = 1; i <= nu; ++i) groups.push_back(FactorLabel::t(i));
  if (!m.is_latin_over(groups)) throw std::invalid_argument("label square M is not Latin over T_1..T_nu");
  for (int c = 0; c < nu; ++c)
    if (m.column_labels()[c] != FactorLabel::r(c + 1)) throw std::invalid_argument("label square M columns malformed");

  const int size = 2 * n - 1;
  std::vector<FactorLabel> cols;
  for (int c = 0; c < size; ++c) cols.push_back(canonical_label(n, FactorLabel::r(c / 3 + 1, c % 3 + 1)));
  std::vector<FactorLabel> entries;
  entries.reserve(static_cast<std::size_t>(size) * size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      const int group = m.at(r / 3, c / 3).i;
      entries.push_back(canonical_label(n, FactorLabel::t(group, detail::block_sub(r % 3, c % 3))));
    }
  return LabelSquare(std::move(cols), size, std::move(entries));
}

namespace detail {

// Rows 7..13 of the n = 7 array: seven direct-product rows for the DB step.
inline constexpr std::array<std::array<std::string_view, 13>, 7> kH13LastRows{{
    {"T3.1", "T3.2", "T3.3", "D3", "D4", "D5", "D6", "T1.2", "T1.3", "T2.3", "T2.2", "T2.1", "T1.1"},
    {"T3.2", "T3.3", "T3.1", "D4", "D5", "D3", "T1.2", "D6", "T1.1", "T2.2", "T1.3", "T2.3", "T2.1"},
    {"T3.3", "T3.1", "T3.2", "D5", "D3", "D4", "T1.3", "T1.1", "D6", "T2.1", "T2.3", "T1.2", "T2.2"},
    {"T2.1", "T2.2", "T2.3", "D6", "T3.2", "T3.3", "D3", "D4", "D5", "T1.1", "T1.2", "T1.3", "T3.1"},
    {"T2.2", "T2.3", "T2.1", "T3.2", "D6", "T3.1", "D4", "D5", "D3", "T1.2", "T1.1", "T3.3", "T1.3"},
    {"T2.3", "T2.1", "T2.2", "T3.3", "T3.1", "D6", "D5", "D3", "D4", "T1.3", "T3.2", "T1.1", "T1.2"},
    {"D3", "D4", "D5", "T3.1", "T3.3", "T3.2", "T1.1", "T1.3", "T1.2", "D6", "T2.1", "T2.2", "T2.3"},
}};

/// Rows 1..6 for n = 1 (mod 6), n >= 13. Cells that carry the direct
/// products hit by the DLS step are fixed; the remaining cells take the
/// value of the general row pattern when it fits and are otherwise filled by
/// backtracking (lowest alphabet index first). For n >= 19 the pattern fits
/// everywhere; n = 13 needs a few cells moved.
inline LatinGrid case2_first_six_rows(int n)
{
  const int h = (n - 1) / 2;
  const int size = 2 * n - 1;
  const auto colLabels = r_side_labels(n);
  const auto alphabet = t_side_labels(n);
  std::map<FactorLabel, int> colIndex;
  std::map<FactorLabel, int> symIndex;
  for (int k = 0; k < size; ++k) {
    colIndex.emplace(colLabels[k], k);
    symIndex.emplace(alphabet[k], k);
  }
  auto tsym = [&](int i, int j) { return symIndex.at(FactorLabel::t(i, j)); };
  auto dsym = [&](int c) -> int {
    auto it = symIndex.find(FactorLabel::d(c));
    return it == symIndex.end() ? -1 : it->second;
  };
  auto ccol = [&](int c) { return colIndex.at(FactorLabel::c(c)); };

  constexpr int kRows = 6;
  std::vector<int> cell(kRows * size, -1);
  std::vector<int> pref(kRows * size, -1);
  std::vector<char> fixed(kRows * size, 0);
  auto put = [&](int r, int c, int s) {
    cell[r * size + c] = s;
    fixed[r * size + c] = 1;
  };
  auto prefer = [&](int r, int c, int s) { pref[r * size + c] = s; };

  // Expanded rows 1-2 of M, restricted to the first (n-1)/2 column groups.
  for (int kp = 0; kp < 3; ++kp)
    for (int i = 1; i <= h; ++i)
      for (int k = 0; k < 3; ++k) {
        const int c = colIndex.at(FactorLabel::r(i, k + 1));
        const int sub = block_sub(kp, k);
        put(kp, c, tsym(i, sub));
        if (i >= 2) {
          put(3 + kp, c, tsym(i - 1, sub));
        } else {
          const int s = dsym(n - 3 + sub - 1);
          if (sub == 3) put(3 + kp, c, s);
          else prefer(3 + kp, c, s);
        }
      }
  for (int c = h; c <= n - 1; ++c) {
    const int col = ccol(c);
    put(0, col, dsym(c));
    if (c >= h + 1) put(1, col, dsym(c - 1));
    else prefer(1, col, dsym(n - 1));
    if (c >= h + 2) prefer(2, col, dsym(c - 2));
    else prefer(2, col, c == h ? dsym(n - 2) : dsym(n - 1));
  }
  for (int kp = 0; kp < 3; ++kp)
    for (int k = 0; k < 3; ++k) {
      const int col = ccol(h + k);
      const int s = tsym(h, block_sub(kp, k));
      if (k == 0) put(3 + kp, col, s);
      else prefer(3 + kp, col, s);
    }
  for (int c = (n + 5) / 2; c <= n - 1; ++c) {
    const int col = ccol(c);
    prefer(3, col, dsym(c - 3));
    prefer(4, col, c >= (n + 7) / 2 ? dsym(c - 4) : dsym(n - 4));
    prefer(5, col, c >= (n + 9) / 2 ? dsym(c - 5) : (c == (n + 5) / 2 ? dsym(n - 5) : dsym(n - 4)));
  }

  std::vector<int> freeCells;
  for (int k = 0; k < kRows * size; ++k)
    if (!fixed[k]) freeCells.push_back(k);
  auto fits = [&](int k, int s) {
    const int r = k / size;
    const int c = k % size;
    for (int x = 0; x < size; ++x)
      if (cell[r * size + x] == s) return false;
    for (int y = 0; y < kRows; ++y)
      if (cell[y * size + c] == s) return false;
    return true;
  };
  auto fill = [&](auto&& self, std::size_t at) -> bool {
    if (at == freeCells.size()) return true;
    const int k = freeCells[at];
    const int p = pref[k];
    if (p >= 0 && fits(k, p)) {
      cell[k] = p;
      if (self(self, at + 1)) return true;
      cell[k] = -1;
    }
    for (int s = 0; s < size; ++s) {
      if (s == p || !fits(k, s)) continue;
      cell[k] = s;
      if (self(self, at + 1)) return true;
      cell[k] = -1;
    }
    return false;
  };
  if (!fill(fill, 0)) throw std::logic_error("no 6-row Latin rectangle extends the fixed cells");
  return LatinGrid(kRows, size, size, std::vector<std::uint32_t>(cell.begin(), cell.end()));
}

}  // namespace detail

/// Rows 7..13 of the printed n = 7 array, as a 7 x 13 label rectangle.
inline LabelSquare h13_db_rows()
{
  std::vector<FactorLabel> entries;
  for (const auto& row : detail::kH13LastRows)
    for (auto text : row) entries.push_back(FactorLabel::parse(text));
  return LabelSquare(r_side_labels(7), detail::kH13LastRows.size(), std::move(entries));
}

/// Case n = 1 (mod 6): a (2n-1) x (2n-1) label Latin square whose first six
/// rows carry every direct product touched by the DLS step.
///
/// For n = 7 the last seven rows are the printed array; the first six rows
/// are the canonical completion of those seven. For n >= 13 the first six
/// rows follow the row pattern (see case2_first_six_rows) and rows 7.. are
/// the canonical completion.
inline LabelSquare build_H_case2(int n)
{
  if (n < 7 || n % 6 != 1) throw std::domain_error("case 2 square needs n = 1 (mod 6), n >= 7");
  const auto cols = r_side_labels(n);
  const auto alphabet = t_side_labels(n);
  const std::size_t size = cols.size();
  if (n == 7) {
    const auto tail = h13_db_rows().to_index_grid(alphabet);
    const auto full = complete_rectangle(tail);
    std::vector<std::uint32_t> cells;
    for (std::size_t r = tail.rows(); r < size; ++r)
      for (auto s : full.row(r)) cells.push_back(s);
    cells.insert(cells.end(), tail.cells().begin(), tail.cells().end());
    return label_square_from_grid(LatinGrid(size, size, size, std::move(cells)), cols, alphabet);
  }
  return label_square_from_grid(complete_rectangle(detail::case2_first_six_rows(n)), cols, alphabet);
}

/// H_{2n-1} for either residue class.
inline LabelSquare build_H(int n)
{
  if (n >= 7 && n % 6 == 1) return build_H_case2(n);
  if (n >= 11 && n % 6 == 5) return expand_M_to_H_case1(build_label_square_M(n), n);
  throw std::domain_error("H square needs n >= 7 with n = 1 or 5 (mod 6)");
}

}  // namespace pdq

#endif  // PDQ_LATIN_HPP
