#ifndef PDQ_IO_HPP
#define PDQ_IO_HPP

// Readers and writers for the text formats in format.hpp. Parse errors
// carry the 1-based line number they were found on.

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdq/core.hpp"
#include "pdq/format.hpp"
#include "pdq/latin.hpp"

namespace pdq {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + ", line " + std::to_string(line)), line_(line)
  {
  }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view text)
{
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace detail {

struct Line {
  std::size_t number;
  std::string text;
};

/// Non-blank lines with '#' comments dropped (a comment must start the line).
inline std::vector<Line> content_lines(std::string_view text, std::vector<Line>* comments = nullptr)
{
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    ++number;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      if (end == text.size()) break;
      continue;
    }
    if (line[first] == '#') {
      if (comments) comments->push_back({number, line.substr(first)});
    } else {
      out.push_back({number, std::move(line)});
    }
    if (end == text.size()) break;
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto end = s.find(sep, pos);
    out.emplace_back(s.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

inline std::vector<std::string> words(std::string_view s)
{
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(std::move(w));
  return out;
}

inline std::string trim(std::string_view s)
{
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return std::string(s.substr(a, b - a + 1));
}

inline std::uint64_t parse_uint(std::string_view s, std::size_t line, const char* what)
{
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || p != end) throw ParseError(std::string("malformed ") + what + " '" + std::string(s) + "'", line);
  return v;
}

}  // namespace detail

/// Parses "SQS v count" followed by `count` lines of four ascending points.
inline QuadSystem parse_system(std::string_view text)
{
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("malformed header: empty file", 1);
  const auto header = detail::words(lines[0].text);
  if (header.size() != 3 || header[0] != "SQS") throw ParseError("malformed header: expected 'SQS <v> <count>'", lines[0].number);
  const auto v = detail::parse_uint(header[1], lines[0].number, "order");
  const auto count = detail::parse_uint(header[2], lines[0].number, "block count");
  if (lines.size() - 1 != count)
    throw ParseError("block count mismatch: header says " + std::to_string(count) + ", file has " +
                         std::to_string(lines.size() - 1),
                     lines.size() > 1 ? lines.back().number : lines[0].number);

  std::vector<Quadruple> blocks;
  blocks.reserve(count);
  std::set<Quadruple> seen;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [number, body] = lines[k];
    const auto w = detail::words(body);
    if (w.size() != 4) throw ParseError("malformed block: expected 4 points", number);
    std::array<Point, 4> p{};
    for (int t = 0; t < 4; ++t) {
      const auto x = detail::parse_uint(w[t], number, "point");
      if (x >= v) throw ParseError("point " + std::to_string(x) + " out of range [0," + std::to_string(v) + ")", number);
      p[t] = static_cast<Point>(x);
    }
    for (int t = 0; t < 4; ++t)
      for (int u = t + 1; u < 4; ++u)
        if (p[t] == p[u]) throw ParseError("repeated point " + std::to_string(p[t]), number);
    for (int t = 0; t + 1 < 4; ++t)
      if (p[t] > p[t + 1]) throw ParseError("points not ascending", number);
    Quadruple q(p);
    if (!seen.insert(q).second) throw ParseError("duplicate block " + q.to_string(), number);
    blocks.push_back(q);
  }
  return QuadSystem(v, std::move(blocks));
}

inline QuadSystem load_system(const std::filesystem::path& path) { return parse_system(read_file(path)); }
inline void save_system(const QuadSystem& s, const std::filesystem::path& path) { write_file(path, system_to_text(s)); }

struct LoadedFactorization {
  OneFactorization factorization;
  std::vector<FactorLabel> labels;  ///< empty when the file carries none
};

/// Parses "v k" followed by k lines of "a-b" pairs. A "# labels:" comment
/// names the factors in order.
inline LoadedFactorization parse_factorization(std::string_view text)
{
  std::vector<detail::Line> comments;
  const auto lines = detail::content_lines(text, &comments);
  if (lines.empty()) throw ParseError("malformed header: empty file", 1);
  const auto header = detail::words(lines[0].text);
  if (header.size() != 2) throw ParseError("malformed header: expected '<v> <factor count>'", lines[0].number);
  const auto v = detail::parse_uint(header[0], lines[0].number, "vertex count");
  const auto k = detail::parse_uint(header[1], lines[0].number, "factor count");
  if (lines.size() - 1 != k)
    throw ParseError("factor count mismatch: header says " + std::to_string(k) + ", file has " +
                         std::to_string(lines.size() - 1),
                     lines.size() > 1 ? lines.back().number : lines[0].number);

  std::vector<OneFactor> factors;
  for (std::size_t f = 1; f < lines.size(); ++f) {
    const auto& [number, body] = lines[f];
    std::vector<PairEdge> edges;
    for (const auto& w : detail::words(body)) {
      const auto dash = w.find('-');
      if (dash == std::string::npos) throw ParseError("malformed edge '" + w + "'", number);
      const auto a = detail::parse_uint(std::string_view(w).substr(0, dash), number, "vertex");
      const auto b = detail::parse_uint(std::string_view(w).substr(dash + 1), number, "vertex");
      if (a >= v || b >= v) throw ParseError("vertex out of range in '" + w + "'", number);
      if (a == b) throw ParseError("loop edge '" + w + "'", number);
      edges.emplace_back(static_cast<Point>(a), static_cast<Point>(b));
    }
    factors.emplace_back(v, std::move(edges));
  }

  LoadedFactorization out{OneFactorization(v, std::move(factors)), {}};
  for (const auto& c : comments) {
    const std::string tag = "# labels:";
    if (c.text.rfind(tag, 0) != 0) continue;
    for (const auto& w : detail::words(std::string_view(c.text).substr(tag.size()))) {
      try {
        out.labels.push_back(FactorLabel::parse(w));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), c.number);
      }
    }
    if (out.labels.size() != k) throw ParseError("label count does not match factor count", c.number);
  }
  return out;
}

inline LoadedFactorization load_factorization(const std::filesystem::path& path)
{
  return parse_factorization(read_file(path));
}
inline void save_factorization(const OneFactorization& f, const std::filesystem::path& path,
                               const std::vector<FactorLabel>& labels = {})
{
  write_file(path, factorization_to_text(f, labels));
}

/// Integer CSV, one row per line. The symbol count is the column count
/// unless a larger symbol occurs (so that a bad grid still loads and fails
/// verification rather than parsing).
inline LatinGrid parse_grid_csv(std::string_view text)
{
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("empty grid", 1);
  std::size_t cols = 0;
  std::uint32_t maxSymbol = 0;
  std::vector<std::uint32_t> cells;
  for (const auto& [number, body] : lines) {
    const auto fields = detail::split(body, ',');
    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) throw ParseError("ragged row: expected " + std::to_string(cols) + " fields", number);
    for (const auto& f : fields) {
      const auto x = detail::parse_uint(detail::trim(f), number, "cell");
      if (x > std::numeric_limits<std::uint32_t>::max()) throw ParseError("cell out of range", number);
      cells.push_back(static_cast<std::uint32_t>(x));
      maxSymbol = std::max(maxSymbol, static_cast<std::uint32_t>(x));
    }
  }
  const std::size_t symbols = std::max<std::size_t>(cols, std::size_t{maxSymbol} + 1);
  return LatinGrid(lines.size(), cols, symbols, std::move(cells));
}

inline LatinGrid load_grid_csv(const std::filesystem::path& path) { return parse_grid_csv(read_file(path)); }
inline void save_grid_csv(const LatinGrid& g, const std::filesystem::path& path) { write_file(path, grid_to_csv(g)); }

/// Label CSV: the first line holds the column labels, each further line
/// one row of entries.
inline LabelSquare parse_label_csv(std::string_view text)
{
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("empty label square", 1);
  auto parse_row = [](const detail::Line& line) {
    std::vector<FactorLabel> out;
    for (const auto& f : detail::split(line.text, ',')) {
      try {
        out.push_back(FactorLabel::parse(detail::trim(f)));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line.number);
      }
    }
    return out;
  };
  auto columns = parse_row(lines[0]);
  std::vector<FactorLabel> entries;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto row = parse_row(lines[r]);
    if (row.size() != columns.size())
      throw ParseError("ragged row: expected " + std::to_string(columns.size()) + " labels", lines[r].number);
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return LabelSquare(std::move(columns), lines.size() - 1, std::move(entries));
}

inline LabelSquare load_label_csv(const std::filesystem::path& path) { return parse_label_csv(read_file(path)); }
inline void save_label_csv(const LabelSquare& s, const std::filesystem::path& path)
{
  write_file(path, label_square_to_csv(s));
}

}  // namespace pdq

#endif  // PDQ_IO_HPP
