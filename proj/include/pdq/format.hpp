#ifndef PDQ_FORMAT_HPP
#define PDQ_FORMAT_HPP

// Canonical text forms. These are the bytes that get written to disk and
// the bytes that certificate digests are computed over.

#include <sstream>
#include <string>

#include "pdq/core.hpp"
#include "pdq/latin.hpp"

namespace pdq {

inline constexpr const char* kSystemFormatTag = "# pdq-sqs 1";
inline constexpr const char* kFactorizationFormatTag = "# pdq-onefact 1";

/// "SQS v count" header, then one block per line.
inline std::string system_to_text(const QuadSystem& s)
{
  std::ostringstream out;
  out << kSystemFormatTag << '\n' << "SQS " << s.order() << ' ' << s.size() << '\n';
  for (const auto& q : s.blocks()) out << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  return out.str();
}

/// "v k" header, then one factor per line as space separated "a-b" pairs.
/// Optional labels go on a comment line so readers may ignore them.
inline std::string factorization_to_text(const OneFactorization& f, const std::vector<FactorLabel>& labels = {})
{
  std::ostringstream out;
  out << kFactorizationFormatTag << '\n';
  if (!labels.empty()) {
    out << "# labels:";
    for (const auto& l : labels) out << ' ' << l.to_string();
    out << '\n';
  }
  out << f.vertex_count() << ' ' << f.size() << '\n';
  for (const auto& factor : f.factors()) {
    bool first = true;
    for (const auto& e : factor.edges()) {
      out << (first ? "" : " ") << e.lo() << '-' << e.hi();
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

inline std::string grid_to_csv(const LatinGrid& g)
{
  std::ostringstream out;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) out << (c ? "," : "") << g(r, c);
    out << '\n';
  }
  return out.str();
}

/// First line holds the column labels; each further line is one row.
inline std::string label_square_to_csv(const LabelSquare& s)
{
  std::ostringstream out;
  for (std::size_t c = 0; c < s.cols(); ++c) out << (c ? "," : "") << s.column_labels()[c].to_string();
  out << '\n';
  for (std::size_t r = 0; r < s.rows(); ++r) {
    for (std::size_t c = 0; c < s.cols(); ++c) out << (c ? "," : "") << s.at(r, c).to_string();
    out << '\n';
  }
  return out.str();
}

}  // namespace pdq

#endif  // PDQ_FORMAT_HPP
