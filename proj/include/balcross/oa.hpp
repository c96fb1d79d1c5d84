// oa.hpp
//
// Binary orthogonal arrays. A candidate is an N x k binary matrix stored as
// k column bitstrings (each column the truth table of one Boolean function).
// It is an OA(N,k,t,lambda) when every N x t column submatrix contains each
// binary t-tuple exactly lambda = N / 2^t times.
//
// The fitness sums, over all t-subsets I of columns, the Euclidean deviation
//
//   dev(A_I) = sqrt( sum_x (lambda - A_I[x])^2 )
//
// plus, when penalized, the unbalancedness sum_i |N/2 - w(column_i)|. It is
// zero exactly on orthogonal arrays.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "balcross/bits.hpp"

namespace balcross {

struct OAParameters {
  std::size_t rows = 0;      // N
  std::size_t columns = 0;   // k
  std::size_t strength = 0;  // t
  std::size_t lambda = 0;    // N / 2^t

  /// Derives lambda = N / 2^t; rejects t > k or N not divisible by 2^t.
  static OAParameters make(std::size_t rows, std::size_t columns, std::size_t strength) {
    if (strength > columns) throw std::invalid_argument("OA strength exceeds number of columns");
    if (strength >= 8 * sizeof(std::size_t)) throw std::invalid_argument("OA strength too large");
    const std::size_t tuples = std::size_t{1} << strength;
    if (rows == 0 || rows % tuples != 0)
      throw std::invalid_argument("OA rows must be a positive multiple of 2^t");
    return OAParameters{rows, columns, strength, rows / tuples};
  }

  /// Like make() but also checks a stated lambda.
  static OAParameters make(std::size_t rows, std::size_t columns, std::size_t strength,
                           std::size_t lambda) {
    OAParameters p = make(rows, columns, strength);
    if (p.lambda != lambda)
      throw std::invalid_argument("OA index must equal N / 2^t = " + std::to_string(p.lambda));
    return p;
  }

  friend bool operator==(const OAParameters&, const OAParameters&) = default;
};

class CandidateOA {
 public:
  explicit CandidateOA(std::vector<BitVector> columns) : columns_(std::move(columns)) {
    for (const auto& c : columns_)
      if (c.size() != columns_.front().size())
        throw std::invalid_argument("candidate OA columns differ in length");
  }

  /// Builds from rows given as '0'/'1' strings, one character per column.
  static CandidateOA from_rows(const std::vector<std::string>& rows) {
    if (rows.empty()) throw std::invalid_argument("candidate OA needs at least one row");
    const std::size_t k = rows.front().size();
    std::vector<BitVector> cols(k, BitVector(rows.size(), 0));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const BitVector row = parse_bit_string(rows[r]);
      if (row.size() != k) throw std::invalid_argument("candidate OA rows differ in length");
      for (std::size_t c = 0; c < k; ++c) cols[c][r] = row[c];
    }
    return CandidateOA(std::move(cols));
  }

  std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t cols() const noexcept { return columns_.size(); }
  const BitVector& column(std::size_t i) const { return columns_[i]; }
  const std::vector<BitVector>& columns() const noexcept { return columns_; }
  bool at(std::size_t row, std::size_t col) const { return columns_[col][row] != 0; }

  std::string row_string(std::size_t row) const {
    std::string s(cols(), '0');
    for (std::size_t c = 0; c < cols(); ++c)
      if (at(row, c)) s[c] = '1';
    return s;
  }

 private:
  std::vector<BitVector> columns_;
};

namespace detail {

inline void require_dimensions(std::size_t rows, std::size_t cols, const OAParameters& params) {
  if (rows != params.rows || cols != params.columns)
    throw std::invalid_argument("candidate is " + std::to_string(rows) + "x" + std::to_string(cols) +
                                ", parameters expect " + std::to_string(params.rows) + "x" +
                                std::to_string(params.columns));
}

/// Advances `idx` (strictly increasing, values < n) to the next t-subset in
/// lexicographic order. Returns false after the last one.
inline bool next_subset(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t t = idx.size();
  for (std::size_t i = t; i-- > 0;) {
    if (idx[i] < n - t + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Dense tuple counts of the submatrix on `subset`; tuple value has the first
/// listed column as most significant bit.
inline void count_tuples(std::span<const BitVector> columns, std::span<const std::size_t> subset,
                         std::vector<std::size_t>& counts) {
  counts.assign(std::size_t{1} << subset.size(), 0);
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t tuple = 0;
    for (std::size_t c : subset) tuple = (tuple << 1U) | (columns[c][r] != 0 ? 1U : 0U);
    ++counts[tuple];
  }
}

inline double deviation_from_counts(std::span<const std::size_t> counts, std::size_t lambda) {
  double sum = 0.0;
  for (std::size_t c : counts) {
    const double d = static_cast<double>(c) - static_cast<double>(lambda);
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// Sum of Euclidean deviations over all t-subsets of `columns`, in
/// lexicographic subset order.
inline double total_deviation(std::span<const BitVector> columns, std::size_t strength,
                              std::size_t lambda) {
  if (strength > columns.size()) throw std::invalid_argument("OA strength exceeds number of columns");
  std::vector<std::size_t> subset(strength);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  std::vector<std::size_t> counts;
  double total = 0.0;
  do {
    count_tuples(columns, subset, counts);
    total += deviation_from_counts(counts, lambda);
  } while (detail::next_subset(subset, columns.size()));
  return total;
}

inline std::size_t unbalancedness(std::span<const BitVector> columns) {
  std::size_t unb = 0;
  for (const auto& col : columns) {
    const auto half = static_cast<std::ptrdiff_t>(col.size() / 2);
    const auto w = static_cast<std::ptrdiff_t>(hamming_weight(col));
    unb += static_cast<std::size_t>(half > w ? half - w : w - half);
  }
  return unb;
}

}  // namespace detail

/// Euclidean deviation of the N x t submatrix on the columns in `subset`.
inline double euclidean_deviation(const CandidateOA& a, std::span<const std::size_t> subset,
                                  std::size_t lambda) {
  std::vector<bool> used(a.cols(), false);
  for (std::size_t c : subset) {
    if (c >= a.cols()) throw std::invalid_argument("column index out of range");
    if (used[c]) throw std::invalid_argument("column index repeated in subset");
    used[c] = true;
  }
  std::vector<std::size_t> counts;
  detail::count_tuples(a.columns(), subset, counts);
  return detail::deviation_from_counts(counts, lambda);
}

/// UNB(A) = sum over columns of |N/2 - w(column)|.
inline std::size_t unbalancedness(const CandidateOA& a) { return detail::unbalancedness(a.columns()); }

/// Minimization objective; zero iff `a` is an OA with `params`.
inline double fit_oa(const CandidateOA& a, const OAParameters& params, bool penalized) {
  detail::require_dimensions(a.rows(), a.cols(), params);
  double fit = detail::total_deviation(a.columns(), params.strength, params.lambda);
  if (penalized) fit += static_cast<double>(unbalancedness(a));
  return fit;
}

/// Direct check of the definition: every t-tuple appears exactly lambda times
/// in every N x t submatrix.
inline bool is_orthogonal_array(const CandidateOA& a, const OAParameters& params) {
  detail::require_dimensions(a.rows(), a.cols(), params);
  const std::size_t t = params.strength;
  std::vector<std::size_t> subset(t);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  do {
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << t); ++pattern) {
      std::size_t matches = 0;
      for (std::size_t r = 0; r < a.rows(); ++r) {
        bool equal = true;
        for (std::size_t j = 0; j < t && equal; ++j) {
          const bool want = ((pattern >> (t - 1 - j)) & 1U) != 0;
          equal = a.at(r, subset[j]) == want;
        }
        if (equal) ++matches;
      }
      if (matches != params.lambda) return false;
    }
  } while (detail::next_subset(subset, a.cols()));
  return true;
}

/// Fixture format: header line "N k t lambda", then N rows of k '0'/'1'
/// characters. Blank lines and lines starting with '#' are skipped.
inline std::pair<OAParameters, CandidateOA> read_oa_fixture(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw std::invalid_argument("OA fixture: missing header");
  std::istringstream header(line);
  std::size_t n = 0, k = 0, t = 0, lambda = 0;
  if (!(header >> n >> k >> t >> lambda))
    throw std::invalid_argument("OA fixture: header must be 'N k t lambda'");
  const OAParameters params = OAParameters::make(n, k, t, lambda);
  std::vector<std::string> rows;
  while (next_line()) rows.push_back(line);
  if (rows.size() != n)
    throw std::invalid_argument("OA fixture: expected " + std::to_string(n) + " rows, found " +
                                std::to_string(rows.size()));
  CandidateOA a = CandidateOA::from_rows(rows);
  detail::require_dimensions(a.rows(), a.cols(), params);
  return {params, std::move(a)};
}

inline void write_oa_fixture(std::ostream& out, const OAParameters& params, const CandidateOA& a) {
  detail::require_dimensions(a.rows(), a.cols(), params);
  out << params.rows << ' ' << params.columns << ' ' << params.strength << ' ' << params.lambda << '\n';
  for (std::size_t r = 0; r < a.rows(); ++r) out << a.row_string(r) << '\n';
}

}  // namespace balcross
