#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmlm {

/// Largest moment order the index tables are built for.
inline constexpr int kMaxOrder = 40;

/// Exponent triple (a1, a2, a3) of a Hermite basis function.
struct MultiIndex {
  std::array<int, 3> a{0, 0, 0};

  constexpr int degree() const { return a[0] + a[1] + a[2]; }
  constexpr int operator[](int d) const { return a[static_cast<std::size_t>(d)]; }
  friend constexpr bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

class IndexRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Number of multi-indices with degree <= order, i.e. C(order + 3, 3).
constexpr int moment_count(int order) {
  if (order < 0) return 0;
  return (order + 1) * (order + 2) * (order + 3) / 6;
}

/// Position of alpha in the graded reverse-lexicographic enumeration.
///
/// Indices are grouped by degree. Inside a degree, larger a1 comes first and
/// ties are broken by larger a2. Because the rank does not depend on the
/// truncation order, truncating to order m keeps the first moment_count(m)
/// entries of any coefficient array.
constexpr int rank_unchecked(const MultiIndex& alpha) {
  const int n = alpha.degree();
  const int s = alpha[1] + alpha[2];
  return moment_count(n - 1) + s * (s + 1) / 2 + alpha[2];
}

inline int rank(const MultiIndex& alpha, int order) {
  if (alpha[0] < 0 || alpha[1] < 0 || alpha[2] < 0)
    throw IndexRangeError("rank: negative multi-index component");
  if (alpha.degree() > order)
    throw IndexRangeError("rank: |alpha| = " + std::to_string(alpha.degree()) +
                          " exceeds order " + std::to_string(order));
  return rank_unchecked(alpha);
}

inline MultiIndex unrank(int r) {
  if (r < 0) throw IndexRangeError("unrank: negative rank");
  int n = 0;
  while (moment_count(n) <= r) ++n;
  int pos = r - moment_count(n - 1);
  int s = 0;
  while ((s + 1) * (s + 2) / 2 <= pos) ++s;
  const int a3 = pos - s * (s + 1) / 2;
  return MultiIndex{{n - s, s - a3, a3}};
}

/// Precomputed neighbour ranks for every index up to kMaxOrder.
///
/// Shift lookups return -1 when the shifted index has a negative component.
/// Upward shifts are never clipped here; callers compare against
/// moment_count(order).
class IndexTable {
 public:
  static const IndexTable& instance() {
    static const IndexTable table;
    return table;
  }

  const MultiIndex& alpha(int r) const { return alphas_[static_cast<std::size_t>(r)]; }
  int degree(int r) const { return degrees_[static_cast<std::size_t>(r)]; }
  int minus(int d, int r) const { return minus_[static_cast<std::size_t>(d)][static_cast<std::size_t>(r)]; }
  int minus2(int d, int r) const { return minus2_[static_cast<std::size_t>(d)][static_cast<std::size_t>(r)]; }
  int plus(int d, int r) const { return plus_[static_cast<std::size_t>(d)][static_cast<std::size_t>(r)]; }
  /// alpha! = a1! a2! a3!
  double factorial(int r) const { return factorial_[static_cast<std::size_t>(r)]; }

  int size() const { return static_cast<int>(alphas_.size()); }

 private:
  IndexTable() {
    const int n = moment_count(kMaxOrder);
    const int n_ext = moment_count(kMaxOrder + 1);
    alphas_.resize(static_cast<std::size_t>(n));
    degrees_.resize(static_cast<std::size_t>(n));
    factorial_.resize(static_cast<std::size_t>(n));
    for (auto& v : minus_) v.assign(static_cast<std::size_t>(n), -1);
    for (auto& v : minus2_) v.assign(static_cast<std::size_t>(n), -1);
    for (auto& v : plus_) v.assign(static_cast<std::size_t>(n), -1);

    std::array<double, kMaxOrder + 1> fact{};
    fact[0] = 1.0;
    for (int k = 1; k <= kMaxOrder; ++k) fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k - 1)] * k;

    for (int r = 0; r < n; ++r) {
      const MultiIndex a = unrank(r);
      const auto ur = static_cast<std::size_t>(r);
      alphas_[ur] = a;
      degrees_[ur] = a.degree();
      factorial_[ur] = fact[static_cast<std::size_t>(a[0])] * fact[static_cast<std::size_t>(a[1])] *
                       fact[static_cast<std::size_t>(a[2])];
      for (int d = 0; d < 3; ++d) {
        MultiIndex b = a;
        b.a[static_cast<std::size_t>(d)] += 1;
        const int rp = rank_unchecked(b);
        plus_[static_cast<std::size_t>(d)][ur] = rp < n_ext ? rp : -1;
        if (a[d] >= 1) {
          b = a;
          b.a[static_cast<std::size_t>(d)] -= 1;
          minus_[static_cast<std::size_t>(d)][ur] = rank_unchecked(b);
        }
        if (a[d] >= 2) {
          b = a;
          b.a[static_cast<std::size_t>(d)] -= 2;
          minus2_[static_cast<std::size_t>(d)][ur] = rank_unchecked(b);
        }
      }
    }
  }

  std::vector<MultiIndex> alphas_;
  std::vector<int> degrees_;
  std::vector<double> factorial_;
  std::array<std::vector<int>, 3> minus_;
  std::array<std::vector<int>, 3> minus2_;
  std::array<std::vector<int>, 3> plus_;
};

/// Rank of the unit index e_d (d = 0, 1, 2).
constexpr int unit_rank(int d) { return 1 + d; }

/// Rank of 2 e_d.
constexpr int double_unit_rank(int d) {
  MultiIndex a;
  a.a[static_cast<std::size_t>(d)] = 2;
  return rank_unchecked(a);
}

/// Rank of e_i + e_j.
constexpr int pair_rank(int i, int j) {
  MultiIndex a;
  a.a[static_cast<std::size_t>(i)] += 1;
  a.a[static_cast<std::size_t>(j)] += 1;
  return rank_unchecked(a);
}

inline void check_order(int order) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("moment order " + std::to_string(order) + " outside [0, " +
                                std::to_string(kMaxOrder) + "]");
}

}  // namespace nmlm
