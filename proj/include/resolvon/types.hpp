#pragma once

// Method of types over a finite alphabet {0, ..., k-1}.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace resolvon {

using Symbol = std::size_t;
using Sequence = std::vector<Symbol>;

inline constexpr std::uint64_t kMaxTypeCount = 1'000'000;

struct TypeClass {
  std::size_t n = 0;
  std::vector<std::size_t> counts;  // counts[x] = N(x | x^n)
  std::uint64_t class_size = 0;     // n! / prod counts[x]!

  std::size_t alphabet_size() const noexcept { return counts.size(); }
  /// Empirical distribution counts / n.
  std::vector<double> distribution() const;

  friend bool operator==(const TypeClass&, const TypeClass&) = default;
};

/// Exact multinomial coefficient; throws GuardrailError on uint64 overflow.
std::uint64_t multinomial(const std::vector<std::size_t>& counts);

TypeClass make_type(std::vector<std::size_t> counts);
TypeClass type_of(const Sequence& xn, std::size_t alphabet_size);

/// All types of length-n sequences, with the first count descending
/// ([(2,0), (1,1), (0,2)] for k = n = 2). Throws GuardrailError when there are
/// more than kMaxTypeCount.
std::vector<TypeClass> enumerate_types(std::size_t alphabet_size, std::size_t n);

/// Members of the type class in lexicographic order. Throws GuardrailError
/// when the class has more than `limit` members.
std::vector<Sequence> sequences_of(const TypeClass& t, std::uint64_t limit = 10'000);

}  // namespace resolvon
