#include "resolvon/types.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "resolvon/error.hpp"

namespace resolvon {

namespace {

void compositions(std::size_t remaining, std::size_t slot, std::vector<std::size_t>& current,
                  std::vector<TypeClass>& out) {
  if (slot + 1 == current.size()) {
    current[slot] = remaining;
    out.push_back(make_type(current));
    return;
  }
  for (std::size_t c = remaining + 1; c-- > 0;) {
    current[slot] = c;
    compositions(remaining - c, slot + 1, current, out);
  }
}

// C(a, b) in double precision, for guardrail estimates only.
double binomial_estimate(std::size_t a, std::size_t b) {
  double r = 1.0;
  for (std::size_t i = 1; i <= b; ++i) r = r * static_cast<double>(a - b + i) / static_cast<double>(i);
  return r;
}

}  // namespace

std::vector<double> TypeClass::distribution() const {
  std::vector<double> p(counts.size());
  for (std::size_t x = 0; x < counts.size(); ++x) {
    p[x] = static_cast<double>(counts[x]) / static_cast<double>(n);
  }
  return p;
}

std::uint64_t multinomial(const std::vector<std::size_t>& counts) {
  // Product of binomials C(c_1 + ... + c_i, c_i), each computed exactly.
  std::uint64_t result = 1;
  std::uint64_t total = 0;
  for (std::size_t c : counts) {
    for (std::uint64_t i = 1; i <= c; ++i) {
      ++total;
      // result * total / i stays integral at every step of this recurrence.
      const std::uint64_t g = std::gcd(result, i);
      const std::uint64_t r = result / g;
      const std::uint64_t t = total / (i / g);
      if (t != 0 && r > UINT64_MAX / t) throw GuardrailError("multinomial overflows 64 bits");
      result = r * t;
    }
  }
  return result;
}

TypeClass make_type(std::vector<std::size_t> counts) {
  if (counts.empty()) throw InputError("type needs a non-empty alphabet");
  TypeClass t;
  t.n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (t.n == 0) throw InputError("type needs n >= 1");
  t.class_size = multinomial(counts);
  t.counts = std::move(counts);
  return t;
}

TypeClass type_of(const Sequence& xn, std::size_t alphabet_size) {
  std::vector<std::size_t> counts(alphabet_size, 0);
  for (Symbol x : xn) {
    if (x >= alphabet_size) throw InputError("symbol outside the alphabet");
    ++counts[x];
  }
  return make_type(std::move(counts));
}

std::vector<TypeClass> enumerate_types(std::size_t alphabet_size, std::size_t n) {
  if (alphabet_size == 0 || n == 0) throw InputError("enumerate_types needs k >= 1 and n >= 1");
  const double count = binomial_estimate(n + alphabet_size - 1, alphabet_size - 1);
  if (count > static_cast<double>(kMaxTypeCount)) {
    std::ostringstream os;
    os << "type enumeration too large: " << count << " types";
    throw GuardrailError(os.str());
  }
  std::vector<TypeClass> out;
  std::vector<std::size_t> current(alphabet_size, 0);
  compositions(n, 0, current, out);
  return out;
}

std::vector<Sequence> sequences_of(const TypeClass& t, std::uint64_t limit) {
  if (t.class_size > limit) {
    std::ostringstream os;
    os << "type class has " << t.class_size << " members, limit is " << limit;
    throw GuardrailError(os.str());
  }
  Sequence xn;
  xn.reserve(t.n);
  for (Symbol x = 0; x < t.counts.size(); ++x) xn.insert(xn.end(), t.counts[x], x);
  std::vector<Sequence> out;
  out.reserve(t.class_size);
  do {
    out.push_back(xn);
  } while (std::next_permutation(xn.begin(), xn.end()));
  return out;
}

}  // namespace resolvon
