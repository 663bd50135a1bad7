#include "mixkde/codes.hpp"

#include "mixkde/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

namespace mixkde {

std::size_t
hamming(const Word& a, const Word& b)
{
  if (a.size() != b.size())
    throw dimension_error("hamming: words of different length");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d += (a[i] != b[i]);
  return d;
}

std::size_t
weight(const Word& a)
{
  std::size_t w = 0;
  for (auto b : a)
    w += (b != 0);
  return w;
}

namespace {

//! Words of up to 128 bits packed in two machine words.
struct Packed
{
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

int
distance(const Packed& a, const Packed& b)
{
  return std::popcount(a.lo ^ b.lo) + std::popcount(a.hi ^ b.hi);
}

Word
unpack(const Packed& p, std::size_t m)
{
  Word w(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    w[i] = static_cast<std::uint8_t>(i < 64 ? (p.lo >> i) & 1u : (p.hi >> (i - 64)) & 1u);
  return w;
}

std::size_t
exact_min_distance(const std::vector<Word>& words)
{
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < words.size(); ++i) {
    best = std::min(best, weight(words[i]));
    for (std::size_t j = i + 1; j < words.size(); ++j)
      best = std::min(best, hamming(words[i], words[j]));
  }
  return best;
}

// Finite field GF(2^16) with primitive polynomial x^16 + x^12 + x^3 + x + 1.
struct GF16
{
  static constexpr std::uint32_t poly = 0x1100B;
  static constexpr std::size_t order = 65535;
  std::vector<std::uint16_t> exp;
  std::vector<std::uint16_t> log;

  GF16()
    : exp(2 * order)
    , log(order + 1, 0)
  {
    std::uint32_t x = 1;
    for (std::size_t i = 0; i < order; ++i) {
      exp[i] = static_cast<std::uint16_t>(x);
      if (i > 0 && x == 1)
        throw construction_error("GF(2^16): generator polynomial is not primitive");
      log[x] = static_cast<std::uint16_t>(i);
      x <<= 1;
      if (x & 0x10000u)
        x ^= poly;
    }
    for (std::size_t i = order; i < exp.size(); ++i)
      exp[i] = exp[i - order];
  }

  std::uint16_t mul(std::uint16_t a, std::uint16_t b) const
  {
    if (a == 0 || b == 0)
      return 0;
    return exp[static_cast<std::size_t>(log[a]) + log[b]];
  }
};

const GF16&
gf16()
{
  static const GF16 f;
  return f;
}

// Generator rows of the [32, 16, 8] second-order Reed-Muller code.
std::array<std::uint32_t, 16>
reed_muller_rows()
{
  std::array<std::uint32_t, 16> rows{};
  std::size_t r = 0;
  auto row_for = [](auto monomial) {
    std::uint32_t bits = 0;
    for (std::uint32_t z = 0; z < 32; ++z)
      if (monomial(z))
        bits |= (1u << z);
    return bits;
  };
  rows[r++] = row_for([](std::uint32_t) { return true; });
  for (int i = 0; i < 5; ++i)
    rows[r++] = row_for([i](std::uint32_t z) { return ((z >> i) & 1u) != 0; });
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      rows[r++] = row_for([i, j](std::uint32_t z) { return ((z >> i) & (z >> j) & 1u) != 0; });
  return rows;
}

} // namespace

struct Code::Concatenated
{
  std::size_t outer_length = 0; // L symbols
  std::size_t outer_dimension = 0; // K symbols
  std::array<std::uint32_t, 16> inner{};

  Word encode(const std::vector<std::uint16_t>& message, std::size_t m) const
  {
    const auto& f = gf16();
    Word w(m, 0);
    for (std::size_t i = 0; i < outer_length; ++i) {
      // evaluate the message polynomial at exp[i]
      const std::uint16_t x = f.exp[i];
      std::uint16_t acc = 0;
      for (std::size_t k = message.size(); k-- > 0;)
        acc = static_cast<std::uint16_t>(f.mul(acc, x) ^ message[k]);
      std::uint32_t bits = 0;
      for (int b = 0; b < 16; ++b)
        if ((acc >> b) & 1u)
          bits ^= inner[static_cast<std::size_t>(b)];
      for (std::size_t z = 0; z < 32; ++z)
        w[32 * i + z] = static_cast<std::uint8_t>((bits >> z) & 1u);
    }
    return w;
  }
};

Code
Code::from_words(std::size_t length, std::vector<Word> words)
{
  auto c = from_words(length, std::move(words), 0);
  c.min_distance_ = exact_min_distance(c.words_);
  return c;
}

Code
Code::from_words(std::size_t length, std::vector<Word> words, std::size_t min_distance)
{
  for (const auto& w : words) {
    if (w.size() != length)
      throw dimension_error("Code: word length differs from code length");
  }
  Code c;
  c.length_ = length;
  c.words_ = std::move(words);
  c.min_distance_ = min_distance;
  return c;
}

Code
Code::concatenated(std::size_t length)
{
  const std::size_t L = length / 32;
  const std::size_t K = length / 128 + 1;
  if (L < K || L > GF16::order)
    throw construction_error("concatenated code: unsupported word length");
  Code c;
  c.length_ = length;
  auto impl = std::make_shared<Concatenated>();
  impl->outer_length = L;
  impl->outer_dimension = K;
  impl->inner = reed_muller_rows();
  c.min_distance_ = 8 * (L - K + 1);
  c.implicit_ = std::move(impl);
  return c;
}

double
Code::log2_size() const
{
  if (implicit_)
    return 16.0 * static_cast<double>(implicit_->outer_dimension);
  return words_.empty() ? -std::numeric_limits<double>::infinity()
                        : std::log2(static_cast<double>(words_.size()));
}

Word
Code::random_word(std::mt19937_64& rng) const
{
  if (!implicit_) {
    if (words_.empty())
      throw construction_error("Code: no words to draw from");
    std::uniform_int_distribution<std::size_t> pick(0, words_.size() - 1);
    return words_[pick(rng)];
  }
  std::vector<std::uint16_t> message(implicit_->outer_dimension);
  bool nonzero = false;
  while (!nonzero) {
    for (auto& s : message) {
      s = static_cast<std::uint16_t>(rng() & 0xFFFFu);
      nonzero = nonzero || s != 0;
    }
  }
  return implicit_->encode(message, length_);
}

namespace {

constexpr std::uint64_t comparison_budget = std::uint64_t{ 1 } << 26;
constexpr std::uint64_t candidate_budget = std::uint64_t{ 1 } << 22;

bool
admissible(const Packed& c, const std::vector<Packed>& kept, int d)
{
  if (distance(c, Packed{}) < d)
    return false;
  for (const auto& k : kept)
    if (distance(c, k) < d)
      return false;
  return true;
}

// Greedy excision over words in lexicographic (integer) order.
bool
greedy_lexicographic(std::size_t m, int d, std::size_t target, std::vector<Packed>& kept)
{
  kept.clear();
  const std::uint64_t limit =
    m >= 63 ? candidate_budget : std::min(candidate_budget, std::uint64_t{ 1 } << m);
  std::uint64_t comparisons = 0;
  for (std::uint64_t c = 1; c < limit && kept.size() < target; ++c) {
    comparisons += kept.size() + 1;
    if (comparisons > comparison_budget)
      return false;
    Packed p{ c, 0 };
    if (admissible(p, kept, d))
      kept.push_back(p);
  }
  return kept.size() >= target;
}

bool
random_excision(std::size_t m, int d, std::size_t target, std::mt19937_64& rng,
                std::vector<Packed>& kept)
{
  kept.clear();
  const std::size_t max_draws = 64 * target + 1024;
  for (std::size_t draw = 0; draw < max_draws && kept.size() < target; ++draw) {
    Packed p{ rng(), rng() };
    if (m < 64) {
      p.lo &= (std::uint64_t{ 1 } << m) - 1;
      p.hi = 0;
    } else if (m < 128) {
      p.hi &= m == 64 ? 0 : (std::uint64_t{ 1 } << (m - 64)) - 1;
    }
    if (admissible(p, kept, d))
      kept.push_back(p);
  }
  return kept.size() >= target;
}

} // namespace

Code
vg_code(std::size_t m, std::uint64_t seed)
{
  if (m < 8)
    throw parameter_error("vg_code: word length must be at least 8");
  const int d = static_cast<int>((m + 7) / 8);
  if (m > max_explicit_code_length) {
    auto code = Code::concatenated(m);
    if (code.min_distance() < static_cast<std::size_t>(d))
      throw construction_error("vg_code: concatenated code distance below ceil(m/8)");
    return code;
  }

  const auto target = static_cast<std::size_t>(std::ceil(std::exp2(static_cast<double>(m) / 8.0)));
  std::vector<Packed> kept;
  bool ok = greedy_lexicographic(m, d, target, kept);
  std::mt19937_64 rng(seed);
  for (int restart = 0; !ok && restart < 64; ++restart)
    ok = random_excision(m, d, target, rng, kept);
  if (!ok)
    throw construction_error("vg_code: no packing found within the search budget");

  std::vector<Word> words;
  words.reserve(kept.size());
  for (const auto& p : kept)
    words.push_back(unpack(p, m));
  return Code::from_words(m, std::move(words));
}

Code
hypercube_code(std::size_t m)
{
  if (m == 0 || m > 20)
    throw parameter_error("hypercube_code: length must lie in [1, 20]");
  std::vector<Word> words;
  for (std::uint64_t c = 1; c < (std::uint64_t{ 1 } << m); ++c)
    words.push_back(unpack(Packed{ c, 0 }, m));
  return Code::from_words(m, std::move(words), 1);
}

} // namespace mixkde
