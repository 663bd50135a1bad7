#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace mixkde {

//! Binary word, one entry (0 or 1) per coordinate.
using Word = std::vector<std::uint8_t>;

std::size_t hamming(const Word& a, const Word& b);
std::size_t weight(const Word& a);

//! A set of nonzero binary words of a common length whose pairwise
//! distances, and distances to the zero word, are at least min_distance().
//!
//! Small codes are stored word by word. Long codes are concatenated
//! Reed-Solomon / Reed-Muller codes described by their generator only; their
//! words are produced on demand and their distance is certified by
//! construction rather than by enumeration.
class Code
{
public:
  //! Stores the words and computes their exact minimum distance.
  static Code from_words(std::size_t length, std::vector<Word> words);
  //! Stores the words with a distance already known to the caller.
  static Code from_words(std::size_t length, std::vector<Word> words, std::size_t min_distance);
  static Code concatenated(std::size_t length);

  std::size_t length() const { return length_; }
  bool is_explicit() const { return !implicit_; }
  const std::vector<Word>& words() const { return words_; }

  //! log2 of the number of words.
  double log2_size() const;

  //! Exact minimum distance for stored codes, certified bound otherwise.
  std::size_t min_distance() const { return min_distance_; }

  //! A word drawn uniformly from the code.
  Word random_word(std::mt19937_64& rng) const;

private:
  struct Concatenated;

  std::size_t length_ = 0;
  std::vector<Word> words_;
  std::size_t min_distance_ = 0;
  std::shared_ptr<const Concatenated> implicit_;
};

//! Largest word length handled by greedy excision; longer codes are concatenated.
inline constexpr std::size_t max_explicit_code_length = 96;

//! Packing of {0,1}^m with at least ceil(2^{m/8}) words at pairwise distance
//! >= ceil(m/8), all at distance >= ceil(m/8) from the zero word.
Code vg_code(std::size_t m, std::uint64_t seed = 0);

//! All 2^m - 1 nonzero words of length m (m <= 20); minimum distance 1.
Code hypercube_code(std::size_t m);

} // namespace mixkde
