#pragma once

// Freely reduced words in the free group on a, b. Serialized over
// {"a","A","b","B"}; a capital letter is the inverse.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "taulab/error.hpp"
#include "taulab/random.hpp"

namespace taulab {

enum class Letter : std::uint8_t { a = 0, A = 1, b = 2, B = 3 };

inline constexpr std::array<Letter, 4> kLetters = {Letter::a, Letter::A, Letter::b, Letter::B};

constexpr Letter inverse(Letter l) { return static_cast<Letter>(static_cast<std::uint8_t>(l) ^ 1U); }
constexpr std::size_t index(Letter l) { return static_cast<std::size_t>(l); }
constexpr char to_char(Letter l) { return "aAbB"[index(l)]; }

class ReducedWord {
 public:
  ReducedWord() = default;

  /// Throws NotReduced if some letter is followed by its inverse.
  explicit ReducedWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
    for (std::size_t i = 1; i < letters_.size(); ++i)
      if (letters_[i] == inverse(letters_[i - 1]))
        throw NotReduced("word \"" + str() + "\" is not freely reduced at position " + std::to_string(i));
  }

  static ReducedWord parse(std::string_view text) {
    std::vector<Letter> letters;
    letters.reserve(text.size());
    for (char c : text) {
      switch (c) {
        case 'a': letters.push_back(Letter::a); break;
        case 'A': letters.push_back(Letter::A); break;
        case 'b': letters.push_back(Letter::b); break;
        case 'B': letters.push_back(Letter::B); break;
        default: throw ParseError(std::string("invalid letter '") + c + "' in word");
      }
    }
    return ReducedWord(std::move(letters));
  }

  /// Uniformly random reduced word of the given length.
  static ReducedWord random(std::size_t length, SplitMix64& rng) {
    std::vector<Letter> letters;
    letters.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
      if (i == 0) {
        letters.push_back(kLetters[rng.below(4)]);
      } else {
        // The three letters other than the inverse of the previous one.
        auto pick = static_cast<std::uint8_t>(rng.below(3));
        const auto forbidden = static_cast<std::uint8_t>(inverse(letters.back()));
        if (pick >= forbidden) ++pick;
        letters.push_back(static_cast<Letter>(pick));
      }
    }
    ReducedWord w;
    w.letters_ = std::move(letters);
    return w;
  }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  std::string str() const {
    std::string s;
    for (Letter l : letters_) s += to_char(l);
    return s;
  }

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Number of reduced words of length len: 4 * 3^(len-1), and 1 for len = 0.
constexpr std::uint64_t reduced_word_count(std::size_t len) {
  if (len == 0) return 1;
  std::uint64_t c = 4;
  for (std::size_t i = 1; i < len; ++i) c *= 3;
  return c;
}

/// Depth-first walk of the prefix tree of reduced words of length 1..max_len.
///
/// `extend(state, letter)` returns the child state; `descend(child, path)`
/// sees every word once (path holds its letters) and returns false to prune
/// the subtree below it. State is typically a partial product.
template <class State, class Extend, class Descend>
void enumerate_reduced_words(const State& root, std::size_t max_len, Extend&& extend, Descend&& descend) {
  std::vector<Letter> path;
  path.reserve(max_len);
  auto rec = [&](auto&& self, const State& state) -> void {
    if (path.size() == max_len) return;
    for (Letter l : kLetters) {
      if (!path.empty() && l == inverse(path.back())) continue;
      path.push_back(l);
      State child = extend(state, l);
      if (descend(child, path)) self(self, child);
      path.pop_back();
    }
  };
  rec(rec, root);
}

}  // namespace taulab
