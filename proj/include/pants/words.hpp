#pragma once

#include <string>
#include <vector>

#include "pants/errors.hpp"

namespace pants {

enum class Sign : int { Plus = +1, Minus = -1 };

inline Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

// A finite or periodic signed syzygy word. Signs strictly alternate along the
// word, so only the sign of the first letter is stored; for periodic words of
// odd length the alternation is inconsistent under wraparound and sign-aware
// operations reject them.
struct SignedWord {
  std::vector<int> letters;     // values in {1,2,3}
  Sign first_sign = Sign::Plus;
  bool periodic = false;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  Sign sign_at(std::size_t i) const {
    return (i % 2 == 0) ? first_sign : flip(first_sign);
  }
  bool sign_consistent() const { return !periodic || letters.size() % 2 == 0; }
};

// Parse "1+2-3+1-2+3-" or a bare "123" (defaults to a leading '+').
SignedWord parse_word(const std::string& text, bool periodic);
std::string format_word(const SignedWord& w);

struct WordClass {
  bool stutter_free = false;
  bool tied = false;
  bool collision_forward = false;
  bool collision_backward = false;
};

// A bi-infinite word given as periodic backward tail, finite core, periodic
// forward tail; index 0 is the first core letter (or the first forward-tail
// letter when the core is empty).
struct BiInfiniteWord {
  std::vector<int> backward_tail;  // repeats toward -infinity
  std::vector<int> core;
  std::vector<int> forward_tail;   // repeats toward +infinity

  int at(long long j) const;  // letter s_j
};

// Does the word contain a stutter (adjacent equal letters, cyclically for
// periodic words)?
bool has_stutter(const SignedWord& w);

// Delete adjacent equal-letter pairs (cyclically for periodic words) until
// none remain. The normal form is independent of deletion order.
SignedWord reduce_stutters(const SignedWord& w);

// The two alternating sign decorations of a stutter-free unsigned word.
// Throws OddPeriodicLength for periodic words of odd length.
std::pair<SignedWord, SignedWord> sign_decorations(const std::vector<int>& letters,
                                                   bool periodic);

WordClass classify(const SignedWord& w);
WordClass classify(const BiInfiniteWord& w);

// Length-2N window of s, shifted by the smallest j >= 0 that removes the
// stutter at the periodic join; contains all three letters for N large when
// s does. Throws NoValidShift when no shift works.
SignedWord periodic_approximant(const BiInfiniteWord& s, int N);

// Free-homotopy equality: equal as cyclic signed words (letters match under
// some rotation, with the sign phase shifted accordingly).
bool same_free_class(const SignedWord& a, const SignedWord& b);

}  // namespace pants
