#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "pants/words.hpp"

using namespace pants;

namespace {

SignedWord word_of(const std::string& s, bool periodic) { return parse_word(s, periodic); }

// brute-force reducer: delete a random adjacent equal pair until none remain
std::vector<int> brute_reduce(std::vector<int> letters, bool periodic,
                              std::mt19937_64& rng) {
  for (;;) {
    std::vector<std::size_t> pairs;
    const std::size_t n = letters.size();
    if (n < 2) break;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (letters[i] == letters[i + 1]) pairs.push_back(i);
    if (periodic && n >= 2 && letters.back() == letters.front())
      pairs.push_back(n - 1);  // wraparound pair
    if (pairs.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    const std::size_t i = pairs[pick(rng)];
    if (i + 1 < n) {
      letters.erase(letters.begin() + i, letters.begin() + i + 2);
    } else {
      letters.erase(letters.begin() + n - 1);
      letters.erase(letters.begin());
    }
  }
  return letters;
}

bool cyclic_equal(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  const std::size_t n = a.size();
  for (std::size_t r = 0; r < n; ++r) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = b[(i + r) % n] == a[i];
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("parse and format") {
  const SignedWord w = parse_word("1+2-3+1-2+3-", true);
  CHECK(w.letters == std::vector<int>{1, 2, 3, 1, 2, 3});
  CHECK(w.first_sign == Sign::Plus);
  CHECK(format_word(w) == "1+2-3+1-2+3-");
  CHECK_THROWS_AS(parse_word("1+2+", true), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("14", true), std::invalid_argument);
}

TEST_CASE("stutter reduction basics") {
  CHECK(reduce_stutters(word_of("11", false)).letters.empty());
  CHECK(reduce_stutters(word_of("1221", false)).letters.empty());

  const SignedWord p123 = word_of("123", true);
  CHECK(reduce_stutters(p123).letters == std::vector<int>{1, 2, 3});

  // cyclic wraparound pair
  const SignedWord w = word_of("121", true);  // necklace 1,2,1 has the wrap pair (1,1)
  CHECK(reduce_stutters(w).letters == std::vector<int>{2});

  // reduction is idempotent
  const SignedWord r = reduce_stutters(word_of("1221332", true));
  const SignedWord rr = reduce_stutters(r);
  CHECK(r.letters == rr.letters);
  CHECK(r.first_sign == rr.first_sign);
}

TEST_CASE("reduction is confluent against the brute-force oracle") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> ulen(0, 20);
  std::uniform_int_distribution<int> ulet(1, 3);
  std::uniform_int_distribution<int> uper(0, 1);
  for (int it = 0; it < 10000; ++it) {
    const int n = ulen(rng);
    std::vector<int> letters(n);
    for (auto& l : letters) l = ulet(rng);
    const bool periodic = uper(rng) == 1;
    SignedWord w;
    w.letters = letters;
    w.periodic = periodic;
    const SignedWord mine = reduce_stutters(w);
    const std::vector<int> brute = brute_reduce(letters, periodic, rng);
    if (periodic) {
      CHECK(cyclic_equal(mine.letters, brute));
    } else {
      CHECK(mine.letters == brute);
    }
  }
}

TEST_CASE("sign decorations") {
  const auto [plus, minus] = sign_decorations({1, 2}, true);
  CHECK(format_word(plus) == "1+2-");
  CHECK(format_word(minus) == "1-2+");

  CHECK_THROWS_AS(sign_decorations({1, 2, 3}, true), OddPeriodicLength);
  // doubling resolves the odd period
  const auto decorations = sign_decorations({1, 2, 3, 1, 2, 3}, true);
  CHECK(format_word(decorations.first) == "1+2-3+1-2+3-");

  const auto finite = sign_decorations({1, 2, 3, 1}, false);
  CHECK(format_word(finite.first) == "1+2-3+1-");
  CHECK(format_word(finite.second) == "1-2+3-1+");

  CHECK_THROWS_AS(sign_decorations({1, 1, 2}, false), std::invalid_argument);
}

TEST_CASE("classification of periodic words") {
  CHECK_FALSE(classify(word_of("12", true)).tied);    // winds around one end
  CHECK(classify(word_of("123123", true)).tied);
  CHECK_FALSE(classify(word_of("", true)).tied);      // degenerate class
  // reduction cannot make an untied word tied
  const SignedWord w = word_of("13311212", true);     // reduces to 1212
  const WordClass c = classify(w);
  CHECK_FALSE(c.stutter_free);
  CHECK_FALSE(c.tied);
}

TEST_CASE("exhaustive: untied iff at most two letters, length <= 8") {
  for (int n = 1; n <= 8; ++n) {
    std::vector<int> letters(n, 1);
    const int total = static_cast<int>(std::pow(3.0, n));
    for (int code = 0; code < total; ++code) {
      int c = code;
      for (int i = 0; i < n; ++i) {
        letters[i] = 1 + c % 3;
        c /= 3;
      }
      SignedWord w;
      w.letters = letters;
      w.periodic = true;
      if (has_stutter(w)) continue;  // only stutter-free periodic words
      const std::set<int> ls(letters.begin(), letters.end());
      CHECK(classify(w).tied == (ls.size() > 2));
    }
  }
}

TEST_CASE("bi-infinite words and collision tails") {
  BiInfiniteWord s;
  s.backward_tail = {1, 2, 3};
  s.core = {2, 1, 3};
  s.forward_tail = {1, 2};
  const WordClass c = classify(s);
  CHECK(c.collision_forward);
  CHECK_FALSE(c.collision_backward);
  CHECK(c.tied);

  BiInfiniteWord free_seq;
  free_seq.backward_tail = {1, 2, 3};
  free_seq.core = {};
  free_seq.forward_tail = {1, 3, 2};
  const WordClass cf = classify(free_seq);
  CHECK_FALSE(cf.collision_forward);
  CHECK_FALSE(cf.collision_backward);
}

TEST_CASE("periodic approximants") {
  BiInfiniteWord s;
  s.backward_tail = {1, 2, 3};
  s.forward_tail = {1, 2, 3};
  // N = 3: window length 6 == the period, always joinable
  const SignedWord w3 = periodic_approximant(s, 3);
  CHECK(w3.size() == 6);
  CHECK(same_free_class(w3, word_of("123123", true)));

  // N = 2: window length 4 always starts and ends with the same letter of a
  // period-3 word, so no shift removes the join stutter
  CHECK_THROWS_AS(periodic_approximant(s, 2), NoValidShift);

  // untied input: approximants never contain the third letter
  BiInfiniteWord u;
  u.backward_tail = {1, 2};
  u.forward_tail = {1, 2};
  const SignedWord wu = periodic_approximant(u, 4);
  CHECK(wu.size() == 8);
  CHECK_FALSE(classify(wu).tied);
  for (int l : wu.letters) CHECK(l != 3);

  // a window whose naive join stutters gets shifted
  BiInfiniteWord t;
  t.backward_tail = {1, 2, 1, 3};
  t.core = {1, 3};
  t.forward_tail = {1, 2};
  const SignedWord wt = periodic_approximant(t, 3);
  CHECK(wt.size() == 6);
  CHECK(wt.letters.front() != wt.letters.back());
  SignedWord probe = wt;
  CHECK_FALSE(has_stutter(probe));
}

TEST_CASE("free class comparison") {
  CHECK(same_free_class(word_of("1+2-3+1-2+3-", true), word_of("3+1-2+3-1+2-", true)));
  // rotating by one letter flips the sign phase
  CHECK(same_free_class(word_of("1+2-3+1-2+3-", true), word_of("2-3+1-2+3-1+", true)));
  // letters 123123 have period 3, so the two decorations are the same class
  // (rotation by half the word length flips the phase)
  CHECK(same_free_class(word_of("1+2-3+1-2+3-", true), word_of("1-2+3-1+2-3+", true)));
  // without that letter symmetry the two decorations are distinct classes
  CHECK_FALSE(same_free_class(word_of("1+2-1+3-", true), word_of("1-2+1-3+", true)));
  CHECK_FALSE(same_free_class(word_of("1+2-", true), word_of("1+3-", true)));
  // stutters vanish before comparison
  CHECK(same_free_class(word_of("1+2-2+3-", false), word_of("1+3-", false)));
}
