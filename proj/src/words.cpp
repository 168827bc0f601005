#include "pants/words.hpp"

#include <algorithm>
#include <set>

namespace pants {

SignedWord parse_word(const std::string& text, bool periodic) {
  SignedWord w;
  w.periodic = periodic;
  bool sign_seen = false;
  std::vector<Sign> signs;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '1' || c == '2' || c == '3') {
      w.letters.push_back(c - '0');
      signs.push_back(Sign::Plus);
    } else if (c == '+' || c == '-') {
      if (w.letters.empty()) throw std::invalid_argument("parse_word: sign before letter");
      signs.back() = (c == '+') ? Sign::Plus : Sign::Minus;
      sign_seen = true;
    } else if (c == ' ') {
      continue;
    } else {
      throw std::invalid_argument(std::string("parse_word: unexpected character '") + c + "'");
    }
  }
  if (sign_seen) {
    w.first_sign = signs.empty() ? Sign::Plus : signs.front();
    for (std::size_t i = 0; i < signs.size(); ++i)
      if (signs[i] != w.sign_at(i))
        throw std::invalid_argument("parse_word: signs must alternate");
  }
  return w;
}

std::string format_word(const SignedWord& w) {
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    out += static_cast<char>('0' + w.letters[i]);
    out += (w.sign_at(i) == Sign::Plus) ? '+' : '-';
  }
  return out;
}

int BiInfiniteWord::at(long long j) const {
  const long long n_core = static_cast<long long>(core.size());
  if (j >= 0 && j < n_core) return core[static_cast<std::size_t>(j)];
  if (j >= n_core) {
    if (forward_tail.empty()) throw std::invalid_argument("BiInfiniteWord: empty forward tail");
    const long long r = (j - n_core) % static_cast<long long>(forward_tail.size());
    return forward_tail[static_cast<std::size_t>(r)];
  }
  if (backward_tail.empty()) throw std::invalid_argument("BiInfiniteWord: empty backward tail");
  const long long n = static_cast<long long>(backward_tail.size());
  // j < 0: count backward from the end of the backward tail
  long long r = ((j % n) + n) % n;
  return backward_tail[static_cast<std::size_t>(r)];
}

bool has_stutter(const SignedWord& w) {
  const std::size_t n = w.letters.size();
  if (n < 2) return w.periodic && n == 1;  // a one-letter necklace stutters with itself
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (w.letters[i] == w.letters[i + 1]) return true;
  if (w.periodic && w.letters.back() == w.letters.front()) return true;
  return false;
}

SignedWord reduce_stutters(const SignedWord& w) {
  SignedWord out = w;
  // Linear pass with a stack; deleting a pair never changes the alternation
  // parity of the surviving letters, so the sign phase follows the first
  // surviving original letter.
  std::vector<std::pair<int, std::size_t>> stack;  // (letter, original index)
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (!stack.empty() && stack.back().first == w.letters[i])
      stack.pop_back();
    else
      stack.emplace_back(w.letters[i], i);
  }
  if (w.periodic) {
    // cyclic reduction: cancel matching front/back pairs
    std::size_t lo = 0, hi = stack.size();
    while (hi - lo >= 2 && stack[lo].first == stack[hi - 1].first) {
      ++lo;
      --hi;
    }
    stack.erase(stack.begin() + hi, stack.end());
    stack.erase(stack.begin(), stack.begin() + lo);
  }
  out.letters.clear();
  for (const auto& [letter, idx] : stack) out.letters.push_back(letter);
  if (!stack.empty()) out.first_sign = w.sign_at(stack.front().second);
  return out;
}

std::pair<SignedWord, SignedWord> sign_decorations(const std::vector<int>& letters,
                                                   bool periodic) {
  SignedWord probe;
  probe.letters = letters;
  probe.periodic = periodic;
  if (has_stutter(probe))
    throw std::invalid_argument("sign_decorations: word must be stutter-free");
  if (periodic && letters.size() % 2 != 0)
    throw OddPeriodicLength(
        "sign_decorations: periodic words need even length for a consistent "
        "alternation; double the word first");
  SignedWord plus = probe, minus = probe;
  plus.first_sign = Sign::Plus;
  minus.first_sign = Sign::Minus;
  return {plus, minus};
}

namespace {

std::set<int> letter_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

bool tail_is_two_letter(const std::vector<int>& tail) {
  return letter_set(tail).size() <= 2;
}

}  // namespace

WordClass classify(const SignedWord& w) {
  WordClass c;
  c.stutter_free = !has_stutter(w);
  const SignedWord r = reduce_stutters(w);
  // Untied classes: the empty class and the powers of a two-letter
  // alternation (a curve winding around a single end).
  c.tied = letter_set(r.letters).size() > 2;
  return c;
}

WordClass classify(const BiInfiniteWord& w) {
  WordClass c;
  SignedWord probe;
  probe.letters = w.backward_tail;
  probe.letters.insert(probe.letters.end(), w.core.begin(), w.core.end());
  probe.letters.insert(probe.letters.end(), w.forward_tail.begin(), w.forward_tail.end());
  probe.periodic = false;
  c.stutter_free = !has_stutter(probe);
  c.collision_forward = tail_is_two_letter(w.forward_tail);
  c.collision_backward = tail_is_two_letter(w.backward_tail);
  c.tied = letter_set(probe.letters).size() > 2;
  return c;
}

SignedWord periodic_approximant(const BiInfiniteWord& s, int N) {
  if (N < 1) throw std::invalid_argument("periodic_approximant: N must be >= 1");
  const int span = 2 * N;
  // Try shifts until the periodic join is stutter-free. The shift search is
  // bounded by the eventual period of the data.
  const int j_max = span + static_cast<int>(s.forward_tail.size()) +
                    static_cast<int>(s.backward_tail.size()) +
                    static_cast<int>(s.core.size()) + 4;
  for (int j = 0; j <= j_max; ++j) {
    SignedWord w;
    w.periodic = true;
    for (int i = 0; i < span; ++i) w.letters.push_back(s.at(-N + 1 + j + i));
    bool internal_ok = true;
    for (int i = 0; i + 1 < span; ++i)
      if (w.letters[i] == w.letters[i + 1]) internal_ok = false;
    if (internal_ok && w.letters.back() != w.letters.front()) return w;
  }
  throw NoValidShift("periodic_approximant: no shift removes the join stutter");
}

bool same_free_class(const SignedWord& a, const SignedWord& b) {
  const SignedWord ra = reduce_stutters(a);
  const SignedWord rb = reduce_stutters(b);
  if (ra.letters.size() != rb.letters.size()) return false;
  if (ra.empty()) return true;
  const std::size_t n = ra.letters.size();
  for (std::size_t r = 0; r < n; ++r) {
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i)
      if (rb.letters[(i + r) % n] != ra.letters[i]) match = false;
    if (!match) continue;
    // rotating b by r shifts its sign phase by r
    const Sign rot_sign = (r % 2 == 0) ? rb.first_sign : flip(rb.first_sign);
    if (rot_sign == ra.first_sign) return true;
  }
  return false;
}

}  // namespace pants
