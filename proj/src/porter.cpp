// Porter (1980) suffix stripper, original rule set without the later
// "logi" and "bli" departures.

#include <string>
#include <string_view>

#include "ccdrift/lexicon.hpp"

namespace ccdrift {
namespace {

class Stemmer {
 public:
  explicit Stemmer(std::string_view w) : b_(w) {}

  std::string run() {
    if (b_.size() <= 2) return b_;
    step1ab();
    if (k() > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_;
  }

 private:
  // Invariant: the word under construction is exactly b_, so k() is its last
  // index. j_ marks the end of the stem for the most recent successful ends().
  int k() const { return static_cast<int>(b_.size()) - 1; }
  char at(int i) const { return b_[static_cast<std::size_t>(i)]; }
  void truncate(int last) { b_.resize(static_cast<std::size_t>(last + 1)); }

  bool cons(int i) const {
    switch (at(i)) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of vowel-consonant sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool doublec(int j) const {
    if (j < 1) return false;
    if (at(j) != at(j - 1)) return false;
    return cons(j);
  }

  // consonant-vowel-consonant ending at i, final consonant not w, x or y
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = at(i);
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    if (s.size() > b_.size()) return false;
    if (std::string_view(b_).substr(b_.size() - s.size()) != s) return false;
    j_ = k() - static_cast<int>(s.size());
    return true;
  }

  void setto(std::string_view s) {
    truncate(j_);
    b_ += s;
  }

  void r(std::string_view s) {
    if (m() > 0) setto(s);
  }

  void step1ab() {
    if (at(k()) == 's') {
      if (ends("sses")) {
        truncate(k() - 2);
      } else if (ends("ies")) {
        setto("i");
      } else if (at(k() - 1) != 's') {
        truncate(k() - 1);
      }
    }
    if (ends("eed")) {
      if (m() > 0) truncate(k() - 1);
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      truncate(j_);
      if (ends("at")) {
        setto("ate");
      } else if (ends("bl")) {
        setto("ble");
      } else if (ends("iz")) {
        setto("ize");
      } else if (doublec(k())) {
        const char ch = at(k());
        if (ch != 'l' && ch != 's' && ch != 'z') truncate(k() - 1);
      } else {
        j_ = k();
        if (m() == 1 && cvc(k())) b_ += 'e';
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[b_.size() - 1] = 'i';
  }

  void step2() {
    switch (at(k() - 1)) {
      case 'a':
        if (ends("ational")) { r("ate"); break; }
        if (ends("tional")) { r("tion"); break; }
        break;
      case 'c':
        if (ends("enci")) { r("ence"); break; }
        if (ends("anci")) { r("ance"); break; }
        break;
      case 'e':
        if (ends("izer")) { r("ize"); break; }
        break;
      case 'l':
        if (ends("abli")) { r("able"); break; }
        if (ends("alli")) { r("al"); break; }
        if (ends("entli")) { r("ent"); break; }
        if (ends("eli")) { r("e"); break; }
        if (ends("ousli")) { r("ous"); break; }
        break;
      case 'o':
        if (ends("ization")) { r("ize"); break; }
        if (ends("ation")) { r("ate"); break; }
        if (ends("ator")) { r("ate"); break; }
        break;
      case 's':
        if (ends("alism")) { r("al"); break; }
        if (ends("iveness")) { r("ive"); break; }
        if (ends("fulness")) { r("ful"); break; }
        if (ends("ousness")) { r("ous"); break; }
        break;
      case 't':
        if (ends("aliti")) { r("al"); break; }
        if (ends("iviti")) { r("ive"); break; }
        if (ends("biliti")) { r("ble"); break; }
        break;
      default:
        break;
    }
  }

  void step3() {
    switch (at(k())) {
      case 'e':
        if (ends("icate")) { r("ic"); break; }
        if (ends("ative")) { r(""); break; }
        if (ends("alize")) { r("al"); break; }
        break;
      case 'i':
        if (ends("iciti")) { r("ic"); break; }
        break;
      case 'l':
        if (ends("ical")) { r("ic"); break; }
        if (ends("ful")) { r(""); break; }
        break;
      case 's':
        if (ends("ness")) { r(""); break; }
        break;
      default:
        break;
    }
  }

  void step4() {
    switch (at(k() - 1)) {
      case 'a':
        if (ends("al")) break;
        return;
      case 'c':
        if (ends("ance")) break;
        if (ends("ence")) break;
        return;
      case 'e':
        if (ends("er")) break;
        return;
      case 'i':
        if (ends("ic")) break;
        return;
      case 'l':
        if (ends("able")) break;
        if (ends("ible")) break;
        return;
      case 'n':
        if (ends("ant")) break;
        if (ends("ement")) break;
        if (ends("ment")) break;
        if (ends("ent")) break;
        return;
      case 'o':
        if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) break;
        if (ends("ou")) break;
        return;
      case 's':
        if (ends("ism")) break;
        return;
      case 't':
        if (ends("ate")) break;
        if (ends("iti")) break;
        return;
      case 'u':
        if (ends("ous")) break;
        return;
      case 'v':
        if (ends("ive")) break;
        return;
      case 'z':
        if (ends("ize")) break;
        return;
      default:
        return;
    }
    if (m() > 1) truncate(j_);
  }

  void step5() {
    j_ = k();
    if (at(k()) == 'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k() - 1))) truncate(k() - 1);
    }
    j_ = k();
    if (at(k()) == 'l' && doublec(k()) && m() > 1) truncate(k() - 1);
  }

  std::string b_;
  int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

}  // namespace ccdrift
