#include <doctest.h>

#include <cctype>
#include <numeric>

#include "ccdrift/lexicon.hpp"

using namespace ccdrift;

namespace {

std::vector<std::string> words(std::initializer_list<const char*> w) { return {w.begin(), w.end()}; }

std::string alnum_lower(std::string_view s) {
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double prop(const PosDistribution& d, Pos p) { return d[p]; }

}  // namespace

TEST_CASE("split_identifier follows camel humps, underscores and digits") {
  CHECK(split_identifier("ueiList") == words({"uei", "List"}));
  CHECK(split_identifier("setSernoOctetSize") == words({"set", "Serno", "Octet", "Size"}));
  CHECK(split_identifier("foo_bar2baz") == words({"foo", "bar", "2", "baz"}));
  CHECK(split_identifier("HTTPServer") == words({"HTTP", "Server"}));
  CHECK(split_identifier("").empty());
  CHECK(split_identifier("__").empty());
}

TEST_CASE("split_identifier pieces rebuild the alphanumeric content") {
  for (const char* id : {"ueiList", "setSernoOctetSize", "foo_bar2baz", "parseHTTPResponse2XX", "x", "A1b2C3",
                         "getURLForID", "snake_case_name", "__init__", "md5Sum"}) {
    std::string joined;
    for (const auto& p : split_identifier(id)) joined += p;
    CHECK(alnum_lower(joined) == alnum_lower(id));
  }
}

TEST_CASE("porter_stem matches the reference stemmer table") {
  // Frozen output of the original-algorithm reference implementation.
  const std::vector<std::pair<const char*, const char*>> table = {
      {"caresses", "caress"}, {"ponies", "poni"}, {"ties", "ti"}, {"caress", "caress"}, {"cats", "cat"},
      {"feed", "feed"}, {"agreed", "agre"}, {"plastered", "plaster"}, {"bled", "bled"}, {"motoring", "motor"},
      {"sing", "sing"}, {"conflated", "conflat"}, {"troubled", "troubl"}, {"sized", "size"}, {"hopping", "hop"},
      {"tanned", "tan"}, {"falling", "fall"}, {"hissing", "hiss"}, {"fizzed", "fizz"}, {"failing", "fail"},
      {"filing", "file"}, {"happy", "happi"}, {"sky", "sky"}, {"relational", "relat"}, {"conditional", "condit"},
      {"rational", "ration"}, {"valenci", "valenc"}, {"hesitanci", "hesit"}, {"digitizer", "digit"},
      {"conformabli", "conform"}, {"radicalli", "radic"}, {"differentli", "differ"}, {"vileli", "vile"},
      {"analogousli", "analog"}, {"vietnamization", "vietnam"}, {"predication", "predic"}, {"operator", "oper"},
      {"feudalism", "feudal"}, {"decisiveness", "decis"}, {"hopefulness", "hope"}, {"callousness", "callous"},
      {"formaliti", "formal"}, {"sensitiviti", "sensit"}, {"sensibiliti", "sensibl"}, {"triplicate", "triplic"},
      {"formative", "form"}, {"formalize", "formal"}, {"electriciti", "electr"}, {"electrical", "electr"},
      {"hopeful", "hope"}, {"goodness", "good"}, {"revival", "reviv"}, {"allowance", "allow"},
      {"inference", "infer"}, {"airliner", "airlin"}, {"gyroscopic", "gyroscop"}, {"adjustable", "adjust"},
      {"defensible", "defens"}, {"irritant", "irrit"}, {"replacement", "replac"}, {"adjustment", "adjust"},
      {"dependent", "depend"}, {"adoption", "adopt"}, {"homologou", "homolog"}, {"communism", "commun"},
      {"activate", "activ"}, {"angulariti", "angular"}, {"homologous", "homolog"}, {"effective", "effect"},
      {"bowdlerize", "bowdler"}, {"probate", "probat"}, {"rate", "rate"}, {"cease", "ceas"},
      {"controll", "control"}, {"roll", "roll"}, {"generalization", "gener"}, {"oscillators", "oscil"},
      {"sizes", "size"}, {"serno", "serno"}, {"initialize", "initi"}, {"octet", "octet"}, {"generator", "gener"},
  };
  for (const auto& [w, s] : table) {
    INFO(w);
    CHECK(porter_stem(w) == s);
  }
}

TEST_CASE("normalize splits, drops stop words and stems") {
  CHECK(normalize("Set the serno sizes", Origin::comment).tokens == words({"set", "serno", "size"}));
  CHECK(normalize("", Origin::comment).empty());
  CHECK(normalize("the a an", Origin::comment).empty());
  CHECK(normalize("generator.setSernoOctetSize(8);", Origin::code).tokens ==
        words({"gener", "set", "serno", "octet", "size", "8"}));
  CHECK(normalize("x", Origin::code).origin == Origin::code);
  for (const auto& t : normalize("The quick brown foxes are jumping over lazy dogs", Origin::comment).tokens) {
    CHECK(!t.empty());
    CHECK(!is_stop_word(t));
  }
}

TEST_CASE("normalize is idempotent") {
  for (const char* text : {"Set the serno sizes", "Initializes the serial number generator for this CA.",
                           "generalization of the oscillators", "conditional relational rationalizations",
                           "Returns the total price including tax.", "hopefulness and decisiveness"}) {
    for (auto origin : {Origin::comment, Origin::code}) {
      const auto once = normalize(text, origin);
      std::string joined;
      for (const auto& t : once.tokens) joined += t + " ";
      CHECK(normalize(joined, origin).tokens == once.tokens);
    }
  }
}

TEST_CASE("stop list is the embedded fixed list") {
  CHECK(stop_words().size() >= 100);
  CHECK(is_stop_word("the"));
  CHECK_FALSE(is_stop_word("serno"));
}

TEST_CASE("pos_distribution tags with the embedded lexicon") {
  const auto d = pos_distribution(TokenSequence{words({"set", "serno", "size"}), Origin::comment});
  CHECK(prop(d, Pos::verb) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(prop(d, Pos::noun) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  double rest = 0;
  for (std::size_t p = 0; p < kPosCount; ++p)
    if (p != static_cast<std::size_t>(Pos::verb) && p != static_cast<std::size_t>(Pos::noun))
      rest += d.proportions[p];
  CHECK(rest == 0.0);

  const auto empty = pos_distribution(TokenSequence{});
  for (double x : empty.proportions) CHECK(x == 0.0);
}

TEST_CASE("pos_distribution proportions from a custom lexicon") {
  const auto tagger = PosTagger::from_tsv("alpha\tnoun\nbeta\tverb\n");
  std::vector<std::string> toks;
  for (int i = 0; i < 5; ++i) toks.push_back("alpha");
  for (int i = 0; i < 15; ++i) toks.push_back("beta");
  const auto d = pos_distribution(TokenSequence{toks, Origin::code}, tagger);
  CHECK(d[Pos::noun] == doctest::Approx(0.25));
  CHECK(d[Pos::verb] == doctest::Approx(0.75));
  CHECK(std::accumulate(d.proportions.begin(), d.proportions.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tagger falls back to suffix rules and nouns") {
  const auto& t = PosTagger::builtin();
  CHECK(t.tag("frobnicating") == Pos::verb);
  CHECK(t.tag("frobnication") == Pos::noun);
  CHECK(t.tag("zzqx") == Pos::noun);
  CHECK(t.tag("42") == Pos::numeral);
}

TEST_CASE("pos_distance is the elementwise absolute difference") {
  PosDistribution a, b;
  a.proportions[static_cast<std::size_t>(Pos::noun)] = 0.25;
  a.proportions[static_cast<std::size_t>(Pos::verb)] = 0.75;
  b.proportions[static_cast<std::size_t>(Pos::noun)] = 0.40;
  b.proportions[static_cast<std::size_t>(Pos::verb)] = 0.60;
  const auto d = pos_distance(a, b);
  CHECK(d[static_cast<std::size_t>(Pos::noun)] == doctest::Approx(0.15).epsilon(1e-12));
  for (double x : pos_distance(a, a)) CHECK(x == 0.0);

  PosDistribution nouns, verbs;
  nouns.proportions[static_cast<std::size_t>(Pos::noun)] = 1;
  verbs.proportions[static_cast<std::size_t>(Pos::verb)] = 1;
  const auto e = pos_distance(nouns, verbs);
  CHECK(e[static_cast<std::size_t>(Pos::noun)] == 1.0);
  CHECK(e[static_cast<std::size_t>(Pos::verb)] == 1.0);
}
