#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"
#include "xenorisk/lexicon/lexicon.hpp"
#include "xenorisk/lexicon/tokenizer.hpp"

using namespace xenorisk;
using namespace xenorisk::lexicon;

namespace {

const std::filesystem::path kData = XENORISK_TEST_DATA_DIR;

std::vector<std::string> toks(std::string_view s) { return tokenize(s).tokens; }

Lexicon lex(const std::vector<std::pair<std::string, std::string>>& entries) {
  Lexicon l("t");
  for (const auto& [c, p] : entries) l.add(c, p);
  return l;
}

}  // namespace

TEST(Tokenize, SpecExamples) {
  EXPECT_EQ(toks("Check https://x.co NOW #maga"), (std::vector<std::string>{"check", "now", "#maga"}));
  EXPECT_TRUE(toks("").empty());
  EXPECT_EQ(toks("ching chang chong!"), (std::vector<std::string>{"ching", "chang", "chong"}));
}

TEST(Tokenize, HandlesApostrophesHyphensAndMentions) {
  EXPECT_EQ(toks("Don't @Someone_1 covid-19 -- www.site.com/x ok"),
            (std::vector<std::string>{"don't", "@someone_1", "covid-19", "ok"}));
  EXPECT_EQ(toks("emoji 😷 gone"), (std::vector<std::string>{"emoji", "gone"}));
}

TEST(Tokenize, OffsetsIncreaseAndStayInSource) {
  const std::string text = "Héllo, WORLD!! #Tag @h x-y http://a.b/c end";
  const auto ts = tokenize(text);
  ASSERT_EQ(ts.tokens.size(), ts.offsets.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_LT(ts.offsets[i].begin, ts.offsets[i].end);
    EXPECT_LE(ts.offsets[i].end, text.size());
    if (i) {
      EXPECT_LE(ts.offsets[i - 1].end, ts.offsets[i].begin);
    }
    EXPECT_EQ(text::to_lower_utf8(text.substr(ts.offsets[i].begin, ts.offsets[i].end - ts.offsets[i].begin)),
              ts.tokens[i]);
  }
}

TEST(Tokenize, IdempotentOnRenderedOutput) {
  std::mt19937 rng(5);
  const std::vector<std::string> pieces{"Hello", "WORLD", "#Tag", "@user", "don't", "x-ray", "!!", "😷", "https://t.co/x",
                                        "Ünïcode", "42", ",", "covid-19", "--", "a'", "'b"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) text += pieces[rng() % pieces.size()] + (rng() % 3 ? " " : "");
    const auto once = toks(text);
    std::string rendered;
    for (const auto& t : once) rendered += t + " ";
    EXPECT_EQ(toks(rendered), once) << text;
  }
}

TEST(Match, PrefixPattern) {
  const auto l = lex({{"nonfluency", "rr*"}});
  EXPECT_EQ(match_categories(tokenize("rrright"), l), (std::map<std::string, std::size_t>{{"nonfluency", 1}}));
}

TEST(Match, EmptyTokensGiveZeros) {
  const auto l = lex({{"a", "x"}, {"b", "y"}});
  EXPECT_EQ(match_categories(tokenize(""), l), (std::map<std::string, std::size_t>{{"a", 0}, {"b", 0}}));
}

TEST(Match, PhrasesNonOverlapping) {
  const auto l = lex({{"slur", "kung flu"}});
  EXPECT_EQ(match_categories(tokenize("kung flu kung flu"), l).at("slur"), 2u);
  const auto ll = lex({{"c", "a a"}});
  EXPECT_EQ(match_categories(tokenize("a a a"), ll).at("c"), 1u);
  EXPECT_EQ(match_categories(tokenize("a a a a"), ll).at("c"), 2u);
}

TEST(Match, LongestPatternWinsAtPosition) {
  const auto l = lex({{"c", "kung"}, {"c", "kung flu"}});
  EXPECT_EQ(match_categories(tokenize("kung flu"), l).at("c"), 1u);
  EXPECT_EQ(match_categories(tokenize("kung fu"), l).at("c"), 1u);
}

TEST(Match, UnionOfDisjointCategoriesKeepsCounts) {
  std::mt19937 rng(11);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "ab", "abc"};
  const auto random_pattern = [&] {
    std::string p = vocab[rng() % vocab.size()];
    if (rng() % 3 == 0) p += " " + vocab[rng() % vocab.size()];
    if (rng() % 4 == 0) p += "*";
    return p;
  };
  for (int trial = 0; trial < 200; ++trial) {
    Lexicon a("a"), b("b");
    for (int i = 0; i < 3; ++i) a.add("c1", random_pattern());
    for (int i = 0; i < 3; ++i) b.add("c2", random_pattern());
    Lexicon both = a;
    both.merge(b);
    std::string text;
    for (int i = 0; i < 15; ++i) text += vocab[rng() % vocab.size()] + " ";
    const auto ts = tokenize(text);
    const auto m = match_categories(ts, both);
    const auto ma = match_categories(ts, a);
    const auto mb = match_categories(ts, b);
    EXPECT_EQ(m.at("c1"), ma.at("c1"));
    EXPECT_EQ(m.at("c2"), mb.at("c2"));
    std::size_t sum = 0;
    for (const auto& [k, v] : m) sum += v;
    EXPECT_EQ(sum, ma.at("c1") + mb.at("c2"));
  }
}

TEST(Match, HashtagBodies) {
  const auto l = lex({{"s", "chinazi"}});
  EXPECT_EQ(match_categories(tokenize("#chinazi"), l).at("s"), 1u);
}

TEST(Slurs, SpecExamples) {
  const auto slurs = load_lexicon(kData / "slurs.lex");
  EXPECT_EQ(slurs.pattern_count(), 33u);
  EXPECT_EQ(find_slurs("that wuflu again", slurs), std::vector<std::string>{"wuflu"});
  EXPECT_TRUE(find_slurs("wuhan flu season", slurs).empty());
  EXPECT_EQ(find_slurs("KUNG FLU #chinazi", slurs), (std::vector<std::string>{"kung flu", "chinazi"}));
  EXPECT_EQ(find_slurs("ching chang chong!", slurs), std::vector<std::string>{"ching chang chong"});
}

TEST(Slurs, DefaultListExcludesJap) {
  const auto slurs = load_lexicon(kData / "slurs.lex");
  EXPECT_TRUE(find_slurs("jap", slurs).empty());
}

TEST(Slurs, CaseInsensitive) {
  const auto slurs = load_lexicon(kData / "slurs.lex");
  for (const std::string s : {"KungFlu is WuFlu", "CHINK", "Ching Chang Chong", "wuFLU #ChiNazi", "nothing"}) {
    EXPECT_EQ(find_slurs(s, slurs), find_slurs(text::to_lower_utf8(s), slurs));
  }
}

TEST(LexiconFile, ParsesAndRejects) {
  std::istringstream ok("# comment\n\ncat\tword\ncat\tphrase of words\nother\tpre*\n");
  const auto l = parse_lexicon(ok, "x");
  EXPECT_EQ(l.category_count(), 2u);
  EXPECT_EQ(l.pattern_count(), 3u);
  std::istringstream no_tab("cat word\n");
  EXPECT_THROW(parse_lexicon(no_tab, "x"), DataError);
  std::istringstream too_long("cat\ta b c d e\n");
  EXPECT_THROW(parse_lexicon(too_long, "x"), DataError);
  Lexicon l2("y");
  EXPECT_THROW(l2.add("c", ""), ValidationError);
  EXPECT_THROW(l2.add("c", "Upper"), ValidationError);
}

TEST(LexiconFile, ShippedListsLoad) {
  EXPECT_EQ(load_lexicon(kData / "covid.lex").pattern_count(), 16u);
  EXPECT_GT(load_lexicon(kData / "liwc_open.lex").category_count(), 0u);
}
