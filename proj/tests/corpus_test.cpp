#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "generators.h"
#include "mtbl/corpus.h"
#include "mtbl/errors.h"

using namespace mtbl;
using testgen::error_message;

namespace {

Schema wpc_schema() {
  return Schema(std::vector<StreamDecl>{
      {"word", false, Rational(1), ""},
      {"pos", true, Rational(1), "word"},
      {"chunk", true, Rational(1), "word"},
  });
}

Corpus read_text(const std::string& text, const Schema& schema) {
  std::istringstream in(text);
  return read_column_corpus(in, schema);
}

}  // namespace

TEST_CASE("schema validates stream declarations") {
  CHECK_THROWS_AS(Schema(std::vector<StreamDecl>{}), ConfigError);
  // No task stream.
  CHECK_THROWS_AS(Schema({{"w", false, Rational(1), ""}}), ConfigError);
  // No feature stream.
  CHECK_THROWS_AS(Schema({{"t", true, Rational(1), ""}}), ConfigError);
  CHECK_THROWS_AS(Schema({{"w", false, Rational(1), ""},
                          {"w", true, Rational(1), ""}}),
                  ConfigError);
  CHECK_THROWS_AS(Schema({{"a b", false, Rational(1), ""},
                          {"t", true, Rational(1), ""}}),
                  ConfigError);
  CHECK_THROWS_AS(Schema({{"a[0]", false, Rational(1), ""},
                          {"t", true, Rational(1), ""}}),
                  ConfigError);
  CHECK_THROWS_AS(Schema({{"#w", false, Rational(1), ""},
                          {"t", true, Rational(1), ""}}),
                  ConfigError);
  CHECK_THROWS_AS(Schema({{"w", false, Rational(1), ""},
                          {"t", true, Rational(-1), ""}}),
                  ConfigError);
  CHECK_THROWS_AS(Schema({{"w", false, Rational(1), ""},
                          {"t", true, Rational(1), "nope"}}),
                  ConfigError);
  // Conditioning on itself or a later task is rejected.
  CHECK_THROWS_AS(Schema({{"w", false, Rational(1), ""},
                          {"t", true, Rational(1), "t"}}),
                  ConfigError);
  CHECK_THROWS_AS(Schema({{"w", false, Rational(1), ""},
                          {"a", true, Rational(1), "b"},
                          {"b", true, Rational(1), "w"}}),
                  ConfigError);

  Schema ok({{"w", false, Rational(1), ""},
             {"a", true, Rational(2), "w"},
             {"b", true, Rational(1, 2), "a"}});
  CHECK(ok.stream_count() == 3);
  CHECK(ok.task_count() == 2);
  CHECK(ok.task_name(0) == "a");
  CHECK(ok.task_weight(0) == Rational(2));
  CHECK(ok.task_weight(1) == Rational(1, 2));
  CHECK(ok.condition_stream(0) == 0);
  CHECK(ok.condition_stream(1) == 1);
  CHECK(ok.stream_index("b") == 2);
  CHECK(ok.stream_index("zz") == Schema::npos);
  CHECK(ok.task_of_stream(0) == Schema::npos);
  CHECK(ok.task_of_stream(2) == 1);
}

TEST_CASE("schema equality compares resolved conditioning streams") {
  // An empty condition defaults to the first feature stream, so naming it
  // explicitly yields an equal schema.
  Schema implicit({{"w", false, Rational(1), ""}, {"t", true, Rational(1), ""}});
  Schema named({{"w", false, Rational(1), ""}, {"t", true, Rational(1), "w"}});
  CHECK(implicit == named);

  Schema reweighted({{"w", false, Rational(1), ""}, {"t", true, Rational(2), "w"}});
  CHECK_FALSE(implicit == reweighted);
}

TEST_CASE("reads the three column example sentence") {
  Corpus corpus = read_column_corpus_file(std::string(MTBL_TEST_DATA_DIR) + "/table2.col",
                                          wpc_schema());
  REQUIRE(corpus.sentence_count() == 1);
  REQUIRE(corpus.token_count() == 8);
  CHECK(corpus.sentence_begin(0) == 0);
  CHECK(corpus.sentence_end(0) == 8);
  CHECK(corpus.sentence_length(0) == 8);

  CHECK(corpus.gold(0, 0) == "A.P.");
  CHECK(corpus.gold(1, 0) == "NNP");
  CHECK(corpus.gold(2, 0) == "B-NP");
  CHECK(corpus.gold(0, 2) == "currently");
  CHECK(corpus.gold(1, 2) == "RB");
  CHECK(corpus.gold(2, 2) == "B-ADVP");
  CHECK(corpus.gold(0, 7) == ".");
  CHECK(corpus.gold(2, 7) == "O");
}

TEST_CASE("read handles blank lines, tabs and CRLF") {
  Schema schema = wpc_schema();

  Corpus empty = read_text("", schema);
  CHECK(empty.sentence_count() == 0);
  CHECK(empty.token_count() == 0);

  // Leading, trailing and repeated blank lines never create empty sentences.
  Corpus two = read_text("\n\na X B-Y\n\n\n\nb X B-Y\nc X O\n\n", schema);
  REQUIRE(two.sentence_count() == 2);
  CHECK(two.sentence_length(0) == 1);
  CHECK(two.sentence_length(1) == 2);
  CHECK(two.sentence_of(0) == 0);
  CHECK(two.sentence_of(1) == 1);
  CHECK(two.sentence_of(2) == 1);

  Corpus tabs = read_text("a\tX\tB-Y\r\nb\tX\tO\r\n", schema);
  REQUIRE(tabs.sentence_count() == 1);
  CHECK(tabs.gold(0, 1) == "b");
  CHECK(tabs.gold(2, 1) == "O");
}

TEST_CASE("read reports bad input with line numbers") {
  Schema schema = wpc_schema();

  std::string msg = error_message<DataError>(
      [&] { read_text("a NN B-NP\nb NN\n", schema); });
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("expected 3 columns, got 2") != std::string::npos);

  msg = error_message<DataError>(
      [&] { read_text("a NN B-NP\n\nb NN B-NP extra\n", schema); });
  CHECK(msg.find("line 3") != std::string::npos);

  msg = error_message<DataError>([&] { read_text("a \xff\xfe B-NP\n", schema); });
  CHECK(msg.find("not valid UTF-8") != std::string::npos);

  msg = error_message<DataError>([&] { read_text("a _OOB_ B-NP\n", schema); });
  CHECK(msg.find("reserved") != std::string::npos);

  CHECK_THROWS_AS(read_column_corpus_file("/nonexistent/path.col", schema), ConfigError);
}

TEST_CASE("add_sentence validates tokens") {
  Corpus corpus(wpc_schema());
  CHECK_THROWS_AS(corpus.add_sentence({}), DataError);
  CHECK_THROWS_AS(corpus.add_sentence({{"a", "NN"}}), DataError);
  CHECK_THROWS_AS(corpus.add_sentence({{"a", "", "B-NP"}}), DataError);
  CHECK_THROWS_AS(corpus.add_sentence({{"a", "_OOB_", "B-NP"}}), DataError);
  // Failed sentences leave the corpus unchanged.
  CHECK(corpus.sentence_count() == 0);
  corpus.add_sentence({{"a", "NN", "B-NP"}});
  CHECK(corpus.token_count() == 1);
}

TEST_CASE("current layer is explicit and resettable") {
  Corpus corpus = read_text("a NN B-NP\n", wpc_schema());
  CHECK_FALSE(corpus.current_set(0, 0));
  CHECK_THROWS_AS(corpus.current(0, 0), DataError);
  CHECK_THROWS_AS(corpus.require_initialized(), DataError);
  CHECK_THROWS_AS(write_column_corpus(corpus, Layer::kCurrent), DataError);

  corpus.set_current(0, 0, "VB");
  corpus.set_current(1, 0, "O");
  CHECK(corpus.current(0, 0) == "VB");
  corpus.require_initialized();

  // value_id reads gold for features and the current layer for tasks.
  CHECK(corpus.text(corpus.value_id(0, 0)) == "a");
  CHECK(corpus.text(corpus.value_id(1, 0)) == "VB");
  CHECK(corpus.text(corpus.value_id(2, 0)) == "O");

  CHECK(write_column_corpus(corpus, Layer::kCurrent) == "a VB O\n");
  CHECK(write_column_corpus(corpus, Layer::kGold) == "a NN B-NP\n");

  corpus.reset_current();
  CHECK_THROWS_AS(corpus.current(0, 0), DataError);
}

TEST_CASE("write then read is the identity on normalized text") {
  std::string text = "A.P. NNP B-NP\nGreen NNP I-NP\n\n. . O\n";
  Corpus corpus = read_text(text, wpc_schema());
  CHECK(write_column_corpus(corpus, Layer::kGold) == text);
}

TEST_CASE("gold round trip over random corpora") {
  Rng rng(20260817);
  for (int iter = 0; iter < 300; ++iter) {
    size_t tasks = 1 + rng.below(3);
    Schema schema = testgen::flat_schema(tasks);
    Corpus corpus = testgen::random_text_corpus(rng, schema);
    std::string text = write_column_corpus(corpus, Layer::kGold);
    Corpus back = read_text(text, schema);
    REQUIRE(back.sentence_count() == corpus.sentence_count());
    REQUIRE(back.token_count() == corpus.token_count());
    CHECK(write_column_corpus(back, Layer::kGold) == text);
    for (size_t s = 0; s <= corpus.sentence_count(); ++s) {
      REQUIRE(back.sentence_begin(s) == corpus.sentence_begin(s));
    }
    for (size_t st = 0; st < schema.stream_count(); ++st) {
      for (size_t pos = 0; pos < corpus.token_count(); ++pos) {
        REQUIRE(back.gold(st, pos) == corpus.gold(st, pos));
      }
    }
  }
}

TEST_CASE("explodes words to characters") {
  Schema wp({{"word", false, Rational(1), ""}, {"pos", true, Rational(1), "word"}});
  Corpus corpus = read_text("ab NN\nc VB\n\nxyz JJ\n", wp);
  Corpus chars = explode_to_characters(corpus);

  CHECK(chars.schema().stream_count() == 3);
  CHECK(chars.schema().stream_name(0) == "char");
  CHECK(chars.schema().stream_name(1) == "seg");
  CHECK(chars.schema().stream_name(2) == "pos");
  REQUIRE(chars.sentence_count() == 2);
  REQUIRE(chars.token_count() == 6);
  CHECK(write_column_corpus(chars, Layer::kGold) ==
        "a B NN\nb I NN\nc B VB\n\nx B JJ\ny I JJ\nz I JJ\n");
}

TEST_CASE("explosion keeps multibyte characters whole") {
  Schema wp({{"word", false, Rational(1), ""}, {"pos", true, Rational(1), "word"}});
  Corpus corpus = read_text("h\xc3\xa9\xc3\xa9 NN\n", wp);
  Corpus chars = explode_to_characters(corpus);
  REQUIRE(chars.token_count() == 3);
  CHECK(chars.gold(0, 0) == "h");
  CHECK(chars.gold(0, 1) == "\xc3\xa9");
  CHECK(chars.gold(0, 2) == "\xc3\xa9");
  CHECK(chars.gold(1, 0) == "B");
  CHECK(chars.gold(1, 1) == "I");
  CHECK(chars.gold(2, 2) == "NN");
}

TEST_CASE("explosion requires a two column corpus") {
  Corpus corpus = read_text("a NN B-NP\n", wpc_schema());
  CHECK_THROWS_AS(explode_to_characters(corpus), DataError);
}
