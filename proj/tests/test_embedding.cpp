#include "catch_amalgamated.hpp"
#include "test_util.hpp"

using namespace synadv;

TEST_CASE("embedding file round trip") {
  const Vocabulary vocab({"a", "b", "c"});
  const auto table = gen_synthetic_embeddings(vocab, 4, {{0, 1}, {2}}, 3);
  std::ostringstream out;
  write_embeddings(out, table, vocab);
  std::istringstream in(out.str());
  const auto back = read_embeddings(in, vocab);
  for (TokenId t = 0; t < 3; ++t) {
    REQUIRE(back.has(t));
    for (std::size_t k = 0; k < 4; ++k) CHECK(back.row(t)[k] == table.row(t)[k]);
  }
  CHECK_FALSE(back.has(vocab.oov_id()));
}

TEST_CASE("embedding parse errors name the line") {
  const Vocabulary vocab({"a", "b"});
  std::istringstream in("a 1 2\nb 1\n");
  try {
    read_embeddings(in, vocab);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream bad("a 1 x\n");
  CHECK_THROWS_AS(read_embeddings(bad, vocab), ParseError);
}

TEST_CASE("unknown tokens in an embedding file are skipped") {
  const Vocabulary vocab({"a"});
  std::istringstream in("a 1 2\nzzz 3 4\n");
  const auto t = read_embeddings(in, vocab);
  CHECK(t.has(0));
  CHECK(t.distance(0, 0) == 0.0);
}
