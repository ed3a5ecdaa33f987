#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "relpress/example1.hpp"
#include "relpress/experiments.hpp"
#include "relpress/sft.hpp"

using namespace relpress;

namespace {

Sft golden_mean() {
  return Sft::make({"a", "b"}, {{"a", "a"}, {"a", "b"}, {"b", "a"}});
}

}  // namespace

TEST_CASE("make_sft trims nothing on the golden mean shift") {
  Sft X = golden_mean();
  CHECK(X.size() == 2);
  CHECK(X.removed_symbols().empty());
  CHECK(X.allowed(0, 0));
  CHECK(X.allowed(0, 1));
  CHECK(X.allowed(1, 0));
  CHECK_FALSE(X.allowed(1, 1));
}

TEST_CASE("make_sft trims inessential symbols recursively") {
  Sft X = Sft::make({"1", "2", "3"}, {{"1", "1"}, {"1", "2"}, {"2", "3"}});
  CHECK(X.size() == 1);
  CHECK(X.name(0) == "1");
  // 3 has no successor, then 2 loses its only successor
  REQUIRE(X.removed_symbols().size() == 2);
  CHECK(X.removed_symbols()[0] == "3");
  CHECK(X.removed_symbols()[1] == "2");
}

TEST_CASE("make_sft rejects systems that trim to nothing") {
  CHECK_THROWS(Sft::make({"1", "2"}, {{"1", "2"}}));
}

TEST_CASE("trimming is idempotent") {
  Sft X = Sft::make({"1", "2", "3"}, {{"1", "1"}, {"1", "2"}, {"2", "3"}});
  std::vector<std::pair<std::string, std::string>> edges;
  for (int a = 0; a < X.size(); ++a)
    for (Symbol b : X.successors(a)) edges.push_back({X.name(a), X.name(b)});
  Sft Y = Sft::make(X.names(), edges);
  CHECK(Y == X);
  CHECK(Y.removed_symbols().empty());
}

TEST_CASE("irreducibility") {
  CHECK(golden_mean().irreducible());
  Sft two_loops =
      Sft::make({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "a"}, {"c", "d"}, {"d", "c"}});
  CHECK_FALSE(two_loops.irreducible());
  // library verdict matches the transitive-closure oracle on random systems
  for (std::uint64_t s = 0; s < 25; ++s) {
    RandomInstance inst = random_instance(1000 + s);
    CHECK(inst.code.domain().irreducible() == oracle::all_pairs_reachable(inst.code.domain()));
  }
}

TEST_CASE("example 1 graph is essential and irreducible") {
  FactorCode code = example1_code();
  const Sft& X = code.domain();
  CHECK(X.size() == 5);
  CHECK(X.removed_symbols().empty());
  CHECK(X.irreducible());
  CHECK(oracle::all_pairs_reachable(X));
}

TEST_CASE("blocks enumerates allowed words in lexicographic order") {
  Sft X = golden_mean();
  auto b2 = X.blocks(2);
  REQUIRE(b2.size() == 3);
  CHECK(X.word_name(b2[0].span()) == "aa");
  CHECK(X.word_name(b2[1].span()) == "ab");
  CHECK(X.word_name(b2[2].span()) == "ba");
  CHECK(X.blocks(4).size() == 8);  // Fibonacci F(6)
  Sft full = Sft::make({"0", "1"}, {{"0", "0"}, {"0", "1"}, {"1", "0"}, {"1", "1"}});
  CHECK(full.blocks(3).size() == 8);
  CHECK_THROWS_AS(full.blocks(30), std::length_error);
}

TEST_CASE("block counts satisfy the transfer recurrence") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Sft X = random_instance(2000 + s).code.domain();
    for (int n = 1; n <= 6; ++n) {
      auto bl = X.blocks(n, 2000000);
      CHECK(bl.size() == oracle::block_count_recurrence(X, n));
      for (const auto& w : bl) CHECK(X.valid_word(w.span()));
    }
  }
}

TEST_CASE("word_name and parse_word round-trip, including multi-char names") {
  Sft X = Sft::make({"up", "dn"}, {{"up", "dn"}, {"dn", "up"}, {"up", "up"}});
  Word w = X.parse_word("up,dn,up");
  CHECK(X.word_name(w.span()) == "up,dn,up");
  Sft G = golden_mean();
  CHECK(G.word_name(G.parse_word("aba").span()) == "aba");
  CHECK_THROWS(G.parse_word("abz"));
}

TEST_CASE("factor code preimage blocks") {
  FactorCode code = example1_code();
  const Sft& Y = code.image();
  auto p1 = code.preimage_blocks(Y.parse_word("1222").span());
  CHECK(p1.size() == 3);  // 2^{2^0} + 1
  auto p2 = code.preimage_blocks(Y.parse_word("12221").span());
  REQUIRE(p2.size() == 1);
  CHECK(code.domain().word_name(p2[0].span()) == "12221");

  FactorCode id = FactorCode::identity(golden_mean());
  auto w = id.image().parse_word("aba");
  auto pid = id.preimage_blocks(w.span());
  REQUIRE(pid.size() == 1);
  CHECK(pid[0] == w);
}

TEST_CASE("preimage enumeration matches the brute oracle and projects back") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    RandomInstance inst = random_instance(3000 + s, 5);
    const Sft& Y = inst.code.image();
    for (int n = 1; n <= 5; ++n) {
      for (const auto& v : Y.blocks(n, 100000)) {
        auto fast = inst.code.preimage_blocks(v.span(), 2000000);
        auto brute = oracle::preimage_words(inst.code, v.span());
        REQUIRE(fast.size() == brute.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
          CHECK(fast[i].syms == brute[i]);
          CHECK(inst.code.apply(fast[i].span()) == v);
        }
      }
    }
  }
}

TEST_CASE("higher block recoding: identity at k=1, golden mean at k=2") {
  FactorCode id = FactorCode::identity(golden_mean());
  Recoding r1 = higher_block_recode(id, 1);
  CHECK(r1.recoded.domain() == id.domain());

  Recoding r2 = higher_block_recode(id, 2);
  CHECK(r2.recoded.domain().size() == 3);  // aa, ab, ba
  CHECK(r2.recoded.domain().edge_count() == 5);  // aa->aa,ab; ab->ba; ba->aa,ab
}

TEST_CASE("recoding conjugacy bijects preimage blocks") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    RandomInstance inst = random_instance(4000 + s, 4);
    for (int k = 2; k <= 3; ++k) {
      Recoding r = higher_block_recode(inst.code, k);
      const Sft& Y = inst.code.image();
      for (const auto& v : Y.blocks(k + 2, 100000)) {
        auto orig = inst.code.preimage_blocks(v.span(), 1000000);
        Word rv = r.image_from_original(v.span());
        auto rec = r.recoded.preimage_blocks(rv.span(), 1000000);
        REQUIRE(orig.size() == rec.size());
        std::set<std::vector<Symbol>> mapped;
        for (const auto& rb : rec) mapped.insert(r.domain_to_original(rb.span()).syms);
        for (const auto& ob : orig) CHECK(mapped.count(ob.syms) == 1);
      }
    }
  }
}

TEST_CASE("eventually periodic point windows") {
  FactorCode code = example1_code();
  EventuallyPeriodicPoint y = example1_point(code, 3);
  const Sft& Y = code.image();
  CHECK(Y.word_name(y.window(-3, -1).span()) == "222");
  CHECK(Y.word_name(y.window(0, 4).span()) == "12221");
  CHECK_FALSE(y.purely_periodic());

  Sft G = golden_mean();
  Word ab = G.parse_word("ab");
  EventuallyPeriodicPoint p(G, ab, Word{}, ab, 0);
  CHECK(p.purely_periodic());
  CHECK(G.word_name(p.window(0, 3).span()) == "abab");
  CHECK(G.word_name(p.window(-2, 1).span()) == "abab");
}

TEST_CASE("eventually periodic point validates junctions") {
  Sft G = golden_mean();
  // "bb" is not allowed, so a b-tail cannot repeat
  Word b = G.parse_word("b");
  CHECK_THROWS(EventuallyPeriodicPoint(G, b, Word{}, b, 0));
  // center-tail junction must be allowed: center b then right tail b fails
  Word a = G.parse_word("a");
  CHECK_THROWS(EventuallyPeriodicPoint(G, a, G.parse_word("b"), b, 0));
  CHECK_NOTHROW(EventuallyPeriodicPoint(G, a, G.parse_word("b"), a, 0));
}
