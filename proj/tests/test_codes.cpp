#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "stego/codes.hpp"

using namespace stego;

TEST_CASE("repetition code round trips and absorbs one error per group") {
  SymbolBlock msg{{3, 0, 2, 1}, 2};
  SymbolBlock coded = rep_encode(msg, 3);
  REQUIRE(coded.symbols.size() == 12);
  REQUIRE(coded.w == 2);

  // One corrupted copy per group still decodes by plurality.
  SymbolBlock noisy = coded;
  noisy.symbols[1] = 1;
  noisy.symbols[5] = 3;
  noisy.symbols[6] = 0;
  noisy.symbols[11] = 2;
  SymbolBlock back = rep_decode(noisy, 3);
  REQUIRE(back.symbols == msg.symbols);
  REQUIRE(back.w == msg.w);
}

TEST_CASE("plurality ties resolve to the smallest symbol value") {
  SymbolBlock all_distinct{{2, 1, 0}, 2};
  REQUIRE(rep_decode(all_distinct, 3).symbols == std::vector<std::uint32_t>{0});
  SymbolBlock pair_wins{{3, 1, 3}, 2};
  REQUIRE(rep_decode(pair_wins, 3).symbols == std::vector<std::uint32_t>{3});
}

TEST_CASE("repetition parameters are validated") {
  SymbolBlock msg{{1, 0}, 1};
  REQUIRE_THROWS_AS(rep_encode(msg, 2), InvalidArgument);
  REQUIRE_THROWS_AS(rep_encode(msg, 0), InvalidArgument);
  SymbolBlock coded = rep_encode(msg, 3);
  coded.symbols.pop_back();
  REQUIRE_THROWS_AS(rep_decode(coded, 3), InvalidArgument);
  SymbolBlock bad{{2}, 1};
  REQUIRE_THROWS_AS(rep_encode(bad, 3), InvalidArgument);
  SymbolBlock wide{{0}, 33};
  REQUIRE_THROWS_AS(validate_block(wide), InvalidArgument);
}

TEST_CASE("capacity of the induced symmetric channel matches frozen values") {
  CapacityBound c = stf_capacity_bound(2, 8);
  REQUIRE(c.symbol_error_prob == Catch::Approx(0.01171875).epsilon(0));
  REQUIRE(c.exact == Catch::Approx(1.8894428687408612).epsilon(1e-12));
  REQUIRE(c.lower_bound == Catch::Approx(1.84375).epsilon(1e-12));
  REQUIRE(c.assumption_ok);
  REQUIRE(c.exact >= c.lower_bound);

  CapacityBound d = stf_capacity_bound(1, 10);
  REQUIRE(d.exact == Catch::Approx(0.98882618127878047).epsilon(1e-12));
  REQUIRE(d.lower_bound == Catch::Approx(0.9765625).epsilon(1e-12));
  REQUIRE(d.assumption_ok);
}

TEST_CASE("capacity expression flags regimes it does not model") {
  // At w = 4, h = 4 the symbol error probability is 15/16 > 1/2.
  CapacityBound c = stf_capacity_bound(4, 4);
  REQUIRE(c.symbol_error_prob == Catch::Approx(0.9375).epsilon(0));
  REQUIRE(!c.assumption_ok);
  REQUIRE_THROWS_AS(stf_capacity_bound(0, 8), InvalidArgument);
  REQUIRE_THROWS_AS(stf_capacity_bound(1, 0), InvalidArgument);
}
