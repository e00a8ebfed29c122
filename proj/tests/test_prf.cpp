#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <set>

#include "stego/prf.hpp"

using namespace stego;

namespace {
const char* kKeyHexA = "000102030405060708090a0b0c0d0e0f";
const char* kKeyHexB = "ffeeddccbbaa99887766554433221100";
}  // namespace

TEST_CASE("input encoding is fixed-width and round-trips") {
  PrfInput in{PrfDomain::tree, 0x0102030405060708ull, 0x1122334455667788ull, 42};
  auto enc = encode_prf_input(in);
  REQUIRE(enc.size() == 25);
  REQUIRE(enc[0] == 3);
  REQUIRE(enc[1] == 0x01);
  REQUIRE(enc[8] == 0x08);
  REQUIRE(decode_prf_input(enc) == in);
}

TEST_CASE("distinct inputs never collide as byte strings") {
  std::set<std::array<std::uint8_t, 25>> seen;
  for (auto dom : {PrfDomain::stf, PrfDomain::stl, PrfDomain::tree})
    for (std::uint64_t ctr : {0ull, 1ull, 0x100000000ull})
      for (std::uint64_t doc : {0ull, 1ull, 255ull})
        for (std::uint64_t blk : {0ull, 7ull})
          REQUIRE(seen.insert(encode_prf_input({dom, ctr, doc, blk})).second);
}

TEST_CASE("keyed evaluation matches frozen vectors") {
  Prf prf(StegoKey::from_hex(kKeyHexA));
  REQUIRE(prf.uniform64({PrfDomain::stf, 0, 0, 0}) == 0x026a4e5d3169801aull);
  REQUIRE(prf.uniform64({PrfDomain::stf, 5, 7, 0}) == 0x2245f666882d53feull);
  REQUIRE(prf.uniform64({PrfDomain::stl, 0, 123456789, 0}) == 0xb453d1ea8f100cdaull);
  REQUIRE(prf.uniform64({PrfDomain::tree, 2, 13, 4}) == 0x87758b60a0282a2bull);
  REQUIRE(prf.eval_w({PrfDomain::stf, 0, 0, 0}, 4) == 10);
  REQUIRE(prf.eval_w({PrfDomain::stf, 5, 7, 0}, 4) == 14);

  Prf other(StegoKey::from_hex(kKeyHexB));
  REQUIRE(other.uniform64({PrfDomain::stf, 1, 2, 0}) == 0x2f36c1306f29e337ull);
  REQUIRE(other.eval_w({PrfDomain::stf, 1, 2, 0}, 4) == 7);
}

TEST_CASE("free function wrappers forward to the instance") {
  Prf prf(StegoKey::from_hex(kKeyHexA));
  PrfInput in{PrfDomain::stf, 0, 0, 0};
  REQUIRE(prf_uniform64(prf, in) == prf.uniform64(in));
  REQUIRE(prf_eval_w(prf, in, 4) == prf.eval_w(in, 4));
}

TEST_CASE("evaluation is stable across repeats and copies") {
  Prf prf(StegoKey::from_hex(kKeyHexA));
  PrfInput in{PrfDomain::stl, 9, 9, 1};
  auto v = prf.block256(in);
  REQUIRE(prf.block256(in) == v);
  Prf copy(prf);
  REQUIRE(copy.block256(in) == v);
}

TEST_CASE("eval_w masks to the requested width") {
  Prf prf(StegoKey::from_hex(kKeyHexA));
  for (unsigned w = 1; w <= 8; ++w)
    for (std::uint64_t doc = 0; doc < 64; ++doc)
      REQUIRE(prf.eval_w({PrfDomain::stf, 0, doc, 0}, w) < (1u << w));
  REQUIRE_THROWS_AS(prf.eval_w({PrfDomain::stf, 0, 0, 0}, 0), InvalidArgument);
  REQUIRE_THROWS_AS(prf.eval_w({PrfDomain::stf, 0, 0, 0}, 33), InvalidArgument);
}

TEST_CASE("key parsing enforces hex format and minimum length") {
  REQUIRE_THROWS_AS(StegoKey::from_hex("00112233"), InvalidArgument);
  REQUIRE_THROWS_AS(StegoKey::from_hex("zz112233445566778899aabbccddeeff"),
                    InvalidArgument);
  REQUIRE_THROWS_AS(StegoKey::from_hex("0112233445566778899aabbccddeeff"),
                    InvalidArgument);
  REQUIRE(StegoKey::from_hex(kKeyHexA).bytes.size() == 16);
}

TEST_CASE("key file loading reads a hex token") {
  std::string path = "prf_key_test.tmp";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("000102030405060708090a0b0c0d0e0f\n", f);
    std::fclose(f);
  }
  auto k = StegoKey::from_file(path);
  REQUIRE(k.bytes == StegoKey::from_hex(kKeyHexA).bytes);
  std::remove(path.c_str());
  REQUIRE_THROWS_AS(StegoKey::from_file("definitely_missing_key_file"),
                    InvalidArgument);
}

TEST_CASE("keyed symbol function stays within width and is deterministic") {
  KeyedSymbolFunction f(StegoKey::from_hex(kKeyHexA), PrfDomain::stf, 3);
  REQUIRE(f.width() == 3);
  for (std::uint64_t doc = 0; doc < 200; ++doc) {
    auto v = f.eval(7, static_cast<DocumentId>(doc));
    REQUIRE(v < 8);
    REQUIRE(f.eval(7, static_cast<DocumentId>(doc)) == v);
  }
}

TEST_CASE("random function oracle memoizes per input") {
  auto f = random_function_oracle(4, RandomSource(21));
  auto v00 = f.eval(0, 0);
  auto v01 = f.eval(0, 1);
  REQUIRE(v00 < 16);
  REQUIRE(v01 < 16);
  REQUIRE(f.eval(0, 0) == v00);
  REQUIRE(f.eval(0, 1) == v01);
  REQUIRE(f.table_size() == 2);
  f.eval(1, 0);
  REQUIRE(f.table_size() == 3);
}

TEST_CASE("random function oracle output is close to uniform") {
  auto f = random_function_oracle(2, RandomSource(22));
  std::array<int, 4> counts{};
  for (std::uint64_t doc = 0; doc < 40000; ++doc)
    ++counts[f.eval(0, static_cast<DocumentId>(doc))];
  for (int c : counts) REQUIRE(std::abs(c - 10000) < 500);
}
