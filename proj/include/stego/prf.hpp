#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <openssl/core_names.h>
#include <openssl/evp.h>

#include "stego/common.hpp"
#include "stego/rng.hpp"

namespace stego {

// Secret key material. The key is input only: it must never be logged,
// printed, or serialized into reports.
struct StegoKey {
  std::vector<std::uint8_t> bytes;

  static StegoKey from_hex(const std::string& hex) {
    StegoKey k{stego::from_hex(hex)};
    if (k.bytes.size() < 16)
      throw InvalidArgument("key must be at least 128 bits");
    return k;
  }

  static StegoKey from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open key file");
    std::string hex;
    in >> hex;
    return from_hex(hex);
  }
};

enum class PrfDomain : std::uint8_t { stf = 1, stl = 2, tree = 3 };

// Keyed-function input. The encoding below is injective and fixed-width, so
// distinct logical inputs can never collide as byte strings. `block` indexes
// extra output blocks when a caller needs more than one (tree deviates);
// plain symbol evaluation leaves it 0.
struct PrfInput {
  PrfDomain domain = PrfDomain::stf;
  std::uint64_t ctr = 0;
  std::uint64_t doc = 0;
  std::uint64_t block = 0;

  bool operator==(const PrfInput& o) const {
    return domain == o.domain && ctr == o.ctr && doc == o.doc && block == o.block;
  }
};

inline std::array<std::uint8_t, 25> encode_prf_input(const PrfInput& in) {
  std::array<std::uint8_t, 25> out{};
  out[0] = static_cast<std::uint8_t>(in.domain);
  auto put_be64 = [&](std::size_t at, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
      out[at + static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(v >> (56 - 8 * i));
  };
  put_be64(1, in.ctr);
  put_be64(9, in.doc);
  put_be64(17, in.block);
  return out;
}

inline PrfInput decode_prf_input(const std::array<std::uint8_t, 25>& enc) {
  auto get_be64 = [&](std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | enc[at + static_cast<std::size_t>(i)];
    return v;
  };
  PrfInput in;
  in.domain = static_cast<PrfDomain>(enc[0]);
  in.ctr = get_be64(1);
  in.doc = get_be64(9);
  in.block = get_be64(17);
  return in;
}

// HMAC-SHA256 keyed function family. Evaluation is pure in (key, input);
// the cached MAC context makes an instance single-owner, so concurrent
// callers take one instance each (they are cheap).
class Prf {
 public:
  explicit Prf(StegoKey key) : key_(std::move(key)) {
    ctx_.reset(EVP_MAC_CTX_new(hmac()));
    if (!ctx_) throw StegoError("cannot allocate MAC context");
    char digest[] = "SHA256";
    std::array<OSSL_PARAM, 2> params = {
        OSSL_PARAM_construct_utf8_string("digest", digest, 0),
        OSSL_PARAM_construct_end()};
    if (EVP_MAC_init(ctx_.get(), key_.bytes.data(), key_.bytes.size(), params.data()) != 1)
      throw StegoError("MAC init failed");
  }

  Prf(const Prf& o) : Prf(o.key_) {}
  Prf& operator=(const Prf&) = delete;

  // Full 256-bit output block for the given input. The keyed context stays
  // pristine; every evaluation runs on a duplicate, so repeated inputs give
  // identical outputs regardless of call history.
  std::array<std::uint8_t, 32> block256(const PrfInput& in) const {
    auto msg = encode_prf_input(in);
    std::array<std::uint8_t, 32> out{};
    std::size_t outlen = 0;
    std::unique_ptr<EVP_MAC_CTX, CtxFree> work(EVP_MAC_CTX_dup(ctx_.get()));
    if (!work) throw StegoError("cannot duplicate MAC context");
    if (EVP_MAC_update(work.get(), msg.data(), msg.size()) != 1 ||
        EVP_MAC_final(work.get(), out.data(), &outlen, out.size()) != 1 ||
        outlen != out.size())
      throw StegoError("MAC evaluation failed");
    return out;
  }

  // First 8 output bytes, big-endian.
  std::uint64_t uniform64(const PrfInput& in) const {
    auto blk = block256(in);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | blk[static_cast<std::size_t>(i)];
    return v;
  }

  // Low-order w bits of uniform64, 1 <= w <= 32.
  std::uint32_t eval_w(const PrfInput& in, unsigned w) const {
    if (w < 1 || w > 32) throw InvalidArgument("prf width must be in [1,32]");
    return static_cast<std::uint32_t>(uniform64(in) & ((1ull << w) - 1));
  }

 private:
  // Fetched once per process and shared; EVP_MAC is immutable after fetch.
  static EVP_MAC* hmac() {
    static EVP_MAC* mac = [] {
      EVP_MAC* m = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
      if (!m) throw StegoError("HMAC algorithm unavailable");
      return m;
    }();
    return mac;
  }

  struct CtxFree {
    void operator()(EVP_MAC_CTX* p) const { EVP_MAC_CTX_free(p); }
  };
  StegoKey key_;
  std::unique_ptr<EVP_MAC_CTX, CtxFree> ctx_;
};

inline std::uint64_t prf_uniform64(const Prf& prf, const PrfInput& in) {
  return prf.uniform64(in);
}

inline std::uint32_t prf_eval_w(const Prf& prf, const PrfInput& in, unsigned w) {
  return prf.eval_w(in, w);
}

// w-bit symbol function of (ctr, doc): the object stegosystems evaluate.
// The keyed implementation and the true-random oracle both satisfy it, so
// either can be dropped into an encoder unchanged.
class SymbolFunction {
 public:
  virtual ~SymbolFunction() = default;
  virtual unsigned width() const = 0;
  virtual std::uint32_t eval(std::uint64_t ctr, DocumentId doc) = 0;
};

class KeyedSymbolFunction final : public SymbolFunction {
 public:
  KeyedSymbolFunction(StegoKey key, PrfDomain domain, unsigned w)
      : prf_(std::move(key)), domain_(domain), w_(w) {
    if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  }

  unsigned width() const override { return w_; }

  std::uint32_t eval(std::uint64_t ctr, DocumentId doc) override {
    return prf_.eval_w(PrfInput{domain_, ctr, doc, 0}, w_);
  }

 private:
  Prf prf_;
  PrfDomain domain_;
  unsigned w_;
};

// Lazily-tabulated truly random function. First evaluation of a fresh input
// draws uniformly from the owned RandomSource and is memoized; repeats
// return the memoized value. Table updates are serialized.
class RandomFunctionOracle final : public SymbolFunction {
 public:
  RandomFunctionOracle(unsigned w, RandomSource rng) : rng_(rng), w_(w) {
    if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  }

  unsigned width() const override { return w_; }

  std::uint32_t eval(std::uint64_t ctr, DocumentId doc) override {
    Key k{ctr, doc};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(k);
    if (it != table_.end()) return it->second;
    auto v = static_cast<std::uint32_t>(rng_.bits(w_));
    table_.emplace(k, v);
    return v;
  }

  std::size_t table_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return table_.size();
  }

 private:
  struct Key {
    std::uint64_t ctr;
    std::uint64_t doc;
    bool operator==(const Key& o) const { return ctr == o.ctr && doc == o.doc; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return static_cast<std::size_t>(splitmix64(k.ctr ^ splitmix64(k.doc)));
    }
  };
  mutable std::mutex mu_;
  std::unordered_map<Key, std::uint32_t, KeyHash> table_;
  RandomSource rng_;
  unsigned w_;
};

inline RandomFunctionOracle random_function_oracle(unsigned w, RandomSource rng) {
  return RandomFunctionOracle(w, rng);
}

}  // namespace stego
