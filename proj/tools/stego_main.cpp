// Command line front end: channel spec files, framed message encode/decode,
// and measurement experiments with byte-reproducible reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <stego/bounds.hpp>
#include <stego/channel.hpp>
#include <stego/codes.hpp>
#include <stego/common.hpp>
#include <stego/enumeration.hpp>
#include <stego/flat_channel.hpp>
#include <stego/harness.hpp>
#include <stego/prf.hpp>
#include <stego/rng.hpp>
#include <stego/stats.hpp>
#include <stego/stf.hpp>
#include <stego/stl.hpp>

namespace {

using nlohmann::ordered_json;

// ----- file helpers -----

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw stego::StegoError("cannot open input file: " + path);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw stego::StegoError("cannot open output file: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw stego::StegoError("short write: " + path);
}

// Binary mode keeps report and spec files byte-exact across platforms.
void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw stego::StegoError("cannot open output file: " + path);
  out << text;
  if (!out) throw stego::StegoError("short write: " + path);
}

// ----- key sourcing -----

constexpr const char* kKeyFileEnv = "STEGO_KEY_FILE";

// Key material flows from flag or file straight into the library; it is
// never echoed, logged, or serialized into reports.
stego::StegoKey resolve_key(const std::string& key_hex, const std::string& key_file) {
  if (!key_hex.empty()) return stego::StegoKey::from_hex(key_hex);
  std::string path = key_file;
  if (path.empty())
    if (const char* env = std::getenv(kKeyFileEnv)) path = env;
  if (path.empty())
    throw stego::InvalidArgument(std::string("no key: pass --key-hex or --key-file, or point ") +
                                 kKeyFileEnv + " at a hex key file");
  return stego::StegoKey::from_file(path);
}

// Experiments fall back to a key derived from the run seed, so runs stay
// reproducible without any secret on the command line.
stego::StegoKey experiment_key(const std::string& key_hex, const std::string& key_file,
                               std::uint64_t seed) {
  if (!key_hex.empty() || !key_file.empty() || std::getenv(kKeyFileEnv) != nullptr)
    return resolve_key(key_hex, key_file);
  stego::RandomSource src = stego::RandomSource(seed).spawn(0x6b65796b65796bULL);
  stego::StegoKey key;
  key.bytes.resize(32);
  for (std::size_t i = 0; i < key.bytes.size(); i += 8) {
    std::uint64_t v = src.next_u64();
    for (std::size_t b = 0; b < 8; ++b)
      key.bytes[i + b] = static_cast<std::uint8_t>(v >> (56 - 8 * b));
  }
  return key;
}

// ----- channel spec files -----

struct LoadedChannel {
  std::string kind;
  std::uint32_t S = 0;
  std::uint32_t H = 0;
  std::unique_ptr<stego::FlatChannel> flat;
  std::unique_ptr<stego::MemorylessChannel> memoryless;

  const stego::ChannelModel& model() const {
    if (flat) return *flat;
    return *memoryless;
  }
  const stego::SupportTestable* support() const { return flat.get(); }
};

LoadedChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw stego::StegoError("cannot open channel spec: " + path);
  ordered_json j = ordered_json::parse(in);
  LoadedChannel lc;
  lc.kind = j.at("kind").get<std::string>();
  if (lc.kind == "flat-pseudorandom") {
    lc.S = j.at("S").get<std::uint32_t>();
    lc.H = j.at("H").get<std::uint32_t>();
    auto seed = stego::FlatChannelSeed::from_hex(j.at("seed_hex").get<std::string>());
    lc.flat = std::make_unique<stego::FlatChannel>(seed, lc.S, lc.H);
  } else if (lc.kind == "memoryless" || lc.kind == "memoryless-empirical") {
    auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
    lc.memoryless = std::make_unique<stego::MemorylessChannel>(
        stego::make_memoryless_empirical(std::move(counts)));
    lc.S = lc.memoryless->alphabet_size();
  } else {
    throw stego::InvalidArgument("unknown channel kind: " + lc.kind);
  }
  return lc;
}

unsigned log2_exact(std::uint64_t v) {
  unsigned h = 0;
  while ((std::uint64_t(1) << h) < v) ++h;
  if ((std::uint64_t(1) << h) != v)
    throw stego::InvalidArgument("value must be a power of two");
  return h;
}

// ----- stegotext framing -----
// File layout: optional 16-byte header (8-byte magic, 8-byte big-endian
// hiddentext bit length), then one decimal document id per line. The header
// lets decode recover the exact message length; without it the caller must
// pass --num-symbols and gets whole symbols back.

constexpr std::array<std::uint8_t, 8> kMagic = {'S', 'T', 'E', 'G', 'O', 'M', 'S', 'G'};

struct StegotextFile {
  bool has_header = false;
  std::uint64_t bitlen = 0;
  std::vector<stego::DocumentId> docs;
};

void write_stegotext(const std::string& path, std::uint64_t bitlen,
                     const std::vector<stego::DocumentId>& docs) {
  std::string text(reinterpret_cast<const char*>(kMagic.data()), kMagic.size());
  for (int b = 0; b < 8; ++b)
    text.push_back(static_cast<char>(static_cast<std::uint8_t>(bitlen >> (56 - 8 * b))));
  for (auto d : docs) {
    text += std::to_string(d);
    text += '\n';
  }
  write_text(path, text);
}

StegotextFile read_stegotext(const std::string& path) {
  auto raw = read_bytes(path);
  StegotextFile f;
  std::size_t off = 0;
  if (raw.size() >= 16 && std::equal(kMagic.begin(), kMagic.end(), raw.begin())) {
    f.has_header = true;
    for (int b = 0; b < 8; ++b) f.bitlen = (f.bitlen << 8) | raw[8 + static_cast<std::size_t>(b)];
    off = 16;
  }
  std::uint64_t value = 0;
  bool in_token = false;
  for (std::size_t i = off; i <= raw.size(); ++i) {
    const char c = i == raw.size() ? '\n' : static_cast<char>(raw[i]);
    if (c >= '0' && c <= '9') {
      value = value * 10 + static_cast<std::uint64_t>(c - '0');
      if (value > std::numeric_limits<stego::DocumentId>::max())
        throw stego::StegoError("document id out of range in " + path);
      in_token = true;
    } else if (c == '\n' || c == '\r' || c == ' ' || c == '\t') {
      if (in_token) {
        f.docs.push_back(static_cast<stego::DocumentId>(value));
        value = 0;
        in_token = false;
      }
    } else {
      throw stego::StegoError("malformed stegotext file: " + path);
    }
  }
  return f;
}

std::vector<std::uint8_t> bits_to_message_bytes(const stego::BitString& bits,
                                                std::uint64_t nbits) {
  if (nbits > bits.nbits)
    throw stego::StegoError("framing header claims more bits than the stegotext carries");
  std::vector<std::uint8_t> out((nbits + 7) / 8, 0);
  for (std::uint64_t i = 0; i < nbits; ++i)
    if (bits.bit(i)) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return out;
}

// ----- report plumbing -----

struct ReportOpts {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
};

void add_report_options(CLI::App* cmd, ReportOpts& ro) {
  cmd->add_option("--seed", ro.seed, "run seed; fixes every random choice")
      ->capture_default_str();
  cmd->add_option("--out", ro.out, "write the report to this path");
  cmd->add_option("--format", ro.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--threads", ro.threads, "worker threads for independent trials")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
}

void flatten_csv(const ordered_json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten_csv(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten_csv(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out += prefix;
    out += ',';
    out += j.dump();
    out += '\n';
  }
}

// Reports carry no timestamps, hostnames, or thread counts: identical inputs
// and run seed give byte-identical files at any --threads value.
int finish_report(const ReportOpts& ro, const ordered_json& report) {
  const std::string name = report.at("experiment").get<std::string>();
  for (const auto& [k, v] : report.at("verdicts").items())
    std::cout << (v.get<bool>() ? "PASS " : "FAIL ") << k << '\n';
  const bool pass = report.at("pass").get<bool>();
  std::cout << "experiment " << name << ": " << (pass ? "PASS" : "FAIL") << '\n';
  if (!ro.out.empty()) {
    std::string payload;
    if (ro.format == "csv") {
      payload = "key,value\n";
      flatten_csv(report, "", payload);
    } else {
      payload = report.dump(2);
      payload += '\n';
    }
    write_text(ro.out, payload);
    std::cout << "wrote " << ro.out << '\n';
  }
  return pass ? 0 : 3;
}

// Index-addressed work queue: each trial owns slot i, so results are
// identical for every thread count.
void parallel_for(std::uint64_t n, unsigned threads,
                  const std::function<void(std::uint64_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (std::uint64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      std::uint64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  unsigned count = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ----- channel subcommands -----

struct ChannelGenOpts {
  std::string kind = "flat-pseudorandom";
  std::uint32_t S = 0;
  std::uint32_t H = 0;
  unsigned seed_bits = 256;
  std::uint64_t seed = 0;
  std::string out;
};

int run_channel_gen(const ChannelGenOpts& o) {
  if (o.kind != "flat-pseudorandom")
    throw stego::InvalidArgument("channel gen supports only kind flat-pseudorandom");
  stego::RandomSource rng(o.seed);
  auto omega = stego::FlatChannelSeed::random(rng, o.seed_bits);
  stego::FlatChannel chan(omega, o.S, o.H);
  ordered_json spec = {{"kind", chan.kind()},
                       {"S", o.S},
                       {"H", o.H},
                       {"seed_hex", omega.to_hex()}};
  write_text(o.out, spec.dump(2) + "\n");
  std::cout << "wrote " << o.out << ": kind=" << chan.kind() << " S=" << o.S
            << " H=" << o.H << " min-entropy=" << stego::min_entropy(chan)
            << " bits\n";
  return 0;
}

int run_channel_inspect(const std::string& spec_path) {
  auto lc = load_channel(spec_path);
  const auto& m = lc.model();
  std::cout << "kind: " << m.kind() << '\n'
            << "alphabet size S: " << m.alphabet_size() << '\n';
  if (lc.flat)
    std::cout << "support size H: " << lc.H << '\n'
              << "seed bits: " << lc.flat->seed().to_hex().size() * 4 << '\n';
  if (lc.memoryless) {
    const auto& counts = lc.memoryless->counts();
    auto nonzero = std::count_if(counts.begin(), counts.end(),
                                 [](std::uint64_t c) { return c > 0; });
    auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t(0));
    std::cout << "support size: " << nonzero << " of " << counts.size() << '\n'
              << "total count mass: " << total << '\n';
  }
  std::cout << "min-entropy: " << stego::min_entropy(m) << " bits\n";
  return 0;
}

int run_channel_member(const std::string& spec_path, std::uint64_t i, std::uint64_t doc) {
  auto lc = load_channel(spec_path);
  bool member = false;
  if (lc.flat) {
    member = doc <= std::numeric_limits<stego::DocumentId>::max() &&
             lc.flat->in_support(i, static_cast<stego::DocumentId>(doc));
  } else {
    const auto& counts = lc.memoryless->counts();
    member = doc < counts.size() && counts[static_cast<std::size_t>(doc)] > 0;
  }
  std::cout << (member ? 1 : 0) << '\n';
  return 0;
}

// ----- encode / decode -----

struct CodecOpts {
  std::string system;
  std::string spec;
  std::string key_hex;
  std::string key_file;
  std::string in;
  std::string out;
  unsigned w = 1;
  std::uint64_t ctr = 0;
  std::uint64_t k = 64;
  unsigned rep = 1;
  std::uint64_t seed = 0;
  std::uint64_t num_symbols = 0;
  bool num_symbols_set = false;
};

int run_encode(const CodecOpts& o) {
  auto lc = load_channel(o.spec);
  auto key = resolve_key(o.key_hex, o.key_file);
  auto payload = read_bytes(o.in);
  stego::BitString m = stego::BitString::from_bytes(payload);
  auto symbols = stego::bits_to_symbols(m, o.w);
  if (o.rep > 1) symbols = stego::rep_encode({symbols, o.w}, o.rep).symbols;

  double h = stego::min_entropy(lc.model());
  if (static_cast<double>(o.w) >= h)
    std::cerr << "warning: symbol width " << o.w
              << " is at or above the channel min-entropy " << h
              << " bits; decode errors are likely\n";

  const bool stf = o.system == "stf";
  stego::KeyedSymbolFunction f(key, stf ? stego::PrfDomain::stf : stego::PrfDomain::stl, o.w);
  stego::RandomSource rng(o.seed);
  std::vector<stego::DocumentId> stegotext;
  if (stf) {
    stego::StfState st{o.ctr};
    stegotext = stego::stf_encode_symbols(f, symbols, stego::History{}, st, lc.model(), rng);
  } else {
    stegotext = stego::stl_encode_symbols(f, symbols, stego::History{}, o.k, lc.model(), rng);
  }
  write_stegotext(o.out, m.nbits, stegotext);
  std::cout << "encoded " << m.nbits << " bits as " << stegotext.size()
            << " documents (" << o.system << ", w=" << o.w;
  if (stf)
    std::cout << ", ctr=" << o.ctr;
  else
    std::cout << ", k=" << o.k;
  if (o.rep > 1) std::cout << ", rep=" << o.rep;
  std::cout << ")\n";
  return 0;
}

int run_decode(const CodecOpts& o) {
  if (!o.spec.empty()) load_channel(o.spec);  // accepted for symmetry; decoding never queries the channel
  auto key = resolve_key(o.key_hex, o.key_file);
  auto st = read_stegotext(o.in);
  if (!st.has_header) {
    if (!o.num_symbols_set)
      throw stego::InvalidArgument("stegotext has no framing header; pass --num-symbols");
    if (st.docs.size() != o.num_symbols)
      throw stego::InvalidArgument("stegotext holds " + std::to_string(st.docs.size()) +
                                   " documents but --num-symbols says " +
                                   std::to_string(o.num_symbols));
  }
  const bool stf = o.system == "stf";
  stego::KeyedSymbolFunction f(key, stf ? stego::PrfDomain::stf : stego::PrfDomain::stl, o.w);
  std::vector<std::uint32_t> symbols;
  if (stf) {
    stego::StfState state{o.ctr};
    symbols = stego::stf_decode_symbols(f, st.docs, state);
  } else {
    symbols = stego::stl_decode_symbols(f, st.docs);
  }
  if (o.rep > 1) symbols = stego::rep_decode({symbols, o.w}, o.rep).symbols;
  stego::BitString bits = stego::symbols_to_bits(symbols, o.w);
  const std::uint64_t nbits = st.has_header ? st.bitlen : bits.nbits;
  write_bytes(o.out, bits_to_message_bytes(bits, nbits));
  std::cout << "decoded " << nbits << " bits (" << (nbits + 7) / 8 << " bytes) from "
            << st.docs.size() << " documents\n";
  return 0;
}

// ----- experiment: reliability -----

struct ReliabilityOpts {
  std::string system = "stf";
  std::string spec;
  std::string key_hex;
  std::string key_file;
  unsigned w = 1;
  std::uint64_t k = 64;
  std::uint64_t l = 8;
  std::uint64_t trials = 1000;
};

int run_reliability(const ReliabilityOpts& o, const ReportOpts& ro) {
  auto lc = load_channel(o.spec);
  auto key = experiment_key(o.key_hex, o.key_file, ro.seed);
  const bool stf = o.system == "stf";
  const double h = stego::min_entropy(lc.model());
  const unsigned h_floor = static_cast<unsigned>(std::floor(h + 1e-9));
  if (h_floor < 1) throw stego::InvalidArgument("channel min-entropy is below one bit");

  std::vector<std::uint8_t> ok(o.trials, 0);
  stego::RandomSource base(ro.seed);
  parallel_for(o.trials, ro.threads, [&](std::uint64_t t) {
    stego::RandomSource r = base.spawn(t);
    stego::KeyedSymbolFunction f(key, stf ? stego::PrfDomain::stf : stego::PrfDomain::stl, o.w);
    std::vector<std::uint32_t> msg(o.l);
    for (auto& m : msg) m = static_cast<std::uint32_t>(r.bits(o.w));
    std::vector<stego::DocumentId> cover;
    std::vector<std::uint32_t> back;
    if (stf) {
      stego::StfState enc_state{t * o.l};
      cover = stego::stf_encode_symbols(f, msg, stego::History{}, enc_state, lc.model(), r);
      stego::StfState dec_state{t * o.l};
      back = stego::stf_decode_symbols(f, cover, dec_state);
    } else {
      cover = stego::stl_encode_symbols(f, msg, stego::History{}, o.k, lc.model(), r);
      back = stego::stl_decode_symbols(f, cover);
    }
    ok[t] = back == msg ? 1 : 0;
  });

  const auto failures = static_cast<std::uint64_t>(
      std::count(ok.begin(), ok.end(), std::uint8_t(0)));
  const double rate = static_cast<double>(failures) / static_cast<double>(o.trials);
  const auto ci = stego::wilson_interval(failures, o.trials);

  // Flooring h weakens (raises) the bound, so the gate stays valid on
  // channels whose min-entropy is not an integer.
  double bound;
  if (stf) {
    const double pe = stego::stf_symbol_error_prob(h_floor, o.w);
    bound = 1.0 - std::pow(1.0 - pe, static_cast<double>(o.l));
  } else {
    bound = stego::stl_unreliability_bound(h_floor, o.w, o.l, o.k);
  }
  bound = std::min(bound, 1.0);
  const double slack =
      3.0 * std::sqrt(std::max(bound * (1.0 - bound), 0.0) * static_cast<double>(o.trials));
  // The +3 floor keeps the gate meaningful when the expected count is a
  // small fraction of one event.
  const double gate = bound * static_cast<double>(o.trials) + slack + 3.0;
  const bool pass = static_cast<double>(failures) <= gate;

  ordered_json rep = {
      {"experiment", "reliability"},
      {"seed", ro.seed},
      {"parameters",
       {{"system", o.system},
        {"channel_kind", lc.kind},
        {"S", lc.S},
        {"H", lc.H},
        {"min_entropy_bits", h},
        {"w", o.w},
        {"k", stf ? std::uint64_t(0) : o.k},
        {"l", o.l},
        {"trials", o.trials}}},
      {"measured",
       {{"failures", failures},
        {"failure_rate", rate},
        {"failure_ci_lo", ci.lo},
        {"failure_ci_hi", ci.hi}}},
      {"bounds",
       {{"h_floor", h_floor}, {"unreliability_bound", bound}, {"failure_gate", gate}}},
      {"verdicts", {{"failures_within_gate", pass}}},
      {"pass", pass}};
  return finish_report(ro, rep);
}

// ----- experiment: error-channel -----

struct ErrorChannelOpts {
  std::uint64_t symbols = 100000;
  unsigned h = 8;
  unsigned w = 2;
  std::uint32_t alphabet_factor = 4;
};

int run_error_channel(const ErrorChannelOpts& o, const ReportOpts& ro) {
  stego::RandomSource rng(ro.seed);
  auto st = stego::stf_error_channel_stats(o.symbols, o.h, o.w, rng, o.alphabet_factor);

  const double sigma = std::sqrt(
      std::max(st.bound_rate * (1.0 - st.bound_rate), 0.0) / static_cast<double>(o.symbols));
  const double rate_gate = st.bound_rate + 3.0 * sigma;
  const bool rate_ok = st.error_rate <= rate_gate;
  const bool shape_tested = st.wrong_offset_hist.size() >= 2 && st.errors >= 100;
  const bool shape_ok = !shape_tested || st.wrong_uniform_p > 0.01;
  const double target = std::exp2(static_cast<double>(o.w));
  const bool mean_tested = o.symbols >= 10000;
  const bool mean_ok = !mean_tested || std::fabs(st.mean_samples / target - 1.0) <= 0.05;
  const bool pass = rate_ok && shape_ok && mean_ok;

  ordered_json rep = {
      {"experiment", "error-channel"},
      {"seed", ro.seed},
      {"parameters",
       {{"symbols", o.symbols},
        {"h", o.h},
        {"w", o.w},
        {"alphabet_factor", o.alphabet_factor}}},
      {"measured",
       {{"errors", st.errors},
        {"error_rate", st.error_rate},
        {"expected_rate", st.expected_rate},
        {"mean_samples", st.mean_samples},
        {"wrong_offset_hist", st.wrong_offset_hist},
        {"wrong_uniform_p", st.wrong_uniform_p},
        {"shape_tested", shape_tested}}},
      {"bounds", {{"bound_rate", st.bound_rate}, {"rate_gate", rate_gate}}},
      {"verdicts",
       {{"error_rate_within_bound", rate_ok},
        {"wrong_symbol_uniform", shape_ok},
        {"mean_samples_near_target", mean_ok}}},
      {"pass", pass}};
  return finish_report(ro, rep);
}

// ----- experiment: security-collision -----

struct CollisionOpts {
  std::uint32_t H = 8;
  unsigned w = 1;
  std::uint64_t k = 4;
};

int run_collision(const CollisionOpts& o, const ReportOpts& ro) {
  const unsigned h = log2_exact(o.H);
  const bool brute = o.H <= 8 && o.w <= 2 && o.k <= 4;
  if (!brute && o.w != 1)
    throw stego::InvalidArgument(
        "joint enumeration needs H <= 8, w <= 2, k <= 4; larger H needs w = 1");

  double max_dev = 0;
  double cross_gap = 0;
  bool crossed = false;
  ordered_json pairs = ordered_json::array();
  for (std::uint32_t m1 = 0; m1 < (1u << o.w); ++m1) {
    for (std::uint32_t m2 = 0; m2 < (1u << o.w); ++m2) {
      double coll;
      if (brute) {
        auto joint = stego::stl_output_exact(o.H, o.w, {m1, m2}, o.k);
        coll = 0;
        for (std::uint32_t s = 0; s < o.H; ++s)
          coll += joint.probs[static_cast<std::size_t>(s) * o.H + s];
        if (o.w == 1) {
          const double rec = stego::stl_collision_exact_symmetric(o.H, o.k, m1, m2);
          cross_gap = std::max(cross_gap, std::fabs(coll - rec));
          crossed = true;
        }
      } else {
        coll = stego::stl_collision_exact_symmetric(o.H, o.k, m1, m2);
      }
      const double dev = std::fabs(coll - 1.0 / static_cast<double>(o.H));
      max_dev = std::max(max_dev, dev);
      pairs.push_back(ordered_json{
          {"m1", m1}, {"m2", m2}, {"collision", coll}, {"deviation", dev}});
    }
  }
  const double bound = stego::stl_insecurity_bound(h, o.w, 2, o.k);
  const bool dev_ok = max_dev <= bound + 1e-12;
  const bool cross_ok = !crossed || cross_gap <= 1e-10;
  const bool pass = dev_ok && cross_ok;

  ordered_json rep = {
      {"experiment", "security-collision"},
      {"seed", ro.seed},
      {"parameters",
       {{"H", o.H},
        {"h", h},
        {"w", o.w},
        {"l", 2},
        {"k", o.k},
        {"method", brute ? "joint-enumeration" : "recurrence"}}},
      {"measured",
       {{"pairs", pairs},
        {"uniform_collision", 1.0 / static_cast<double>(o.H)},
        {"max_deviation", max_dev},
        {"cross_check_max_gap", crossed ? ordered_json(cross_gap) : ordered_json(nullptr)}}},
      {"bounds", {{"insecurity_bound", bound}}},
      {"verdicts", {{"deviation_within_bound", dev_ok}, {"methods_agree", cross_ok}}},
      {"pass", pass}};
  return finish_report(ro, rep);
}

// ----- experiment: query-count -----

struct QueryCountOpts {
  std::string system = "stf";
  std::string spec;
  std::string key_hex;
  std::string key_file;
  unsigned w = 1;
  std::uint64_t k = 64;
  std::uint64_t l = 8;
  std::uint64_t messages = 1000;
};

int run_query_count(const QueryCountOpts& o, const ReportOpts& ro) {
  auto lc = load_channel(o.spec);
  if (!lc.support())
    throw stego::InvalidArgument(
        "query-count needs a support-testable channel spec (flat-pseudorandom)");
  auto key = experiment_key(o.key_hex, o.key_file, ro.seed);
  stego::RandomSource rng(ro.seed);
  const auto sys = o.system == "stf" ? stego::SystemKind::stf : stego::SystemKind::stl;
  auto qr = stego::query_counting_run(sys, key, o.w, o.k, o.l, o.messages, lc.model(),
                                      *lc.support(), lc.S, lc.H, rng);
  const bool no_nonsupport = qr.nonsupport_documents == 0;
  const bool pass = qr.bound_holds && no_nonsupport;

  ordered_json rep = {
      {"experiment", "query-count"},
      {"seed", ro.seed},
      {"parameters",
       {{"system", qr.system},
        {"S", lc.S},
        {"H", lc.H},
        {"w", qr.w},
        {"k", qr.k},
        {"l", qr.symbols_per_message},
        {"messages", qr.messages}}},
      {"measured",
       {{"total_symbols", qr.total_symbols},
        {"total_queries", qr.total_queries},
        {"output_documents", qr.output_documents},
        {"nonsupport_documents", qr.nonsupport_documents},
        {"failed_messages", qr.failed_messages},
        {"mean_queries_per_symbol", qr.mean_queries_per_symbol},
        {"p50", qr.p50},
        {"p90", qr.p90},
        {"p99", qr.p99},
        {"rho_hat", qr.rho_hat},
        {"eps_hat", qr.eps_hat},
        {"R", qr.R}}},
      {"bounds", {{"query_lower_bound", qr.bound}}},
      {"verdicts",
       {{"mean_at_least_bound", qr.bound_holds}, {"no_nonsupport_output", no_nonsupport}}},
      {"pass", pass}};
  return finish_report(ro, rep);
}

// ----- experiment: lemma-tail -----

struct LemmaTailOpts {
  std::uint64_t enum_max_n = 12;
  std::uint64_t enum_max_l = 3;
  std::uint64_t grid_max_n = 20;
  unsigned grid_max_w = 6;
};

int run_lemma_tail(const LemmaTailOpts& o, const ReportOpts& ro) {
  bool enum_ok = true;
  std::uint64_t enum_points = 0;
  for (std::uint64_t N = 1; N <= o.enum_max_n; ++N)
    for (std::uint64_t l = 1; l <= std::min(N, o.enum_max_l); ++l) {
      if (stego::count_low_weight_enumerated(l, N) != stego::count_low_weight(l, N))
        enum_ok = false;
      ++enum_points;
    }

  bool dominates = true;
  std::uint64_t grid_points = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::uint64_t N = 1; N <= o.grid_max_n; ++N)
    for (std::uint64_t l = 1; l <= N; ++l)
      for (unsigned w = 1; w <= o.grid_max_w; ++w) {
        try {
          auto r = stego::lemma_tail_bound(static_cast<unsigned>(N),
                                           static_cast<unsigned>(l), w);
          if (r.exact_fraction > 0)
            min_ratio = std::min(min_ratio, r.bound / r.exact_fraction);
        } catch (const stego::StegoError&) {
          dominates = false;
        }
        ++grid_points;
      }

  ordered_json examples = ordered_json::array();
  for (auto [N, l, w] : {std::array<unsigned, 3>{4, 2, 2},
                         std::array<unsigned, 3>{12, 3, 4},
                         std::array<unsigned, 3>{20, 5, 6}}) {
    auto r = stego::lemma_tail_bound(N, l, w);
    examples.push_back(ordered_json{{"N", N},
                                    {"l", l},
                                    {"w", w},
                                    {"exact_fraction", r.exact_fraction},
                                    {"bound", r.bound}});
  }

  const bool pass = enum_ok && dominates;
  ordered_json rep = {
      {"experiment", "lemma-tail"},
      {"seed", ro.seed},
      {"parameters",
       {{"enum_max_n", o.enum_max_n},
        {"enum_max_l", o.enum_max_l},
        {"grid_max_n", o.grid_max_n},
        {"grid_max_w", o.grid_max_w}}},
      {"measured",
       {{"enumeration_points", enum_points},
        {"grid_points", grid_points},
        {"min_bound_to_exact_ratio", min_ratio},
        {"examples", examples}}},
      {"verdicts",
       {{"enumeration_matches_closed_form", enum_ok}, {"bound_dominates", dominates}}},
      {"pass", pass}};
  return finish_report(ro, rep);
}

// ----- experiment: hybrid -----

struct HybridOpts {
  std::uint32_t support = 8;
  unsigned w = 1;
  std::uint64_t k = 3;
};

int run_hybrid(const HybridOpts& o, const ReportOpts& ro) {
  const unsigned h = log2_exact(o.support);
  const std::uint64_t se4_steps = 64;
  const double uniform =
      1.0 / (static_cast<double>(o.support) * static_cast<double>(o.support));

  double max23 = 0, max_fail_gap = 0, max4 = 0, max_tv = 0, max_fail = 0;
  bool tv_ok = true;
  ordered_json pairs = ordered_json::array();
  for (std::uint32_t m1 = 0; m1 < (1u << o.w); ++m1) {
    for (std::uint32_t m2 = 0; m2 < (1u << o.w); ++m2) {
      const std::vector<std::uint32_t> msg{m1, m2};
      auto ex2 = stego::se2_output_exact(o.support, o.w, msg, o.k);
      auto ex3 = stego::se3_output_exact(o.support, o.w, msg, o.k);
      auto ex4 = stego::se4_output_exact(o.support, o.w, msg, se4_steps);
      auto exl = stego::stl_output_exact(o.support, o.w, msg, o.k);
      for (std::size_t i = 0; i < ex2.probs.size(); ++i) {
        max23 = std::max(max23, std::fabs(ex2.probs[i] - ex3.probs[i]));
        max4 = std::max(max4, std::fabs(ex4.probs[i] - uniform));
      }
      max_fail_gap = std::max(max_fail_gap, std::fabs(ex2.fail_prob - ex3.fail_prob));
      const double tv = stego::tv_distance(exl.probs, ex4.probs);
      max_tv = std::max(max_tv, tv);
      max_fail = std::max(max_fail, ex2.fail_prob);
      if (tv > ex2.fail_prob + 1e-9) tv_ok = false;
      pairs.push_back(ordered_json{
          {"m1", m1}, {"m2", m2}, {"fail_prob", ex2.fail_prob}, {"tv_stl_se4", tv}});
    }
  }
  const double fail_bound = stego::se2_fail_bound(h, o.w, 2, o.k);
  const bool eq23 = max23 <= 1e-9 && max_fail_gap <= 1e-9;
  const bool eq4 = max4 <= 1e-9;
  const bool fail_ok = max_fail <= fail_bound + 1e-12;
  const bool pass = eq23 && eq4 && tv_ok && fail_ok;

  ordered_json rep = {
      {"experiment", "hybrid"},
      {"seed", ro.seed},
      {"parameters",
       {{"support", o.support},
        {"h", h},
        {"w", o.w},
        {"l", 2},
        {"k", o.k},
        {"se4_steps", se4_steps}}},
      {"measured",
       {{"max_se2_se3_gap", max23},
        {"max_fail_gap", max_fail_gap},
        {"max_se4_channel_gap", max4},
        {"max_tv_stl_se4", max_tv},
        {"max_fail_prob", max_fail},
        {"pairs", pairs}}},
      {"bounds", {{"se2_fail_bound", fail_bound}}},
      {"verdicts",
       {{"se2_equals_se3", eq23},
        {"se4_matches_channel", eq4},
        {"tv_within_fail_prob", tv_ok},
        {"fail_within_bound", fail_ok}}},
      {"pass", pass}};
  return finish_report(ro, rep);
}

// ----- experiment: bias -----

struct BiasOpts {
  unsigned h = 6;
  unsigned w = 2;
  std::uint64_t l = 4;
  std::uint64_t seeds = 100;
  std::uint64_t mc_trials = 1000;
};

int run_bias(const BiasOpts& o, const ReportOpts& ro) {
  std::vector<stego::BiasExperimentReport> reps(o.seeds);
  stego::RandomSource base(ro.seed);
  parallel_for(o.seeds, ro.threads, [&](std::uint64_t s) {
    stego::RandomSource r = base.spawn(s);
    reps[s] = stego::public_hash_bias_experiment(o.h, o.w, o.l, o.mc_trials, r);
  });

  std::vector<double> biases, lfold, sqrtl;
  biases.reserve(o.seeds);
  for (const auto& r : reps) {
    biases.push_back(r.exact_bias_max);
    lfold.push_back(r.lfold_tv_exact);
    sqrtl.push_back(r.sqrt_l_times_tv);
  }
  const double med = median_of(biases);
  const double predicted =
      std::exp2(0.5 * (static_cast<double>(o.w) - static_cast<double>(o.h)));
  const double ratio = med / predicted;
  // Order-of-magnitude claim: the window is inclusive on both edges.
  const bool pass = med >= predicted / 4.0 && med <= predicted * 4.0;

  ordered_json rep = {
      {"experiment", "bias"},
      {"seed", ro.seed},
      {"parameters",
       {{"h", o.h},
        {"w", o.w},
        {"l", o.l},
        {"seeds", o.seeds},
        {"mc_trials", o.mc_trials}}},
      {"measured",
       {{"median_bias", med},
        {"ratio_to_predicted", ratio},
        {"median_lfold_tv_exact", median_of(lfold)},
        {"median_sqrt_l_times_tv", median_of(sqrtl)},
        {"per_seed_bias", biases}}},
      {"bounds", {{"predicted_bias", predicted}, {"factor", 4.0}}},
      {"verdicts", {{"median_within_factor_4", pass}}},
      {"pass", pass}};
  return finish_report(ro, rep);
}

// ----- experiment: bounds -----

struct BoundsOpts {
  unsigned h = 8;
  unsigned w = 1;
  std::uint64_t l = 2;
  std::uint64_t k = 16;
  std::uint64_t N = 0;
  double rho = 0;
  double eps = 0;
  double R = 1;
  double prf_terms = 0;
};

int run_bounds(const BoundsOpts& o, const ReportOpts& ro) {
  ordered_json b;
  std::ostringstream lines;
  lines << std::setprecision(10);
  auto put = [&](const char* name, double v) {
    b[name] = v;
    lines << name << " = " << v << '\n';
  };

  put("stl_insecurity_bound", stego::stl_insecurity_bound(o.h, o.w, o.l, o.k));
  put("se2_fail_bound", stego::se2_fail_bound(o.h, o.w, o.l, o.k));
  put("stl_unreliability_bound", stego::stl_unreliability_bound(o.h, o.w, o.l, o.k));
  put("stf_symbol_error_prob", stego::stf_symbol_error_prob(o.h, o.w));
  put("stf_symbol_error_bound",
      std::exp2(static_cast<double>(o.w) - static_cast<double>(o.h)));
  put("stateless_stf_unreliability_bound",
      stego::stateless_stf_unreliability_bound(o.h, o.w, o.l));
  try {
    put("bloom_bits_per_entry", stego::bloom_bits_per_entry(o.h, o.w, o.l));
  } catch (const stego::StegoError&) {
    b["bloom_bits_per_entry"] = nullptr;
    lines << "bloom_bits_per_entry = n/a (entropy budget not positive)\n";
  }
  const auto cap = stego::stf_capacity_bound(o.w, o.h);
  put("capacity_exact_bits", cap.exact);
  put("capacity_lower_bound_bits", cap.lower_bound);
  b["capacity_assumption_ok"] = cap.assumption_ok;
  lines << "capacity_assumption_ok = " << (cap.assumption_ok ? "true" : "false") << '\n';
  put("query_lower_bound", stego::lower_bound_queries(o.w, o.rho, o.eps, o.R));
  put("query_lower_bound_prf_adjusted",
      stego::lower_bound_queries_bounded(o.w, o.rho, o.eps, o.R, o.prf_terms));
  if (o.N > 0) {
    if (o.N < o.l) throw stego::InvalidArgument("--N must be at least --l");
    const auto count = stego::count_low_weight(o.l, o.N);
    b["count_low_weight"] = count;
    lines << "count_low_weight = " << count << '\n';
    auto lt = stego::lemma_tail_bound(static_cast<unsigned>(o.N),
                                      static_cast<unsigned>(o.l), o.w);
    put("lemma_exact_fraction", lt.exact_fraction);
    put("lemma_tail_bound", lt.bound);
  }
  std::cout << lines.str();

  ordered_json params = {{"h", o.h}, {"w", o.w}, {"l", o.l}, {"k", o.k},
                         {"rho", o.rho}, {"eps", o.eps}, {"R", o.R},
                         {"prf_terms", o.prf_terms}};
  if (o.N > 0) params["N"] = o.N;
  ordered_json rep = {{"experiment", "bounds"},
                      {"seed", ro.seed},
                      {"parameters", params},
                      {"bounds", b},
                      {"verdicts", {{"computed", true}}},
                      {"pass", true}};
  return finish_report(ro, rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flat-channel stegosystem toolkit"};
  // The default -h short flag would shadow the --h entropy option below.
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  int rc = 0;

  // channel
  auto* channel = app.add_subcommand("channel", "channel spec files");
  channel->require_subcommand(1);

  ChannelGenOpts cg;
  auto* gen = channel->add_subcommand("gen", "generate a channel spec file");
  gen->add_option("--kind", cg.kind, "channel kind")->capture_default_str();
  gen->add_option("--S", cg.S, "alphabet size")->required();
  gen->add_option("--H", cg.H, "per-index support size")->required();
  gen->add_option("--seed-bits", cg.seed_bits, "channel seed length in bits")
      ->capture_default_str()
      ->check(CLI::Range(8u, 4096u));
  gen->add_option("--seed", cg.seed, "generator seed for the channel seed bytes")
      ->capture_default_str();
  gen->add_option("--out", cg.out, "spec file to write")->required();
  gen->callback([&] { rc = run_channel_gen(cg); });

  std::string inspect_spec;
  auto* inspect = channel->add_subcommand("inspect", "summarize a channel spec");
  inspect->add_option("--spec", inspect_spec, "channel spec file")
      ->required()
      ->check(CLI::ExistingFile);
  inspect->callback([&] { rc = run_channel_inspect(inspect_spec); });

  std::string member_spec;
  std::uint64_t member_i = 1;
  std::uint64_t member_doc = 0;
  auto* member = channel->add_subcommand("member", "support membership test; prints 0 or 1");
  member->add_option("--spec", member_spec, "channel spec file")
      ->required()
      ->check(CLI::ExistingFile);
  member->add_option("--i", member_i, "history length index, 1-based")
      ->required()
      ->check(CLI::PositiveNumber);
  member->add_option("--doc", member_doc, "document id")->required();
  member->callback([&] { rc = run_channel_member(member_spec, member_i, member_doc); });

  // encode
  CodecOpts enc;
  auto* encode = app.add_subcommand("encode", "embed a message file into stegotext");
  encode->add_option("--system", enc.system, "stegosystem")
      ->required()
      ->check(CLI::IsMember({"stf", "stl"}));
  encode->add_option("--spec", enc.spec, "channel spec file")
      ->required()
      ->check(CLI::ExistingFile);
  encode->add_option("--key-hex", enc.key_hex, "secret key as hex, at least 32 digits");
  encode->add_option("--key-file", enc.key_file, "file holding the key as hex")
      ->check(CLI::ExistingFile);
  encode->add_option("--w", enc.w, "hiddentext symbol width in bits")
      ->required()
      ->check(CLI::Range(1u, 32u));
  encode->add_option("--ctr", enc.ctr, "starting counter (stf)")->capture_default_str();
  encode->add_option("--k", enc.k, "per-symbol draw budget (stl)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  encode->add_option("--rep", enc.rep, "repetition code factor, odd")->capture_default_str();
  encode->add_option("--seed", enc.seed, "sampling seed")->capture_default_str();
  encode->add_option("--in", enc.in, "message file")->required()->check(CLI::ExistingFile);
  encode->add_option("--out", enc.out, "stegotext file to write")->required();
  encode->callback([&] { rc = run_encode(enc); });

  // decode
  CodecOpts dec;
  auto* decode = app.add_subcommand("decode", "recover a message file from stegotext");
  decode->add_option("--system", dec.system, "stegosystem")
      ->required()
      ->check(CLI::IsMember({"stf", "stl"}));
  decode->add_option("--spec", dec.spec,
                     "channel spec file; accepted for symmetry, decoding never queries it")
      ->check(CLI::ExistingFile);
  decode->add_option("--key-hex", dec.key_hex, "secret key as hex, at least 32 digits");
  decode->add_option("--key-file", dec.key_file, "file holding the key as hex")
      ->check(CLI::ExistingFile);
  decode->add_option("--w", dec.w, "hiddentext symbol width in bits")
      ->required()
      ->check(CLI::Range(1u, 32u));
  decode->add_option("--ctr", dec.ctr, "starting counter (stf)")->capture_default_str();
  decode->add_option("--k", dec.k, "per-symbol draw budget (stl); unused by decode")
      ->capture_default_str();
  decode->add_option("--rep", dec.rep, "repetition code factor, odd")->capture_default_str();
  auto* num_symbols_opt = decode->add_option(
      "--num-symbols", dec.num_symbols,
      "document count, required when the stegotext has no framing header");
  decode->add_option("--in", dec.in, "stegotext file")->required()->check(CLI::ExistingFile);
  decode->add_option("--out", dec.out, "message file to write")->required();
  decode->callback([&] {
    dec.num_symbols_set = num_symbols_opt->count() > 0;
    rc = run_decode(dec);
  });

  // experiment
  auto* experiment =
      app.add_subcommand("experiment", "measurement runs with pass/fail verdicts");
  experiment->require_subcommand(1);

  ReliabilityOpts rel;
  ReportOpts rel_ro;
  auto* e_rel = experiment->add_subcommand("reliability",
                                           "message round-trip failure rate vs bound");
  e_rel->add_option("--system", rel.system, "stegosystem")
      ->required()
      ->check(CLI::IsMember({"stf", "stl"}));
  e_rel->add_option("--spec", rel.spec, "channel spec file")
      ->required()
      ->check(CLI::ExistingFile);
  e_rel->add_option("--key-hex", rel.key_hex, "secret key as hex");
  e_rel->add_option("--key-file", rel.key_file, "file holding the key as hex")
      ->check(CLI::ExistingFile);
  e_rel->add_option("--w", rel.w, "symbol width in bits")
      ->required()
      ->check(CLI::Range(1u, 16u));
  e_rel->add_option("--k", rel.k, "per-symbol draw budget (stl)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  e_rel->add_option("--l", rel.l, "symbols per message")
      ->required()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(4096)));
  e_rel->add_option("--trials", rel.trials, "messages to round-trip")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(100), std::uint64_t(100000000)));
  add_report_options(e_rel, rel_ro);
  e_rel->callback([&] { rc = run_reliability(rel, rel_ro); });

  ErrorChannelOpts ec;
  ReportOpts ec_ro;
  auto* e_ec = experiment->add_subcommand(
      "error-channel", "per-symbol error rate and wrong-symbol shape of the stateful encoder");
  e_ec->add_option("--symbols", ec.symbols, "symbols to encode")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(100000000)));
  e_ec->add_option("--h", ec.h, "channel min-entropy in bits")
      ->capture_default_str()
      ->check(CLI::Range(1u, 16u));
  e_ec->add_option("--w", ec.w, "symbol width in bits")
      ->capture_default_str()
      ->check(CLI::Range(1u, 8u));
  e_ec->add_option("--alphabet-factor", ec.alphabet_factor, "alphabet size as multiple of H")
      ->capture_default_str()
      ->check(CLI::Range(1u, 1024u));
  add_report_options(e_ec, ec_ro);
  e_ec->callback([&] { rc = run_error_channel(ec, ec_ro); });

  CollisionOpts col;
  ReportOpts col_ro;
  auto* e_col = experiment->add_subcommand(
      "security-collision", "exact two-symbol collision probability vs insecurity bound");
  e_col->add_option("--H", col.H, "support size, power of two")
      ->capture_default_str()
      ->check(CLI::Range(2u, 65536u));
  e_col->add_option("--w", col.w, "symbol width in bits")
      ->capture_default_str()
      ->check(CLI::Range(1u, 2u));
  e_col->add_option("--k", col.k, "per-symbol draw budget")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(64)));
  add_report_options(e_col, col_ro);
  e_col->callback([&] { rc = run_collision(col, col_ro); });

  QueryCountOpts qc;
  ReportOpts qc_ro;
  auto* e_qc = experiment->add_subcommand(
      "query-count", "instrumented channel queries per symbol vs the lower bound");
  e_qc->add_option("--system", qc.system, "stegosystem")
      ->required()
      ->check(CLI::IsMember({"stf", "stl"}));
  e_qc->add_option("--spec", qc.spec, "channel spec file, flat-pseudorandom")
      ->required()
      ->check(CLI::ExistingFile);
  e_qc->add_option("--key-hex", qc.key_hex, "secret key as hex");
  e_qc->add_option("--key-file", qc.key_file, "file holding the key as hex")
      ->check(CLI::ExistingFile);
  e_qc->add_option("--w", qc.w, "symbol width in bits")
      ->required()
      ->check(CLI::Range(1u, 8u));
  e_qc->add_option("--k", qc.k, "per-symbol draw budget (stl)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  e_qc->add_option("--l", qc.l, "symbols per message")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(4096)));
  e_qc->add_option("--messages", qc.messages, "messages to encode")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(100000000)));
  add_report_options(e_qc, qc_ro);
  e_qc->callback([&] { rc = run_query_count(qc, qc_ro); });

  LemmaTailOpts lt;
  ReportOpts lt_ro;
  auto* e_lt = experiment->add_subcommand(
      "lemma-tail", "low-weight counting: enumeration vs closed form vs tail bound");
  e_lt->add_option("--enum-max-n", lt.enum_max_n, "enumeration grid: largest N")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(30)));
  e_lt->add_option("--enum-max-l", lt.enum_max_l, "enumeration grid: largest l")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(30)));
  e_lt->add_option("--grid-max-n", lt.grid_max_n, "inequality grid: largest N")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(62)));
  e_lt->add_option("--grid-max-w", lt.grid_max_w, "inequality grid: largest w")
      ->capture_default_str()
      ->check(CLI::Range(1u, 16u));
  add_report_options(e_lt, lt_ro);
  e_lt->callback([&] { rc = run_lemma_tail(lt, lt_ro); });

  HybridOpts hy;
  ReportOpts hy_ro;
  auto* e_hy = experiment->add_subcommand(
      "hybrid", "exact hybrid-chain equalities and the fail-probability bound");
  e_hy->add_option("--support", hy.support, "support size, power of two")
      ->capture_default_str()
      ->check(CLI::Range(2u, 8u));
  e_hy->add_option("--w", hy.w, "symbol width in bits")
      ->capture_default_str()
      ->check(CLI::Range(1u, 2u));
  e_hy->add_option("--k", hy.k, "per-symbol draw budget")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(4)));
  add_report_options(e_hy, hy_ro);
  e_hy->callback([&] { rc = run_hybrid(hy, hy_ro); });

  BiasOpts bi;
  ReportOpts bi_ro;
  auto* e_bi = experiment->add_subcommand(
      "bias", "public-hash per-symbol bias across hash seeds vs the predicted scale");
  e_bi->add_option("--h", bi.h, "channel min-entropy in bits")
      ->capture_default_str()
      ->check(CLI::Range(1u, 14u));
  e_bi->add_option("--w", bi.w, "symbol width in bits")
      ->capture_default_str()
      ->check(CLI::Range(1u, 3u));
  e_bi->add_option("--l", bi.l, "symbols per message for the l-fold distance")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(32)));
  e_bi->add_option("--seeds", bi.seeds, "hash seeds to sample")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(100000)));
  e_bi->add_option("--mc-trials", bi.mc_trials, "Monte Carlo trials per seed")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t(100), std::uint64_t(100000000)));
  add_report_options(e_bi, bi_ro);
  e_bi->callback([&] { rc = run_bias(bi, bi_ro); });

  BoundsOpts bo;
  ReportOpts bo_ro;
  auto* e_bo = experiment->add_subcommand("bounds", "closed-form bound calculators");
  e_bo->add_option("--h", bo.h, "channel min-entropy in bits")
      ->capture_default_str()
      ->check(CLI::Range(1u, 60u));
  e_bo->add_option("--w", bo.w, "symbol width in bits")
      ->capture_default_str()
      ->check(CLI::Range(1u, 30u));
  e_bo->add_option("--l", bo.l, "symbols per message")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  e_bo->add_option("--k", bo.k, "per-symbol draw budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  e_bo->add_option("--N", bo.N, "stegotext document count for the counting lemma");
  e_bo->add_option("--rho", bo.rho, "unreliability input to the query bound")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  e_bo->add_option("--eps", bo.eps, "insecurity input to the query bound")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  e_bo->add_option("--R", bo.R, "alphabet-to-complement ratio S/(S-H)")
      ->capture_default_str()
      ->check(CLI::Range(1.0, 1e9));
  e_bo->add_option("--prf-terms", bo.prf_terms, "distinguisher slack for the adjusted bound")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  add_report_options(e_bo, bo_ro);
  e_bo->callback([&] { rc = run_bounds(bo, bo_ro); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const stego::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
