// Licensed under the Apache License, Version 2.0
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "kmix/kmix.hpp"

using namespace kmix;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitFail = 1, kExitBadInput = 2;

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, BytesView data) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  require(static_cast<bool>(out), "write failed: " + path);
}

Bytes from_hex(const std::string& s) {
  require(s.size() % 2 == 0, "hex pattern must have even length");
  Bytes out;
  for (size_t i = 0; i < s.size(); i += 2) {
    size_t used = 0;
    const int v = std::stoi(s.substr(i, 2), &used, 16);
    require(used == 2, "bad hex digit in pattern");
    out.push_back(static_cast<char>(v));
  }
  return out;
}

json stats_json(const Index& ix) {
  const IndexParams& p = ix.params();
  json j;
  j["kind"] = kind_name(ix.kind());
  j["n"] = ix.text().size();
  j["params"] = {{"k", p.k}, {"mu", p.mu}, {"h", p.h}, {"gamma", p.gamma}, {"tau", p.tau}, {"sigma", p.sigma}};
  if (const ErrataTree* et = ix.errata()) {
    const ErrataStats s = et->stats();
    j["errata"] = {{"tries_per_level", s.tries_per_level},
                   {"terminals_per_level", s.terminals_per_level},
                   {"group_sets", s.group_sets},
                   {"memory_bytes", s.memory_bytes}};
  }
  if (const CompactIndex* c = ix.compact()) {
    const CompactStats s = c->stats();
    j["compact"] = {{"terminals_per_level", s.terminals_per_level},
                    {"explicit_terminals", s.explicit_terminals},
                    {"node_stores", s.node_stores},
                    {"path_stores", s.path_stores},
                    {"node_elements", s.node_elements},
                    {"path_elements", s.path_elements},
                    {"st_rank_bits", s.st_rank_bits},
                    {"path_st_rank_bits", s.path_st_rank_bits},
                    {"iseq_bits", s.mrank_bits},
                    {"memory_bytes", s.memory_bytes}};
  }
  if (const ShortIndex* sh = ix.short_index()) {
    const ShortStats s = sh->stats();
    j["short"] = {{"base_terminals", s.base_terminals},     {"grouped_terminals", s.grouped_terminals},
                  {"sampled_terminals", s.sampled_terminals}, {"list_size", s.list_size},
                  {"triad_bits", s.triad_bits},             {"mytriad_bits", s.mytriad_bits},
                  {"iseq_bits", s.cut_bits},                {"memory_bytes", s.memory_bytes}};
  }
  if (const LongIndex* lg = ix.long_index()) {
    const LongStats s = lg->stats();
    j["long"] = {{"a1", s.a1},         {"a2", s.a2},
                 {"tau_runs", s.tau_runs}, {"roots", s.roots},
                 {"near_intervals", s.near_intervals}, {"join_points", s.join_points},
                 {"memory_bytes", s.memory_bytes}};
  }
  return j;
}

Bytes random_text(std::mt19937_64& rng, size_t n, int sigma) {
  Bytes s(n, 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng() % sigma);
  return s;
}

struct Case {
  IndexKind kind;
  int64_t lo, hi;  // pattern length range
};

// Removes pattern bytes one at a time while the mismatch persists.
Bytes minimize(const Index& ix, Bytes p, int64_t lo, bool wild) {
  auto bad = [&](const Bytes& q) {
    const OccurrenceSet want = wild ? brute_wildcard(ix.text(), q, ix.params().wildcard)
                                    : brute_kmismatch(ix.text(), q, ix.params().k);
    try {
      return ix.query(q) != want;
    } catch (const Error&) {
      return false;
    }
  };
  for (bool again = true; again;) {
    again = false;
    for (size_t i = 0; i < p.size() && static_cast<int64_t>(p.size()) > lo; ++i) {
      Bytes q = p.substr(0, i) + p.substr(i + 1);
      if (bad(q)) {
        p = q;
        again = true;
        break;
      }
    }
  }
  return p;
}

int selftest(int64_t n, int sigma, int k, uint64_t seed, const std::string& suite) {
  require(n >= 4 && sigma >= 1 && sigma <= 26 && k >= 1 && k <= kMaxSubs, "selftest: parameters out of range");
  std::mt19937_64 rng(seed);
  const Bytes text = random_text(rng, static_cast<size_t>(n), sigma);
  bool ok = true;
  if (suite == "oracle" || suite == "all") {
    std::vector<Case> cases{{IndexKind::kErrata, 1, 40}, {IndexKind::kCompact, 1, 40}, {IndexKind::kWild, 1, 40}};
    IndexParams prm;
    prm.k = k;
    if (k >= 2) cases.push_back({IndexKind::kShort, 1, 0});
    const AutoParams ap = auto_params(n, k, sigma);
    const int64_t gamma = std::max<int64_t>(2, std::min<int64_t>(ap.compact_only ? 8 : ap.gamma, n / (k + 1)));
    if (gamma <= n / (k + 1)) cases.push_back({IndexKind::kLong, (k + 1) * gamma, (k + 1) * gamma + 40});
    cases.push_back({IndexKind::kAuto, 1, 80});
    for (Case c : cases) {
      IndexParams p = prm;
      if (c.kind == IndexKind::kLong || c.kind == IndexKind::kAuto) p.gamma = gamma;
      auto ix = Index::build(text, c.kind, p);
      if (c.kind == IndexKind::kShort) c.hi = ix->params().mu;
      c.hi = std::min(c.hi, n);
      if (c.lo > c.hi) continue;
      const bool wild = c.kind == IndexKind::kWild;
      int bad = 0;
      for (int qi = 0; qi < 200; ++qi) {
        const int64_t m = c.lo + static_cast<int64_t>(rng() % (c.hi - c.lo + 1));
        Bytes pat(text.substr(rng() % (n - m + 1), m));
        const int edits = static_cast<int>(rng() % (k + 1));
        for (int e = 0; e < edits; ++e)
          pat[rng() % m] = wild ? p.wildcard : static_cast<char>('a' + rng() % sigma);
        const OccurrenceSet want =
            wild ? brute_wildcard(text, pat, p.wildcard) : brute_kmismatch(text, pat, k);
        if (ix->query(pat) == want) continue;
        ++bad;
        const Bytes small = minimize(*ix, pat, c.lo, wild);
        std::cout << "MISMATCH kind=" << kind_name(c.kind) << " pattern=" << small << "\n";
      }
      std::cout << kind_name(c.kind) << ": " << (bad == 0 ? "ok" : "FAIL") << " (200 queries)\n";
      ok = ok && bad == 0;
    }
  }
  if (suite == "space" || suite == "all") {
    IndexParams prm;
    prm.k = k;
    auto ix = Index::build(text, IndexKind::kCompact, prm);
    std::cout << stats_json(*ix).dump() << "\n";
  }
  return ok ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-mismatch text indexes"};
  app.require_subcommand(1);

  std::string text_path, out_path, kind_str = "compact", index_path, pattern, suite = "all";
  int k = 1;
  int64_t mu = 0, h = 0, gamma = 0, max_n = int64_t{1} << 24, n = 500;
  int sigma = 4;
  uint64_t seed = 1;
  char wildcard = '?';
  bool hex = false, as_json = false;

  auto* build = app.add_subcommand("build", "Build an index file from a text");
  build->set_help_flag("--help", "Print this help message and exit");
  build->add_option("-t,--text", text_path, "Input text file")->required();
  build->add_option("-k", k, "Maximum number of mismatches")->required();
  build->add_option("--index", kind_str, "errata|compact|short|long|wild|auto");
  build->add_option("--mu", mu, "Short-pattern length bound");
  build->add_option("--h", h, "Split of the mismatch budget in the short index");
  build->add_option("--gamma", gamma, "Block length of the long index");
  build->add_option("--wildcard-char", wildcard, "Wildcard byte");
  build->add_option("--max-n", max_n, "Maximum accepted text length");
  build->add_option("-o,--output", out_path, "Output index file")->required();

  auto* query = app.add_subcommand("query", "Query an index file");
  query->add_option("-i,--index", index_path, "Index file")->required();
  query->add_option("-p,--pattern", pattern, "Pattern")->required();
  query->add_flag("--hex", hex, "Pattern is given in hex");
  query->add_flag("--json", as_json, "JSON output");

  auto* stats = app.add_subcommand("stats", "Structure statistics");
  stats->add_option("-i,--index", index_path, "Index file")->required();
  stats->add_flag("--json", as_json, "JSON output");

  auto* self = app.add_subcommand("selftest", "Randomized oracle comparison");
  self->add_option("--n", n, "Text length");
  self->add_option("--sigma", sigma, "Alphabet size");
  self->add_option("--k", k, "Maximum number of mismatches");
  self->add_option("--seed", seed, "Random seed");
  self->add_option("--suite", suite, "oracle|space|all")->check(CLI::IsMember({"oracle", "space", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*build) {
      Bytes text = read_file(text_path);
      require(static_cast<int64_t>(text.size()) <= max_n, "text longer than --max-n");
      IndexParams prm;
      prm.k = k, prm.mu = mu, prm.h = h, prm.gamma = gamma, prm.wildcard = wildcard;
      auto ix = Index::build(std::move(text), parse_kind(kind_str), prm);
      write_file(out_path, serialize(*ix));
      return kExitOk;
    }
    if (*query) {
      auto ix = deserialize(read_file(index_path));
      const Bytes p = hex ? from_hex(pattern) : pattern;
      const OccurrenceSet occ = ix->query(p);
      if (as_json) {
        std::cout << json{{"pattern_len", p.size()}, {"k", ix->params().k}, {"occurrences", occ}}.dump() << "\n";
      } else {
        for (int64_t x : occ) std::cout << x << "\n";
      }
      return kExitOk;
    }
    if (*stats) {
      auto ix = deserialize(read_file(index_path));
      const json j = stats_json(*ix);
      std::cout << (as_json ? j.dump() : j.dump(2)) << "\n";
      return kExitOk;
    }
    if (*self) return selftest(n, sigma, k, seed, suite);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}
