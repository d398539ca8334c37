#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "padicspec/construct_verify.hpp"
#include "padicspec/cyclic_group.hpp"
#include "padicspec/dsl.hpp"
#include "padicspec/measures.hpp"
#include "padicspec/serialize.hpp"
#include "padicspec/set_model.hpp"

namespace padicspec::cli {

enum class Command { analyze, classify, enumerate, verify, tree, measure, oracle };
enum class Format { json, ndjson, dot, text };

/// Exit codes: 0 verified or true, 1 falsified, 2 usage or parse error.
enum Exit : int { ok = 0, falsified = 1, usage = 2 };

struct RunConfig {
  Command command = Command::analyze;

  // Set input: inline DSL, a file path, or "-" for stdin. Exactly one.
  std::optional<std::string> inline_text;
  std::optional<std::string> file;

  Format format = Format::json;
  bool oracle = false;
  unsigned jobs = 1;
  std::uint64_t seed = 0;

  std::uint64_t p = 2;
  unsigned gamma = 1;
  std::vector<std::string> sets;               // classify: comma-separated digit lists
  std::optional<std::vector<unsigned>> I;      // enumerate: T_{I,J} mode
  std::optional<std::uint64_t> limit;          // enumerate: stop after this many
  std::optional<std::string> spectrum;         // verify: JSON, @file, or "canonical"
  std::optional<std::string> complement;       // verify: JSON, @file, or "canonical"
  bool certificate = false;
  std::string measure_spec;                    // measure: JSON or preset name
  std::optional<unsigned> verify_gamma0;       // measure
  std::optional<unsigned> tree_level;          // tree: draw at this level (>= gamma)
  std::uint64_t samples = 0;                   // oracle: 0 means exhaustive
};

/// Default worker count from PADICSPEC_JOBS, else 1.
inline unsigned default_jobs() {
  if (const char* env = std::getenv("PADICSPEC_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  return read_all(f);
}

inline std::string set_text(const RunConfig& cfg, std::istream& in) {
  if (cfg.inline_text.has_value() == cfg.file.has_value())
    throw UsageError("give exactly one set source: inline text, --file PATH, or '-' for stdin");
  if (cfg.file) return read_file(*cfg.file);
  if (*cfg.inline_text == "-") return read_all(in);
  return *cfg.inline_text;
}

// "@path" reads a file; anything else is literal JSON.
inline json json_arg(const std::string& arg) {
  const std::string text = (!arg.empty() && arg[0] == '@') ? read_file(arg.substr(1)) : arg;
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::vector<std::uint64_t> parse_digits(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw UsageError("empty entry in digit list '" + text + "'");
    const std::string tok = item.substr(b, e - b + 1);
    if (tok.find_first_not_of("0123456789") != std::string::npos) throw UsageError("bad digit '" + tok + "'");
    out.push_back(std::stoull(tok));
  }
  if (out.empty()) throw UsageError("empty digit list");
  return out;
}

inline void emit(std::ostream& out, const json& j, Format f) {
  out << (f == Format::json ? j.dump(2) : j.dump()) << '\n';
}

// Classifies a batch in parallel and writes NDJSON in input order.
inline bool classify_batch(const std::vector<DigitSet>& batch, const RunConfig& cfg, std::ostream& out,
                           std::ostream& err, bool& all_spectral) {
  std::vector<std::optional<Verdict>> verdicts(batch.size());
  parallel_for(batch.size(), cfg.jobs, [&](std::size_t i) { verdicts[i] = classify(batch[i], cfg.oracle); });
  bool consistent = true;
  for (const auto& v : verdicts) {
    out << to_json(*v).dump() << '\n';
    if (!v->consistent) {
      consistent = false;
      err << "disagreement: " << v->dump() << '\n';
    }
    all_spectral = all_spectral && v->spectral;
  }
  return consistent;
}

constexpr std::size_t kBatch = 4096;

inline int run_analyze(const RunConfig& cfg, std::istream& in, std::ostream& out) {
  const CompactOpenSet omega = parse_set(set_text(cfg, in));
  const json j = analyze_json(omega);
  emit(out, j, cfg.format);
  return j["homogeneous"].get<bool>() ? Exit::ok : Exit::falsified;
}

inline int run_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.sets.empty()) throw UsageError("classify needs at least one --set");
  std::vector<DigitSet> batch;
  for (const auto& s : cfg.sets) batch.emplace_back(cfg.p, cfg.gamma, parse_digits(s));
  bool all_spectral = true;
  const bool consistent = classify_batch(batch, cfg, out, err, all_spectral);
  return (consistent && all_spectral) ? Exit::ok : Exit::falsified;
}

template <class Source>
int stream_verdicts(Source& source, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  bool consistent = true, all_spectral = true;
  std::uint64_t emitted = 0;
  while (true) {
    std::vector<DigitSet> batch;
    while (batch.size() < kBatch && (!cfg.limit || emitted + batch.size() < *cfg.limit)) {
      auto next = source.next();
      if (!next) break;
      batch.push_back(std::move(*next));
    }
    if (batch.empty()) break;
    emitted += batch.size();
    consistent = classify_batch(batch, cfg, out, err, all_spectral) && consistent;
  }
  return consistent ? Exit::ok : Exit::falsified;
}

inline int run_enumerate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.I) {
    TIJEnumerator e(cfg.p, cfg.gamma, *cfg.I);
    return stream_verdicts(e, cfg, out, err);
  }
  SubsetEnumerator e(cfg.p, cfg.gamma);
  return stream_verdicts(e, cfg, out, err);
}

inline int run_verify(const RunConfig& cfg, std::istream& in, std::ostream& out) {
  if (cfg.spectrum.has_value() == cfg.complement.has_value())
    throw UsageError("verify needs exactly one of --spectrum or --complement");
  const CompactOpenSet omega = parse_set(set_text(cfg, in));
  json result;
  bool ok = false;
  if (cfg.spectrum) {
    const LatticePeriodicSet lambda = *cfg.spectrum == "canonical" ? canonical_spectrum(omega)
                                                                   : lattice_from_json(json_arg(*cfg.spectrum), omega.p());
    const SpectralCertificate cert = verify_spectral_pair(omega, lambda);
    ok = cert.ok;
    result = json{{"kind", "spectral"}, {"ok", ok}, {"spectrum", to_json(lambda)}};
    if (cfg.certificate || !ok) result["certificate"] = to_json(cert);
  } else {
    const LatticePeriodicSet t = *cfg.complement == "canonical" ? canonical_tiling_complement(omega)
                                                                : lattice_from_json(json_arg(*cfg.complement), omega.p());
    const TilingCertificate cert = verify_tiling_pair(omega, t);
    ok = cert.ok;
    result = json{{"kind", "tiling"}, {"ok", ok}, {"complement", to_json(t)}};
    if (cfg.certificate || !ok) result["certificate"] = to_json(cert);
  }
  emit(out, result, cfg.format);
  return ok ? Exit::ok : Exit::falsified;
}

inline int run_tree(const RunConfig& cfg, std::istream& in, std::ostream& out) {
  // Drawn at the finest radius written in the input, in normalized coordinates.
  const SetProgram prog = parse_program(set_text(cfg, in));
  const CompactOpenSet omega = normalize(prog.ctx, prog.balls);
  std::int64_t finest = 0;
  for (const Ball& b : prog.balls) finest = std::max(finest, -b.radius_exponent);
  const std::int64_t written = finest - omega.scale();
  const unsigned level = cfg.tree_level.value_or(
      static_cast<unsigned>(std::max<std::int64_t>(written, omega.gamma())));
  const PTree t = build_tree(omega, level);
  if (cfg.format == Format::dot) {
    out << to_dot(t);
  } else {
    emit(out, tree_json(t), cfg.format);
  }
  return Exit::ok;
}

inline int run_measure(const RunConfig& cfg, std::ostream& out) {
  const std::string& s = cfg.measure_spec;
  if (s.empty()) throw UsageError("measure needs --spec");
  const SingularMeasureSpec spec =
      (s == "example1" || s == "example2") ? SingularMeasureSpec::preset(s) : spec_from_json(json_arg(s));
  const Truncation tr = truncate(spec, cfg.gamma);
  json j;
  j["spec"] = to_json(spec);
  j["gamma"] = cfg.gamma;
  j["digits"] = tr.digits.elements();
  j["I"] = spec.I_below(cfg.gamma);
  j["measure"] = rational_string(haar_measure(tr.omega));
  j["homogeneous"] = is_p_homogeneous(tr.omega).homogeneous;
  int code = Exit::ok;
  if (cfg.verify_gamma0) {
    if (*cfg.verify_gamma0 > cfg.gamma) throw UsageError("--verify level must not exceed --gamma");
    const bool v = verify_truncation_spectrum(spec, *cfg.verify_gamma0, cfg.gamma);
    j["verify"] = json{{"gamma0", *cfg.verify_gamma0}, {"ok", v}};
    if (!v) code = Exit::falsified;
  }
  emit(out, j, cfg.format);
  return code;
}

inline int run_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  RunConfig c = cfg;
  c.oracle = true;
  std::uint64_t checked = 0, homogeneous = 0, disagreements = 0;
  auto tally = [&](const std::vector<DigitSet>& batch) {
    std::vector<std::optional<Verdict>> verdicts(batch.size());
    parallel_for(batch.size(), c.jobs, [&](std::size_t i) { verdicts[i] = classify(batch[i], true); });
    for (const auto& v : verdicts) {
      ++checked;
      if (v->homogeneous) ++homogeneous;
      if (!v->consistent) {
        ++disagreements;
        err << "disagreement: " << v->dump() << '\n';
      }
    }
  };
  const std::uint64_t n = ipow(cfg.p, cfg.gamma);
  if (cfg.samples == 0) {
    SubsetEnumerator e(cfg.p, cfg.gamma);
    std::vector<DigitSet> batch;
    while (auto s = e.next()) {
      batch.push_back(std::move(*s));
      if (batch.size() == kBatch) {
        tally(batch);
        batch.clear();
      }
    }
    tally(batch);
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::vector<DigitSet> batch;
    for (std::uint64_t k = 0; k < cfg.samples; ++k) {
      std::vector<std::uint64_t> el;
      while (el.empty()) {
        std::uint64_t bits = 0;
        for (std::uint64_t x = 0; x < n; ++x) {
          if (x % 64 == 0) bits = rng();
          if ((bits >> (x % 64)) & 1u) el.push_back(x);
        }
      }
      batch.emplace_back(cfg.p, cfg.gamma, std::move(el));
      if (batch.size() == kBatch) {
        tally(batch);
        batch.clear();
      }
    }
    tally(batch);
  }
  const json j{{"p", cfg.p},
               {"gamma", cfg.gamma},
               {"mode", cfg.samples == 0 ? "exhaustive" : "sampled"},
               {"seed", cfg.seed},
               {"checked", checked},
               {"homogeneous", homogeneous},
               {"disagreements", disagreements}};
  emit(out, j, cfg.format);
  return disagreements == 0 ? Exit::ok : Exit::falsified;
}

}  // namespace detail

/// Executes one configured command.
inline int run(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::analyze: return detail::run_analyze(cfg, in, out);
      case Command::classify: return detail::run_classify(cfg, out, err);
      case Command::enumerate: return detail::run_enumerate(cfg, out, err);
      case Command::verify: return detail::run_verify(cfg, in, out);
      case Command::tree: return detail::run_tree(cfg, in, out);
      case Command::measure: return detail::run_measure(cfg, out);
      case Command::oracle: return detail::run_oracle(cfg, out, err);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return Exit::usage;
  }
  return Exit::usage;
}

/// Parses argv into a RunConfig and runs it.
inline int main_entry(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact p-adic spectral set and tiling toolkit", "padicspec"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.jobs = default_jobs();
  std::string text;
  std::string format;
  std::string I_text;
  std::optional<std::uint64_t> limit;

  const std::map<std::string, Format> formats{
      {"json", Format::json}, {"ndjson", Format::ndjson}, {"dot", Format::dot}, {"text", Format::text}};

  auto add_source = [&](CLI::App* sub) {
    sub->add_option("set", text, "Set in the DSL, or '-' for stdin");
    sub->add_option("--file", cfg.file, "Read the set from a file");
  };
  auto add_group = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Prime")->required();
    sub->add_option("--gamma", cfg.gamma, "Level gamma of Z/p^gamma")->required();
  };
  auto add_jobs = [&](CLI::App* sub) {
    sub->add_option("--jobs", cfg.jobs, "Worker threads (default from PADICSPEC_JOBS)")->check(CLI::Range(1, 1024));
  };
  auto add_format = [&](CLI::App* sub, const std::string& def) {
    format = def;
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "ndjson", "dot", "text"}));
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Normalize a set and report its structure");
  add_source(analyze);
  add_format(analyze, "json");

  CLI::App* classify_cmd = app.add_subcommand("classify", "Classify subsets of Z/p^gamma");
  add_group(classify_cmd);
  classify_cmd->add_option("--set", cfg.sets, "Comma-separated residues (repeatable)")->required();
  classify_cmd->add_flag("--oracle", cfg.oracle, "Also run the brute-force searches");
  add_jobs(classify_cmd);

  CLI::App* enumerate = app.add_subcommand("enumerate", "Stream verdicts for every subset or every T_{I,J} set");
  add_group(enumerate);
  enumerate->add_option("--I", I_text, "Branching levels, comma-separated; enumerates T_{I,J} sets");
  enumerate->add_option("--limit", limit, "Stop after this many sets");
  enumerate->add_flag("--oracle", cfg.oracle, "Also run the brute-force searches");
  add_jobs(enumerate);

  CLI::App* verify = app.add_subcommand("verify", "Verify a candidate spectrum or tiling complement");
  add_source(verify);
  verify->add_option("--spectrum", cfg.spectrum, "Lattice set JSON, @file, or 'canonical'");
  verify->add_option("--complement", cfg.complement, "Lattice set JSON, @file, or 'canonical'");
  verify->add_flag("--certificate", cfg.certificate, "Include the per-residue certificate");
  add_format(verify, "json");

  CLI::App* tree = app.add_subcommand("tree", "Print the digit tree of a set");
  add_source(tree);
  add_format(tree, "json");
  tree->add_option("--level", cfg.tree_level, "Draw the tree at this level (default: as written)");

  CLI::App* measure = app.add_subcommand("measure", "Truncate a singular measure spec");
  measure->add_option("--spec", cfg.measure_spec, "Spec JSON, @file, example1 or example2")->required();
  measure->add_option("--gamma", cfg.gamma, "Truncation level")->required();
  measure->add_option("--verify", cfg.verify_gamma0, "Check the partial spectrum at this level");

  CLI::App* oracle = app.add_subcommand("oracle", "Compare the fast path against brute force");
  add_group(oracle);
  oracle->add_option("--samples", cfg.samples, "Random subsets to draw (0 = all subsets)");
  oracle->add_option("--seed", cfg.seed, "Seed for sampling");
  add_jobs(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? Exit::ok : Exit::usage;
  }

  if (!text.empty()) cfg.inline_text = text;
  if (!format.empty()) cfg.format = formats.at(format);
  cfg.limit = limit;
  try {
    if (!I_text.empty()) {
      std::vector<unsigned> I;
      for (std::uint64_t x : detail::parse_digits(I_text)) I.push_back(static_cast<unsigned>(x));
      cfg.I = std::move(I);
    } else if (enumerate->parsed() && enumerate->count("--I") > 0) {
      cfg.I = std::vector<unsigned>{};
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return Exit::usage;
  }

  if (analyze->parsed()) cfg.command = Command::analyze;
  if (classify_cmd->parsed()) cfg.command = Command::classify;
  if (enumerate->parsed()) cfg.command = Command::enumerate;
  if (verify->parsed()) cfg.command = Command::verify;
  if (tree->parsed()) cfg.command = Command::tree;
  if (measure->parsed()) cfg.command = Command::measure;
  if (oracle->parsed()) cfg.command = Command::oracle;
  if (oracle->parsed() || classify_cmd->parsed() || enumerate->parsed()) cfg.format = Format::ndjson;
  return run(cfg, in, out, err);
}

}  // namespace padicspec::cli
