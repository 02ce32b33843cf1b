// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

// khet command-line front end. Talks to the library through the C API only.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "khet/khet.h"

namespace {

namespace fs = std::filesystem;

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitNoLinkage = 4;
constexpr int kExitNonConvergence = 5;
constexpr int kExitWrongBasin = 6;
constexpr int kExitOrdering = 7;

int exit_code(khet_status s) {
  switch (s) {
    case KHET_OK: return kExitOk;
    case KHET_ERR_INVALID_ARGUMENT:
    case KHET_ERR_DIMENSION:
    case KHET_ERR_CLUSTER_VIOLATION:
    case KHET_ERR_INVALID_FAT_SET:
    case KHET_ERR_UNSUPPORTED:
    case KHET_ERR_UNCONSTRUCTIBLE:
    case KHET_ERR_INVALID_VERTEX: return kExitValidation;
    case KHET_ERR_DIVERGENCE: return kExitDivergence;
    case KHET_ERR_NO_LINKAGE: return kExitNoLinkage;
    case KHET_ERR_NON_CONVERGENCE: return kExitNonConvergence;
    case KHET_ERR_WRONG_BASIN: return kExitWrongBasin;
    case KHET_ERR_ORDERING_VIOLATION: return kExitOrdering;
    default: return kExitOther;
  }
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_reals(const std::string& text) {
  std::string s = text;
  for (char& c : s) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw UsageError("not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::size_t parse_index(const std::string& tok) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.size() || tok[0] == '-') {
    throw UsageError("not an index: '" + tok + "'");
  }
  return static_cast<std::size_t>(v);
}

// "1..3,7,9..10" -> {1,2,3,7,9,10}; one-based.
std::vector<std::size_t> parse_set(const std::string& text) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) continue;
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_index(part));
      continue;
    }
    const std::size_t lo = parse_index(part.substr(0, dots));
    const std::size_t hi = parse_index(part.substr(dots + 2));
    if (hi < lo) throw UsageError("empty range '" + part + "'");
    for (std::size_t j = lo; j <= hi; ++j) out.push_back(j);
  }
  return out;
}

khet_symbol parse_symbol(const std::string& s) {
  if (s == "+" || s == "right" || s == "r") return KHET_RIGHT;
  if (s == "-" || s == "left" || s == "l") return KHET_LEFT;
  throw UsageError("symbol must be + or - (or right/left)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Output {
  std::string dir;
  std::string name;
  std::string format = "csv";
  bool wrap = false;
  bool quiet = false;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// Writes <name>.json and, for csv, one <name>_<table>.csv per table.
void write_result(khet_result* r, const Output& o, const std::string& text_ext = {}) {
  const fs::path dir = o.dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  const std::string report = khet_result_report(r);
  write_file(dir / (o.name + ".json"), report + "\n");
  std::vector<fs::path> written{dir / (o.name + ".json")};
  if (!text_ext.empty()) {
    written.push_back(dir / (o.name + "." + text_ext));
    write_file(written.back(), khet_result_text(r));
  }
  if (o.format == "csv") {
    const size_t count = khet_result_table_count(r);
    for (size_t k = 0; k < count; ++k) {
      const std::string table = khet_result_table_name(r, k);
      const fs::path file = dir / (count == 1 ? o.name + ".csv" : o.name + "_" + table + ".csv");
      write_file(file, khet_result_table_csv(r, k, o.wrap ? 1 : 0));
      written.push_back(file);
    }
  }
  if (!o.quiet) {
    std::cout << report << "\n";
    for (const auto& f : written) std::cerr << "wrote " << f.string() << "\n";
  }
}

class Session {
 public:
  // Takes the result by address: it is filled by the call producing `s`.
  int finish(khet_status s, khet_result* const* slot, const Output& o,
             const std::string& ext = {}) {
    khet_result* r = *slot;
    if (s != KHET_OK) {
      std::cerr << "error (" << khet_status_name(s) << "): " << khet_last_error() << "\n";
      return exit_code(s);
    }
    try {
      write_result(r, o, ext);
    } catch (...) {
      khet_result_free(r);
      throw;
    }
    khet_result_free(r);
    return kExitOk;
  }
};

void add_numeric_options(CLI::App* cmd, khet_options& opt) {
  cmd->add_option("--step", opt.step, "RK4 step size")->check(CLI::PositiveNumber);
  cmd->add_option("--eps", opt.eps_mag, "perturbation size near the target")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delta", opt.delta_stop, "backward stop threshold")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tau", opt.tau_eq, "accepted endpoint distance to the source")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-steps", opt.max_steps, "step budget per backward run")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--record-every", opt.record_every, "keep every k-th step in the output")
      ->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* cmd, Output& out, const std::string& default_name) {
  out.name = default_name;
  cmd->add_option("-o,--out-dir", out.dir, "output directory (default: $KHET_OUTPUT_DIR or .)");
  cmd->add_option("--name", out.name, "output file stem")->capture_default_str();
  cmd->add_option("--format", out.format, "csv: report plus tables; json: report only")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_flag("--wrap", out.wrap, "wrap angles to (-pi, pi] in CSV output");
  cmd->add_flag("-q,--quiet", out.quiet, "do not echo the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"khet: heteroclinic rebellions in the equal-frequency Kuramoto model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(khet_version()));

  khet_options opt;
  khet_options_default(&opt);
  opt.record_every = 10;

  // simulate
  Output sim_out;
  std::string sim_angles, sim_input;
  double sim_T = 0.0;
  auto* sim = app.add_subcommand("simulate", "integrate the full model forward");
  auto* sim_a = sim->add_option("--angles", sim_angles, "initial angles, comma separated");
  sim->add_option("--input", sim_input, "file with initial angles")->excludes(sim_a);
  sim->add_option("-T,--duration", sim_T, "integration time")->required()->check(CLI::NonNegativeNumber);
  add_numeric_options(sim, opt);
  add_output_options(sim, sim_out, "simulate");

  // equilibrium
  Output eq_out;
  std::size_t eq_n = 0;
  std::string eq_fat, eq_linkage;
  bool eq_sync = false, eq_verify = false;
  auto* eq = app.add_subcommand("equilibrium", "construct an equilibrium and its spectrum");
  eq->add_option("-n,--n", eq_n, "number of oscillators");
  auto* eq_f = eq->add_option("--fat", eq_fat, "fat index set, e.g. 1..3");
  auto* eq_s = eq->add_flag("--sync", eq_sync, "synchrony")->excludes(eq_f);
  eq->add_option("--linkage", eq_linkage, "3-bar linkage fractions a1,a2,a3")
      ->excludes(eq_f)
      ->excludes(eq_s);
  eq->add_flag("--verify", eq_verify, "cross-check the spectrum by finite differences");
  add_output_options(eq, eq_out, "equilibrium");

  // trace
  Output tr_out;
  std::string tr_alpha, tr_from, tr_to, tr_symbol = "+";
  std::size_t tr_n = 0;
  auto* tr = app.add_subcommand("trace", "trace one rebellion orbit backwards");
  auto* tr_a = tr->add_option("--alpha", tr_alpha, "cluster fractions a1,a2,a3");
  tr->add_option("-n,--n", tr_n, "number of oscillators")->excludes(tr_a);
  tr->add_option("--from", tr_from, "source fat set J-")->excludes(tr_a);
  tr->add_option("--to", tr_to, "target fat set J+")->excludes(tr_a);
  tr->add_option("-s,--symbol", tr_symbol, "+ (right) or - (left)")->capture_default_str();
  add_numeric_options(tr, opt);
  add_output_options(tr, tr_out, "trace");

  // concat
  Output cc_out;
  std::size_t cc_n = 0, cc_start = 0;
  std::string cc_fat, cc_symbols;
  auto* cc = app.add_subcommand("concat", "concatenate one-man rebellions");
  cc->add_option("-n,--n", cc_n, "number of oscillators")->required();
  auto* cc_st = cc->add_option("--start", cc_start, "initial fat set {1..start}");
  cc->add_option("--fat", cc_fat, "initial fat set")->excludes(cc_st);
  cc->add_option("-s,--symbols", cc_symbols, "symbol word, e.g. --symbols=+-+")->required();
  add_numeric_options(cc, opt);
  add_output_options(cc, cc_out, "concat");

  // swarm
  Output sw_out;
  std::size_t sw_n = 0, sw_mstar = 1;
  std::string sw_from, sw_to, sw_unilateral;
  double sw_eps = 1e-2;
  std::optional<std::uint64_t> sw_seed;
  auto* sw = app.add_subcommand("swarm", "realize a multi-cluster swarm rebellion");
  sw->add_option("-n,--n", sw_n, "number of oscillators")->required();
  sw->add_option("--from", sw_from, "source fat set J-")->required();
  sw->add_option("--to", sw_to, "target fat set J+")->required();
  auto* sw_m = sw->add_option("--m-star", sw_mstar, "clusters 2..m_star rebel right");
  sw->add_option("--unilateral", sw_unilateral, "one-sided swarm: + or -")->excludes(sw_m);
  sw->add_option("--epsilon", sw_eps, "swarm offset size")->check(CLI::PositiveNumber);
  sw->add_option("--seed", sw_seed, "randomize rebel offsets");
  add_numeric_options(sw, opt);
  add_output_options(sw, sw_out, "swarm");

  // graph
  Output gr_out;
  std::size_t gr_n = 0;
  bool gr_full = false;
  std::string gr_format = "dot";
  auto* gr = app.add_subcommand("graph", "build and export the connection graph");
  gr->add_option("-n,--n", gr_n, "number of oscillators")->required();
  gr->add_flag("--full", gr_full, "all inclusions instead of adjacency edges");
  gr->add_option("--graph-format", gr_format, "dot or json")
      ->check(CLI::IsMember({"dot", "json"}))
      ->capture_default_str();
  add_output_options(gr, gr_out, "graph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const char* env_dir = std::getenv("KHET_OUTPUT_DIR");
  for (Output* o : {&sim_out, &eq_out, &tr_out, &cc_out, &sw_out, &gr_out}) {
    if (o->dir.empty()) o->dir = env_dir != nullptr && *env_dir != '\0' ? env_dir : ".";
  }

  Session session;
  khet_result* r = nullptr;
  try {
    if (*sim) {
      if (sim_angles.empty() && sim_input.empty()) throw UsageError("give --angles or --input");
      const auto angles = parse_reals(sim_input.empty() ? sim_angles : read_file(sim_input));
      return session.finish(khet_simulate(angles.data(), angles.size(), sim_T, &opt, &r), &r,
                            sim_out);
    }
    if (*eq) {
      if (!eq_linkage.empty()) {
        const auto a = parse_reals(eq_linkage);
        if (a.size() != 3) throw UsageError("--linkage needs three fractions");
        return session.finish(khet_linkage(a.data(), &r), &r, eq_out);
      }
      if (eq_n == 0) throw UsageError("--n is required");
      std::vector<std::size_t> fat;
      if (eq_sync) {
        fat = parse_set("1.." + std::to_string(eq_n));
      } else if (!eq_fat.empty()) {
        fat = parse_set(eq_fat);
      } else {
        throw UsageError("give --fat, --sync or --linkage");
      }
      return session.finish(khet_equilibrium(eq_n, fat.data(), fat.size(), eq_verify, &r), &r,
                            eq_out);
    }
    if (*tr) {
      const khet_symbol s = parse_symbol(tr_symbol);
      if (!tr_alpha.empty()) {
        const auto a = parse_reals(tr_alpha);
        if (a.size() != 3) throw UsageError("--alpha needs three fractions");
        return session.finish(khet_trace_fractions(a.data(), s, &opt, &r), &r, tr_out);
      }
      if (tr_n == 0 || tr_from.empty() || tr_to.empty()) {
        throw UsageError("give --alpha, or --n with --from and --to");
      }
      const auto from = parse_set(tr_from);
      const auto to = parse_set(tr_to);
      return session.finish(
          khet_trace_sets(tr_n, from.data(), from.size(), to.data(), to.size(), s, &opt, &r), &r,
          tr_out);
    }
    if (*cc) {
      std::vector<std::size_t> fat;
      if (!cc_fat.empty()) {
        fat = parse_set(cc_fat);
      } else if (cc_start > 0) {
        fat = parse_set("1.." + std::to_string(cc_start));
      } else {
        throw UsageError("give --start or --fat");
      }
      std::string word;
      for (char c : cc_symbols) word += c == 'r' ? '+' : c == 'l' ? '-' : c;
      return session.finish(khet_concat(cc_n, fat.data(), fat.size(), word.c_str(), &opt, &r),
                            &r, cc_out);
    }
    if (*sw) {
      const auto from = parse_set(sw_from);
      const auto to = parse_set(sw_to);
      khet_swarm_spec spec{};
      spec.n = sw_n;
      spec.fat_source = from.data();
      spec.fat_source_len = from.size();
      spec.fat_target = to.data();
      spec.fat_target_len = to.size();
      spec.m_star = sw_mstar;
      spec.epsilon = sw_eps;
      spec.unilateral = sw_unilateral.empty() ? 0 : parse_symbol(sw_unilateral);
      spec.has_seed = sw_seed.has_value() ? 1 : 0;
      spec.seed = sw_seed.value_or(0);
      return session.finish(khet_swarm(&spec, &opt, &r), &r, sw_out);
    }
    if (*gr) {
      const khet_graph_format f = gr_format == "dot" ? KHET_GRAPH_DOT : KHET_GRAPH_JSON;
      // The graph export is the payload; the report is a small summary.
      Output o = gr_out;
      o.format = "json";
      return session.finish(khet_graph(gr_n, gr_full ? 0 : 1, f, &r), &r, o,
                            gr_format == "dot" ? "dot" : "graph.json");
    }
  } catch (const UsageError& e) {
    std::cerr << "error (invalid-argument): " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return kExitOther;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
