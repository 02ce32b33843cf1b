// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include "khet/khet.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "khet/connection_graph.hpp"
#include "khet/core_model.hpp"
#include "khet/error.hpp"
#include "khet/heteroclinics.hpp"
#include "khet/runs.hpp"

struct khet_result {
  khet::Run run;
  std::string report;
  std::vector<std::string> csv;
};

namespace {

thread_local std::string last_error;

khet_status fail(khet_status status, const char* message) {
  last_error = message;
  return status;
}

template <typename F>
khet_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return KHET_OK;
  } catch (const khet::Error& e) {
    return fail(static_cast<khet_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(KHET_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KHET_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KHET_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw khet::Error(khet::ErrorCode::invalid_argument, message);
}

// One-based C index array to a zero-based set.
std::vector<std::size_t> to_set(const size_t* idx, size_t len, const char* what) {
  require(idx != nullptr || len == 0, what);
  std::vector<std::size_t> out;
  out.reserve(len);
  for (size_t k = 0; k < len; ++k) {
    if (idx[k] == 0) {
      throw khet::Error(khet::ErrorCode::invalid_argument,
                        std::string(what) + ": indices are one-based");
    }
    out.push_back(idx[k] - 1);
  }
  return out;
}

khet::RebellionOptions to_options(const khet_options* o) {
  khet::RebellionOptions r;
  if (o == nullptr) return r;
  r.step = o->step;
  r.eps_mag = o->eps_mag;
  r.delta_stop = o->delta_stop;
  r.tau_eq = o->tau_eq;
  r.max_steps = static_cast<std::size_t>(o->max_steps);
  r.record_every = static_cast<std::size_t>(o->record_every);
  return r;
}

khet::RebellionSymbol to_symbol(khet_symbol s) {
  if (s == KHET_LEFT) return khet::RebellionSymbol::left;
  if (s == KHET_RIGHT) return khet::RebellionSymbol::right;
  throw khet::Error(khet::ErrorCode::invalid_argument, "symbol must be KHET_LEFT or KHET_RIGHT");
}

void emit(khet::Run run, khet_result** out) {
  auto* r = new khet_result{std::move(run), {}, {}};
  r->report = r->run.report.dump(2);
  r->csv.resize(r->run.tables.size());
  *out = r;
}

}  // namespace

extern "C" {

const char* khet_version(void) { return "1.0.0"; }

const char* khet_last_error(void) { return last_error.c_str(); }

const char* khet_status_name(khet_status status) {
  if (status == KHET_OK) return "ok";
  if (status == KHET_ERR_INTERNAL) return "internal";
  if (status > KHET_OK && status < KHET_ERR_INTERNAL) {
    return khet::to_string(static_cast<khet::ErrorCode>(status));
  }
  return "unknown";
}

void khet_options_default(khet_options* options) {
  if (options == nullptr) return;
  const khet::RebellionOptions d;
  options->step = d.step;
  options->eps_mag = d.eps_mag;
  options->delta_stop = d.delta_stop;
  options->tau_eq = d.tau_eq;
  options->max_steps = d.max_steps;
  options->record_every = d.record_every;
}

khet_status khet_vector_field(const double* angles, size_t n, double* out) {
  return guarded([&] {
    require(angles != nullptr && out != nullptr, "null pointer argument");
    const khet::PhaseState s({angles, angles + n});
    khet::vector_field(s.angles(), {out, n});
  });
}

khet_status khet_order_parameter(const double* angles, size_t n, double* r, double* psi) {
  return guarded([&] {
    require(angles != nullptr && r != nullptr && psi != nullptr, "null pointer argument");
    const khet::PhaseState s({angles, angles + n});
    const auto op = khet::order_parameter(s.angles());
    *r = op.R;
    *psi = op.Psi;
  });
}

khet_status khet_vertex_count(size_t n, uint64_t* count) {
  return guarded([&] {
    require(count != nullptr, "null pointer argument");
    *count = khet::vertex_count(n);
  });
}

khet_status khet_simulate(const double* angles, size_t n, double duration,
                          const khet_options* options, khet_result** out) {
  return guarded([&] {
    require(angles != nullptr && out != nullptr, "null pointer argument");
    emit(khet::cmd_simulate({angles, angles + n}, duration, to_options(options)), out);
  });
}

khet_status khet_equilibrium(size_t n, const size_t* fat_set, size_t fat_len, int verify,
                             khet_result** out) {
  return guarded([&] {
    require(out != nullptr, "null pointer argument");
    emit(khet::cmd_equilibrium(n, to_set(fat_set, fat_len, "fat set"), verify != 0), out);
  });
}

khet_status khet_linkage(const double alpha[3], khet_result** out) {
  return guarded([&] {
    require(alpha != nullptr && out != nullptr, "null pointer argument");
    emit(khet::cmd_linkage({alpha[0], alpha[1], alpha[2]}), out);
  });
}

khet_status khet_trace_fractions(const double alpha[3], khet_symbol symbol,
                                 const khet_options* options, khet_result** out) {
  return guarded([&] {
    require(alpha != nullptr && out != nullptr, "null pointer argument");
    emit(khet::cmd_trace({alpha[0], alpha[1], alpha[2]}, to_symbol(symbol), to_options(options)),
         out);
  });
}

khet_status khet_trace_sets(size_t n, const size_t* fat_source, size_t source_len,
                            const size_t* fat_target, size_t target_len, khet_symbol symbol,
                            const khet_options* options, khet_result** out) {
  return guarded([&] {
    require(out != nullptr, "null pointer argument");
    emit(khet::cmd_trace(n, to_set(fat_source, source_len, "source fat set"),
                         to_set(fat_target, target_len, "target fat set"), to_symbol(symbol),
                         to_options(options)),
         out);
  });
}

khet_status khet_concat(size_t n, const size_t* initial_fat, size_t fat_len, const char* symbols,
                        const khet_options* options, khet_result** out) {
  return guarded([&] {
    require(symbols != nullptr && out != nullptr, "null pointer argument");
    emit(khet::cmd_concat(n, to_set(initial_fat, fat_len, "initial fat set"),
                          khet::SymbolSequence::parse(symbols), to_options(options)),
         out);
  });
}

khet_status khet_swarm(const khet_swarm_spec* spec, const khet_options* options,
                       khet_result** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "null pointer argument");
    khet::SwarmSpec s;
    s.n = spec->n;
    s.fat_source = to_set(spec->fat_source, spec->fat_source_len, "source fat set");
    s.fat_target = to_set(spec->fat_target, spec->fat_target_len, "target fat set");
    s.m_star = spec->m_star;
    s.epsilon = spec->epsilon;
    if (spec->unilateral != 0) s.unilateral = to_symbol(static_cast<khet_symbol>(spec->unilateral));
    if (spec->has_seed) s.seed = spec->seed;
    emit(khet::cmd_swarm(s, to_options(options)), out);
  });
}

khet_status khet_graph(size_t n, int adjacency_only, khet_graph_format format,
                       khet_result** out) {
  return guarded([&] {
    require(out != nullptr, "null pointer argument");
    require(format == KHET_GRAPH_DOT || format == KHET_GRAPH_JSON, "unknown graph format");
    emit(khet::cmd_graph(n, adjacency_only != 0,
                         format == KHET_GRAPH_DOT ? khet::GraphFormat::dot
                                                  : khet::GraphFormat::json),
         out);
  });
}

const char* khet_result_report(const khet_result* result) {
  return result ? result->report.c_str() : nullptr;
}

const char* khet_result_text(const khet_result* result) {
  return result ? result->run.text.c_str() : nullptr;
}

size_t khet_result_table_count(const khet_result* result) {
  return result ? result->run.tables.size() : 0;
}

const char* khet_result_table_name(const khet_result* result, size_t index) {
  if (!result || index >= result->run.tables.size()) return nullptr;
  return result->run.tables[index].name.c_str();
}

size_t khet_result_table_rows(const khet_result* result, size_t index) {
  if (!result || index >= result->run.tables.size()) return 0;
  return result->run.tables[index].rows.size();
}

const char* khet_result_table_csv(khet_result* result, size_t index, int wrap) {
  if (!result || index >= result->run.tables.size()) return nullptr;
  try {
    result->csv[index] = result->run.tables[index].to_csv(wrap != 0);
  } catch (...) {
    return nullptr;
  }
  return result->csv[index].c_str();
}

void khet_result_free(khet_result* result) { delete result; }

}  // extern "C"
