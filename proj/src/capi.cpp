// Copyright 2026 The cocycle-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cocycle/cocycle_lab.h"

#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "cocycle/cocycle.hpp"
#include "cocycle/lab.hpp"

struct cl_potential {
  cocycle::Potential v;
};

struct cl_config {
  cocycle::Config cfg;
};

namespace {

thread_local std::string g_error;

cl_status status_of(cocycle::ErrorCode c) {
  using cocycle::ErrorCode;
  switch (c) {
    case ErrorCode::kParameter:
    case ErrorCode::kPrecondition:
      return CL_ERR_PARAM;
    case ErrorCode::kConfig:
      return CL_ERR_CONFIG;
    case ErrorCode::kUnsupported:
      return CL_ERR_UNSUPPORTED;
    case ErrorCode::kDomain:
      return CL_ERR_DOMAIN;
    case ErrorCode::kIo:
      return CL_ERR_IO;
    default:
      return CL_ERR_NUMERICAL;
  }
}

template <class F>
cl_status guarded(F&& f) {
  try {
    f();
    g_error.clear();
    return CL_OK;
  } catch (const cocycle::Error& e) {
    g_error = std::string(cocycle::error_code_name(e.code())) + ": " + e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return CL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return CL_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) cocycle::fail(cocycle::ErrorCode::kParameter, std::string(what) + " is NULL");
}

cocycle::Frequency frequency(cl_frequency a) {
  if (a.q == 0) return cocycle::Frequency::irrational(a.value);
  return cocycle::Frequency::rational(a.p, a.q);
}

template <class Make>
cl_status make_potential(cl_potential** out, Make&& make) {
  return guarded([&] {
    need(out, "out");
    *out = new cl_potential{make()};
  });
}

}  // namespace

extern "C" {

const char* cl_last_error(void) { return g_error.c_str(); }

const char* cl_version(void) { return "1.0.0"; }

int cl_exit_code(cl_status s) {
  switch (s) {
    case CL_OK:
      return 0;
    case CL_ERR_PARAM:
    case CL_ERR_CONFIG:
    case CL_ERR_UNSUPPORTED:
    case CL_ERR_DOMAIN:
    case CL_ERR_IO:
      return 2;
    default:
      return 3;
  }
}

cl_status cl_potential_zero(cl_potential** out) {
  return make_potential(out, [] { return cocycle::Potential::zero(); });
}

cl_status cl_potential_poisson_peak(double K, double lambda, cl_potential** out) {
  return make_potential(out, [&] { return cocycle::Potential::poisson_peak(K, lambda); });
}

cl_status cl_potential_peaky_bump(double lo, double hi, double K, double sharpness,
                                  cl_potential** out) {
  return make_potential(out,
                        [&] { return cocycle::Potential::peaky_bump(lo, hi, K, sharpness); });
}

void cl_potential_free(cl_potential* v) { delete v; }

cl_status cl_potential_eval(const cl_potential* v, double x, double* out) {
  return guarded([&] {
    need(v, "potential");
    need(out, "out");
    *out = v->v(x);
  });
}

cl_status cl_le_estimate(const cl_potential* v, double e, cl_frequency alpha, int64_t n,
                         int phases, uint64_t seed, double nu, cl_le_result* out) {
  return guarded([&] {
    need(v, "potential");
    need(out, "out");
    cocycle::LEOptions o;
    o.n = n;
    o.phases = phases;
    o.seed = seed;
    o.nu = nu;
    cocycle::LEEstimate r = cocycle::le_estimate(v->v, e, frequency(alpha), o);
    *out = {r.value, r.stderr_, r.convergence_gap, r.n_steps};
  });
}

cl_status cl_rotation_number(const cl_potential* v, double e, cl_frequency alpha, int64_t n,
                             cl_rotation_result* out) {
  return guarded([&] {
    need(v, "potential");
    need(out, "out");
    cocycle::RotationOptions o;
    o.n = n;
    cocycle::RotationEstimate r = cocycle::rotation_number(v->v, e, frequency(alpha), o);
    *out = {r.rho, r.rho_bar, cocycle::density_of_states(r), r.convergence_gap};
  });
}

cl_status cl_herman_lower_bound(double K, double lambda, double e, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = cocycle::herman_lower_bound(K, lambda, e).value;
  });
}

cl_status cl_trace_closed_form(const cl_potential* v, double e, int64_t q, double x,
                               double* out) {
  return guarded([&] {
    need(v, "potential");
    need(out, "out");
    *out = cocycle::trace_closed_form(v->v, e, q, x);
  });
}

cl_status cl_uh_test(const cl_potential* v, double e, double alpha, uint64_t seed,
                     int* uniformly_hyperbolic) {
  return guarded([&] {
    need(v, "potential");
    need(uniformly_hyperbolic, "out");
    cocycle::UHOptions o;
    o.seed = seed;
    *uniformly_hyperbolic =
        cocycle::uh_test(v->v, e, cocycle::Frequency::irrational(alpha), o).uniformly_hyperbolic;
  });
}

cl_status cl_dc1_membership(double alpha, double eta, double sigma, int64_t cap, int* member) {
  return guarded([&] {
    need(member, "out");
    *member = cocycle::dc1_membership(cocycle::Frequency::irrational(alpha), eta, sigma, cap).member;
  });
}

cl_status cl_config_load_file(const char* path, cl_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new cl_config{cocycle::Config::from_file(path)};
  });
}

cl_status cl_config_load_string(const char* text, cl_config** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new cl_config{cocycle::Config::from_string(text)};
  });
}

cl_status cl_config_new(cl_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cl_config{cocycle::Config::from_string("")};
  });
}

cl_status cl_config_set(cl_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    cfg->cfg.set(key, value, "override");
  });
}

void cl_config_free(cl_config* cfg) { delete cfg; }

cl_status cl_run(const cl_config* cfg, const char* subcommand, const char* out_path,
                 const uint64_t* seed, unsigned threads) {
  return guarded([&] {
    need(cfg, "config");
    need(subcommand, "subcommand");
    cocycle::RunOptions ro;
    ro.threads = threads;
    if (threads == 0) {
      int64_t t = cfg->cfg.integer("run.threads", 1);
      if (t < 1 || t > 1024) cfg->cfg.bad("run.threads", "expected 1..1024");
      ro.threads = static_cast<unsigned>(t);
    }
    if (seed) ro.seed = *seed;
    std::string path = out_path ? out_path : "-";
    if (path == "-") {
      cocycle::run_subcommand(subcommand, cfg->cfg, std::cout, ro);
      std::cout.flush();
      return;
    }
    // Render fully before touching the file so a failed run leaves no partial CSV.
    std::ostringstream buf;
    cocycle::run_subcommand(subcommand, cfg->cfg, buf, ro);
    std::ofstream f(path, std::ios::binary);
    if (!f) cocycle::fail(cocycle::ErrorCode::kIo, "cannot open '" + path + "' for writing");
    f << buf.str();
    if (!f.flush()) cocycle::fail(cocycle::ErrorCode::kIo, "write to '" + path + "' failed");
  });
}

const char* const* cl_subcommands(void) {
  static const char* names[] = {"scan", "windows", "spectrum", "profile",
                                "reduce", "dc-sample", nullptr};
  return names;
}

const char* const* cl_config_keys(void) {
  static const std::vector<const char*> names = [] {
    std::vector<const char*> n;
    for (const std::string& k : cocycle::known_config_keys()) n.push_back(k.c_str());
    n.push_back(nullptr);
    return n;
  }();
  return names.data();
}

}  // extern "C"
