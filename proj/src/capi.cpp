#include "gpdrec/gpdrec.h"

#include <cstring>
#include <new>
#include <string>

#include "gpdrec/errors.hpp"
#include "gpdrec/group.hpp"
#include "gpdrec/io.hpp"
#include "gpdrec/pipeline.hpp"

using gpdrec::io::Json;

struct gpdrec_session {
  gpdrec::Request request;
  bool machine = false;
  std::string report;
  std::string last_error;
  std::map<std::string, std::string> artifacts;
};

namespace {

gpdrec_status fail(gpdrec_session* s, gpdrec_status code, std::string msg) {
  if (s) s->last_error = std::move(msg);
  return code;
}

template <class F>
gpdrec_status guarded(gpdrec_session* s, F f) {
  try {
    return f();
  } catch (gpdrec::InvalidInput const& e) {
    return fail(s, GPDREC_INVALID_INPUT, e.what());
  } catch (gpdrec::CapacityExceeded const& e) {
    return fail(s, GPDREC_CAPACITY, e.what());
  } catch (gpdrec::PropertyFailure const& e) {
    return fail(s, GPDREC_PROPERTY_FAILED, e.what());
  } catch (std::bad_alloc const&) {
    return fail(s, GPDREC_CAPACITY, "out of memory");
  } catch (std::exception const& e) {
    return fail(s, GPDREC_INTERNAL, e.what());
  }
}

bool parse_uint(char const* text, std::uint64_t& out) {
  if (!text || !*text) return false;
  std::uint64_t v = 0;
  for (char const* p = text; *p; ++p) {
    if (*p < '0' || *p > '9') return false;
    if (v > (UINT64_MAX - std::uint64_t(*p - '0')) / 10) return false;
    v = v * 10 + std::uint64_t(*p - '0');
  }
  out = v;
  return true;
}

}  // namespace

extern "C" {

const char* gpdrec_version(void) { return gpdrec::kVersion; }

gpdrec_session* gpdrec_session_new(void) { return new (std::nothrow) gpdrec_session(); }

void gpdrec_session_free(gpdrec_session* s) { delete s; }

gpdrec_status gpdrec_set_option(gpdrec_session* s, const char* key, const char* value) {
  if (!s || !key || !value) return fail(s, GPDREC_INVALID_INPUT, "null argument");
  return guarded(s, [&] {
    std::string k = key, v = value;
    auto& opts = s->request.options;
    if (k == "cap" || k == "seed" || k == "seeds") {
      std::uint64_t n = 0;
      if (!parse_uint(value, n)) return fail(s, GPDREC_INVALID_INPUT, "--" + k + ": expected a non-negative integer");
      opts[k] = n;
    } else if (k == "format") {
      if (v != "text" && v != "machine") return fail(s, GPDREC_INVALID_INPUT, "--format: expected text or machine");
      s->machine = v == "machine";
      opts[k] = v;
    } else if (k == "ring" || k == "group" || k == "engine") {
      opts[k] = v;
    } else if (k == "build-groupoid" || k == "verify-ck" || k == "hypothesis") {
      if (v == "1" || v == "true") {
        opts[k] = true;
      } else if (v == "0" || v == "false") {
        opts.erase(k);
      } else {
        return fail(s, GPDREC_INVALID_INPUT, "--" + k + ": expected 1/0 or true/false");
      }
    } else {
      return fail(s, GPDREC_INVALID_INPUT, "unknown option '" + k + "'");
    }
    return GPDREC_OK;
  });
}

void gpdrec_clear_options(gpdrec_session* s) {
  if (!s) return;
  s->request.options = Json::object();
  s->machine = false;
}

gpdrec_status gpdrec_add_input(gpdrec_session* s, const char* json_text) {
  if (!s || !json_text) return fail(s, GPDREC_INVALID_INPUT, "null argument");
  return guarded(s, [&] {
    s->request.inputs.push_back(
        gpdrec::io::parse_text(json_text, "input #" + std::to_string(s->request.inputs.size() + 1)));
    return GPDREC_OK;
  });
}

void gpdrec_clear_inputs(gpdrec_session* s) {
  if (s) s->request.inputs.clear();
}

gpdrec_status gpdrec_run(gpdrec_session* s, const char* command) {
  if (!s || !command) return fail(s, GPDREC_INVALID_INPUT, "null argument");
  return guarded(s, [&] {
    s->request.command = command;
    auto rep = gpdrec::run_command(s->request);
    s->report = rep.render(s->machine);
    s->artifacts = rep.artifacts;
    s->last_error = rep.error.value_or("");
    return static_cast<gpdrec_status>(rep.exit_code);
  });
}

const char* gpdrec_report(const gpdrec_session* s) { return s ? s->report.c_str() : ""; }

const char* gpdrec_artifact(const gpdrec_session* s, const char* name) {
  if (!s || !name) return nullptr;
  auto it = s->artifacts.find(name);
  return it == s->artifacts.end() ? nullptr : it->second.c_str();
}

const char* gpdrec_last_error(const gpdrec_session* s) { return s ? s->last_error.c_str() : "null session"; }

gpdrec_status gpdrec_unit_census(const char* ring, const char* group, size_t* units, size_t* trivial_units) {
  if (!ring || !group || !units || !trivial_units) return GPDREC_INVALID_INPUT;
  return guarded(nullptr, [&] {
    auto census = gpdrec::unit_census(gpdrec::io::ring_from_text(ring), gpdrec::io::group_from_text(group));
    *units = census.unit_count;
    *trivial_units = census.trivial_count;
    return GPDREC_OK;
  });
}

gpdrec_status gpdrec_lbh(gpdrec_session* s, const char* instance_json, int* holds) {
  if (!s || !instance_json || !holds) return fail(s, GPDREC_INVALID_INPUT, "null argument");
  return guarded(s, [&] {
    gpdrec::Request req;
    req.command = "lbh";
    req.options = s->request.options;
    req.inputs.push_back(gpdrec::io::parse_text(instance_json, "instance"));
    auto rep = gpdrec::run_command(req);
    s->report = rep.render(s->machine);
    s->last_error = rep.error.value_or("");
    if (rep.exit_code == gpdrec::ExitCode::ok) {
      *holds = 1;
      return GPDREC_OK;
    }
    if (rep.exit_code == gpdrec::ExitCode::property_failed && rep.witness && (*rep.witness)["kind"] == "lbh") {
      *holds = 0;
      return GPDREC_OK;
    }
    return static_cast<gpdrec_status>(rep.exit_code);
  });
}

}  // extern "C"
