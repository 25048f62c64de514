#include "hyperwalk/hyperwalk.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "hyperwalk/ball.hpp"
#include "hyperwalk/error.hpp"
#include "hyperwalk/service.hpp"

using namespace hyperwalk;

struct hw_group {
  ModelPtr model;
};

struct hw_measure {
  StepMeasure measure;
  hw_group group;
};

namespace {

thread_local std::string last_error;

hw_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return HW_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return HW_ERR_PARSE;
    case ErrorCode::InvalidMeasure: return HW_ERR_INVALID_MEASURE;
    case ErrorCode::BallEscape: return HW_ERR_BALL_ESCAPE;
    case ErrorCode::GuardExceeded: return HW_ERR_GUARD_EXCEEDED;
    case ErrorCode::BackendMismatch: return HW_ERR_BACKEND_MISMATCH;
    case ErrorCode::BoundViolation: return HW_ERR_BOUND_VIOLATION;
    case ErrorCode::Unsupported: return HW_ERR_UNSUPPORTED;
    case ErrorCode::NotSmallCancellation: return HW_ERR_NOT_SMALL_CANCELLATION;
  }
  return HW_ERR_INTERNAL;
}

hw_status fail(hw_status s, const std::string& message, const std::string& subject) {
  Json j;
  j["code"] = hw_status_name(s);
  j["message"] = message;
  j["subject"] = subject;
  last_error = j.dump();
  return s;
}

template <typename F>
hw_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return HW_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what(), e.subject());
  } catch (const nlohmann::json::exception& e) {
    return fail(HW_ERR_PARSE, e.what(), "options");
  } catch (const std::bad_alloc&) {
    return fail(HW_ERR_GUARD_EXCEEDED, "out of memory", "memory");
  } catch (const std::exception& e) {
    return fail(HW_ERR_INTERNAL, e.what(), "");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* name) {
  if (p == nullptr) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must not be null", name);
}

Json options_of(const char* text) {
  if (text == nullptr || *text == '\0') return Json::object();
  Json j = Json::parse(text);
  if (!j.is_object()) throw Error(ErrorCode::Parse, "options must be a JSON object", "options");
  return j;
}

}  // namespace

extern "C" {

const char* hw_version(void) { return HYPERWALK_VERSION_STRING; }

const char* hw_status_name(hw_status s) {
  switch (s) {
    case HW_OK: return "ok";
    case HW_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case HW_ERR_PARSE: return "parse";
    case HW_ERR_INVALID_MEASURE: return "invalid-measure";
    case HW_ERR_BALL_ESCAPE: return "ball-escape";
    case HW_ERR_GUARD_EXCEEDED: return "guard-exceeded";
    case HW_ERR_BACKEND_MISMATCH: return "backend-mismatch";
    case HW_ERR_BOUND_VIOLATION: return "bound-violation";
    case HW_ERR_UNSUPPORTED: return "unsupported";
    case HW_ERR_NOT_SMALL_CANCELLATION: return "not-small-cancellation";
    case HW_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hw_last_error(void) { return last_error.c_str(); }

void hw_string_free(char* s) { std::free(s); }

hw_status hw_group_create(const char* spec, hw_group** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new hw_group{make_model(spec)};
  });
}

void hw_group_free(hw_group* g) { delete g; }

hw_status hw_group_describe(const hw_group* g, char** out) {
  return guarded([&] {
    need(g, "group");
    need(out, "out");
    *out = dup(g->model->describe());
  });
}

hw_status hw_group_canonicalize(const hw_group* g, const char* word, char** out) {
  return guarded([&] {
    need(g, "group");
    need(word, "word");
    need(out, "out");
    *out = dup(g->model->format(g->model->parse(word)));
  });
}

hw_status hw_group_multiply(const hw_group* g, const char* x, const char* y, char** out) {
  return guarded([&] {
    need(g, "group");
    need(x, "x");
    need(y, "y");
    need(out, "out");
    const auto& m = *g->model;
    *out = dup(m.format(m.multiply(m.parse(x), m.parse(y))));
  });
}

hw_status hw_group_invert(const hw_group* g, const char* x, char** out) {
  return guarded([&] {
    need(g, "group");
    need(x, "x");
    need(out, "out");
    const auto& m = *g->model;
    *out = dup(m.format(m.invert(m.parse(x))));
  });
}

hw_status hw_group_word_length(const hw_group* g, const char* x, int* out) {
  return guarded([&] {
    need(g, "group");
    need(x, "x");
    need(out, "out");
    *out = g->model->word_length(g->model->parse(x));
  });
}

hw_status hw_group_power(const hw_group* g, const char* x, int d, char** out) {
  return guarded([&] {
    need(g, "group");
    need(x, "x");
    need(out, "out");
    const auto& m = *g->model;
    *out = dup(m.format(m.power(m.parse(x), d)));
  });
}

hw_status hw_group_ball_size(const hw_group* g, int radius, uint64_t* out) {
  return guarded([&] {
    need(g, "group");
    need(out, "out");
    *out = Ball::enumerate(g->model, radius)->size();
  });
}

hw_status hw_measure_create(const hw_group* g, const char* spec, hw_measure** out) {
  return guarded([&] {
    need(g, "group");
    need(spec, "spec");
    need(out, "out");
    *out = new hw_measure{StepMeasure::parse(g->model, spec), hw_group{g->model}};
  });
}

void hw_measure_free(hw_measure* m) { delete m; }

hw_status hw_measure_describe(const hw_measure* m, char** out) {
  return guarded([&] {
    need(m, "measure");
    need(out, "out");
    *out = dup(m->measure.describe());
  });
}

hw_status hw_walk_exact(const hw_measure* m, int n, const char* mode, uint64_t guard, char** csv,
                        char** summary_json) {
  return guarded([&] {
    need(m, "measure");
    need(csv, "csv");
    need(summary_json, "summary_json");
    auto w = walk_exact(m->measure, n, mode ? mode : "exact", guard == 0 ? kDefaultSupportGuard : guard);
    *csv = dup(w.csv);
    *summary_json = dup(w.summary.dump(2));
  });
}

hw_status hw_walk_sample(const hw_measure* m, int n, uint64_t count, uint64_t seed, int threads, char** csv,
                         char** summary_json) {
  return guarded([&] {
    need(m, "measure");
    need(csv, "csv");
    need(summary_json, "summary_json");
    auto w = walk_sample(m->measure, n, count, seed, threads);
    *csv = dup(w.csv);
    *summary_json = dup(w.summary.dump(2));
  });
}

hw_status hw_check_ids(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(Json(check_ids()).dump());
  });
}

hw_status hw_verify(const hw_group* g, const hw_measure* m, const char* check_id, const char* options_json,
                    char** report_json) {
  return guarded([&] {
    need(g, "group");
    need(check_id, "check_id");
    need(report_json, "report_json");
    const ModelPtr& model = m ? m->measure.model_ptr() : g->model;
    if (m && m->measure.model_ptr() != g->model) {
      throw Error(ErrorCode::BackendMismatch, "measure was created on a different group handle", "measure");
    }
    *report_json = dup(run_check(check_id, model, m ? &m->measure : nullptr, options_of(options_json)).dump(2));
  });
}

hw_status hw_experiment(const hw_measure* m, const char* kind, const char* options_json, char** series_csv,
                        char** summary_json, char** plot_data) {
  return guarded([&] {
    need(m, "measure");
    need(kind, "kind");
    need(series_csv, "series_csv");
    need(summary_json, "summary_json");
    need(plot_data, "plot_data");
    auto a = run_experiment_kind(kind, m->measure, options_of(options_json));
    *series_csv = dup(a.series_csv);
    *summary_json = dup(a.summary.dump(2));
    *plot_data = dup(a.plot_data);
  });
}

}  // extern "C"
