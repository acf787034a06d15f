#include "crpoint/crpoint.h"

#include "errors.hpp"
#include "jsonio.hpp"
#include "selftest.hpp"

#include <json.hpp>

#include <cstring>
#include <string>

using namespace crpt;

struct crp_pair {
  MatrixPair p;
};

struct crp_path {
  homotopy::HomotopyPath path;
};

namespace {

thread_local std::string t_error;
thread_local std::string t_reason;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

crp_status to_status(const error& e) {
  t_error = e.what();
  t_reason = e.reason();
  switch (e.code()) {
    case errc::ok: return CRP_OK;
    case errc::verify_failed: return CRP_VERIFY_FAILED;
    case errc::invalid_input: return CRP_INVALID_INPUT;
    case errc::degenerate: return CRP_DEGENERATE;
    case errc::internal: return CRP_INTERNAL;
  }
  return CRP_INTERNAL;
}

template <typename Fn>
crp_status guarded(Fn&& fn) {
  try {
    t_error.clear();
    t_reason.clear();
    return fn();
  } catch (const error& e) {
    return to_status(e);
  } catch (const std::exception& e) {
    t_error = e.what();
    t_reason = "internal";
    return CRP_INTERNAL;
  }
}

// tolerant options object: empty/null input means all defaults; unknown keys
// are rejected so typos fail loudly
nlohmann::json parse_options(const char* text, std::initializer_list<const char*> allowed) {
  if (text == nullptr || *text == '\0') return nlohmann::json::object();
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw_invalid("bad_options", "options: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw_invalid("unknown_key", "options: unknown key " + it.key());
  }
  return j;
}

double opt_num(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw_invalid("bad_options", std::string("options: ") + key);
  return j[key].get<double>();
}

} // namespace

extern "C" {

const char* crp_version(void) { return "1.0.0"; }

const char* crp_last_error(void) { return t_error.c_str(); }
const char* crp_last_error_reason(void) { return t_reason.c_str(); }

void crp_string_free(char* s) { std::free(s); }

crp_status crp_pair_from_json(const char* json, crp_pair** out) {
  return guarded([&]() -> crp_status {
    if (!json || !out) throw_invalid("null_argument", "crp_pair_from_json: null argument");
    *out = new crp_pair{jsonio::pair_from_json(json)};
    return CRP_OK;
  });
}

crp_status crp_pair_random(uint64_t seed, double scale, crp_pair** out) {
  return guarded([&]() -> crp_status {
    if (!out) throw_invalid("null_argument", "crp_pair_random: null argument");
    if (!(scale > 0) || !std::isfinite(scale))
      throw_invalid("bad_scale", "crp_pair_random: scale must be positive");
    *out = new crp_pair{random_pair(seed, scale)};
    return CRP_OK;
  });
}

crp_status crp_pair_to_json(const crp_pair* p, char** out_json) {
  return guarded([&]() -> crp_status {
    if (!p || !out_json) throw_invalid("null_argument", "crp_pair_to_json: null argument");
    *out_json = dup_string(jsonio::pair_to_json(p->p));
    return CRP_OK;
  });
}

void crp_pair_free(crp_pair* p) { delete p; }

crp_status crp_classify(const crp_pair* p, double tol, char** report_json) {
  return guarded([&]() -> crp_status {
    if (!p || !report_json) throw_invalid("null_argument", "crp_classify: null argument");
    if (tol <= 0) tol = 1e-12;
    SignClass sc = sign_class(p->p, tol);
    *report_json = dup_string(jsonio::classify_report_to_json(sc, p->p, 1e-7));
    return CRP_OK;
  });
}

crp_status crp_normal_form(const crp_pair* p, double tol, char** nf_json) {
  return guarded([&]() -> crp_status {
    if (!p || !nf_json) throw_invalid("null_argument", "crp_normal_form: null argument");
    if (tol <= 0) tol = 1e-7;
    canon::NormalForm nf = canon::normal_form(p->p, tol);
    *nf_json = dup_string(jsonio::normal_form_to_json(nf));
    return CRP_OK;
  });
}

crp_status crp_connect_to_model(const crp_pair* p, const char* options_json, crp_path** out) {
  return guarded([&]() -> crp_status {
    if (!p || !out) throw_invalid("null_argument", "crp_connect_to_model: null argument");
    nlohmann::json j = parse_options(options_json, {"tol", "samples", "margin", "seed",
                                                    "max_retries", "eta", "perturb_eta",
                                                    "threads"});
    homotopy::ConnectOptions o;
    o.tol = opt_num(j, "tol", o.tol);
    o.samples = static_cast<int>(opt_num(j, "samples", o.samples));
    o.margin = opt_num(j, "margin", o.margin);
    o.seed = static_cast<std::uint64_t>(opt_num(j, "seed", 0));
    o.max_retries = static_cast<int>(opt_num(j, "max_retries", o.max_retries));
    o.eta = opt_num(j, "eta", o.eta);
    o.perturb_eta = opt_num(j, "perturb_eta", o.perturb_eta);
    o.threads = static_cast<int>(opt_num(j, "threads", o.threads));
    *out = new crp_path{homotopy::connect_to_model(p->p, o)};
    return CRP_OK;
  });
}

crp_status crp_path_from_json(const char* json, crp_path** out) {
  return guarded([&]() -> crp_status {
    if (!json || !out) throw_invalid("null_argument", "crp_path_from_json: null argument");
    *out = new crp_path{jsonio::path_from_json(json)};
    return CRP_OK;
  });
}

crp_status crp_path_to_json(const crp_path* path, char** out_json) {
  return guarded([&]() -> crp_status {
    if (!path || !out_json) throw_invalid("null_argument", "crp_path_to_json: null argument");
    *out_json = dup_string(jsonio::path_to_json(path->path));
    return CRP_OK;
  });
}

void crp_path_free(crp_path* path) { delete path; }

crp_status crp_path_eval(const crp_path* path, double t, crp_pair** out) {
  return guarded([&]() -> crp_status {
    if (!path || !out) throw_invalid("null_argument", "crp_path_eval: null argument");
    *out = new crp_pair{homotopy::eval_path(path->path, t)};
    return CRP_OK;
  });
}

crp_status crp_path_verify(const crp_path* path, int samples, double margin,
                           char** certificate_json) {
  return guarded([&]() -> crp_status {
    if (!path || !certificate_json)
      throw_invalid("null_argument", "crp_path_verify: null argument");
    homotopy::Certificate c = homotopy::verify_nondegenerate(path->path, samples, margin);
    *certificate_json = dup_string(jsonio::certificate_to_json(c));
    return c.pass ? CRP_OK : CRP_VERIFY_FAILED;
  });
}

crp_status crp_surface_check(const crp_path* path, const char* options_json,
                             char** report_json) {
  return guarded([&]() -> crp_status {
    if (!path || !report_json) throw_invalid("null_argument", "crp_surface_check: null argument");
    nlohmann::json j = parse_options(options_json, {"epsilon", "n", "tol", "s_count", "sphere_u",
                                                    "sphere_t1", "sphere_t2", "fd_checks",
                                                    "seed", "threads", "reverse", "samples",
                                                    "margin"});
    surface::SurfaceSpec sp;
    sp.path = path->path;
    sp.epsilon = opt_num(j, "epsilon", 1.0);
    sp.reverse = opt_num(j, "reverse", 1.0) != 0.0;
    int samples = static_cast<int>(opt_num(j, "samples", 512));
    double margin = opt_num(j, "margin", 1e-6);
    sp.path.certificate = homotopy::verify_nondegenerate(sp.path, samples, margin);
    if (!sp.path.certificate.pass)
      throw_verify("uncertified_path", "surface check: the path certificate does not pass");
    sp = surface::flatten(sp);

    surface::GridSpec grid;
    grid.s_count = static_cast<int>(opt_num(j, "s_count", grid.s_count));
    grid.sphere_u = static_cast<int>(opt_num(j, "sphere_u", grid.sphere_u));
    grid.sphere_t1 = static_cast<int>(opt_num(j, "sphere_t1", grid.sphere_t1));
    grid.sphere_t2 = static_cast<int>(opt_num(j, "sphere_t2", grid.sphere_t2));
    grid.fd_checks = static_cast<int>(opt_num(j, "fd_checks", grid.fd_checks));
    grid.seed = static_cast<std::uint64_t>(opt_num(j, "seed", 0));
    grid.threads = static_cast<int>(opt_num(j, "threads", grid.threads));

    int n = static_cast<int>(opt_num(j, "n", 0));
    if (n <= 0) {
      surface::Bounds b = surface::bounds(sp, grid);
      sp.n = b.n_required;
    } else {
      sp.n = n;
    }
    double tol = opt_num(j, "tol", 1e-9);
    surface::NoNewReport rep = surface::verify_no_new_complex_points(sp, grid, tol);
    *report_json = dup_string(jsonio::surface_report_to_json(rep));
    return rep.pass ? CRP_OK : CRP_VERIFY_FAILED;
  });
}

crp_status crp_levi_scan(const char* options_json, char** report_json) {
  return guarded([&]() -> crp_status {
    if (!report_json) throw_invalid("null_argument", "crp_levi_scan: null argument");
    nlohmann::json j = parse_options(options_json, {"model", "radius", "gridsize", "origin_tol",
                                                    "eig_tol", "seed", "threads", "spectra_csv"});
    std::string model = j.contains("model") ? j["model"].get<std::string>() : "elliptic";
    levi::ModelKind kind;
    if (model == "elliptic")
      kind = levi::ModelKind::Elliptic;
    else if (model == "hyperbolic")
      kind = levi::ModelKind::Hyperbolic;
    else
      throw_invalid("bad_model", "levi scan: model must be elliptic or hyperbolic");
    levi::ScanOptions o;
    o.radius = opt_num(j, "radius", o.radius);
    o.gridsize = static_cast<int>(opt_num(j, "gridsize", o.gridsize));
    o.origin_tol = opt_num(j, "origin_tol", o.origin_tol);
    o.eig_tol = opt_num(j, "eig_tol", o.eig_tol);
    o.seed = static_cast<std::uint64_t>(opt_num(j, "seed", 0));
    o.threads = static_cast<int>(opt_num(j, "threads", o.threads));
    o.keep_spectra = opt_num(j, "spectra_csv", 0.0) != 0.0;
    levi::LeviReport rep = levi::positivity_scan(kind, o);
    *report_json = dup_string(o.keep_spectra ? jsonio::spectra_to_csv(rep)
                                             : jsonio::levi_report_to_json(rep));
    bool ok = rep.violations.empty() &&
              (kind == levi::ModelKind::Elliptic ? rep.positive_definite == rep.points_scanned
                                                 : rep.min_trace > 0);
    return ok ? CRP_OK : CRP_VERIFY_FAILED;
  });
}

crp_status crp_growth_bounds(const char* options_json, char** report_json) {
  return guarded([&]() -> crp_status {
    if (!report_json) throw_invalid("null_argument", "crp_growth_bounds: null argument");
    nlohmann::json j = parse_options(options_json, {"model", "radius", "gridsize", "seed",
                                                    "threads"});
    std::string model = j.contains("model") ? j["model"].get<std::string>() : "elliptic";
    levi::ModelKind kind;
    if (model == "elliptic")
      kind = levi::ModelKind::Elliptic;
    else if (model == "hyperbolic")
      kind = levi::ModelKind::Hyperbolic;
    else
      throw_invalid("bad_model", "growth bounds: model must be elliptic or hyperbolic");
    double radius = opt_num(j, "radius", 0.05);
    int gridsize = static_cast<int>(opt_num(j, "gridsize", 5000));
    std::uint64_t seed = static_cast<std::uint64_t>(opt_num(j, "seed", 0));
    int threads = static_cast<int>(opt_num(j, "threads", 1));
    levi::GrowthBounds gb = levi::growth_bounds(kind, radius, gridsize, seed, threads);
    *report_json = dup_string(jsonio::growth_to_json(gb));
    return (gb.c_est > 0 && std::isfinite(gb.C_est) && gb.points_used > 0) ? CRP_OK
                                                                           : CRP_VERIFY_FAILED;
  });
}

crp_status crp_selftest(const char* options_json, char** summary_json) {
  return guarded([&]() -> crp_status {
    if (!summary_json) throw_invalid("null_argument", "crp_selftest: null argument");
    nlohmann::json j = parse_options(options_json, {"seed", "threads", "reduction", "cases"});
    selftest::Options o;
    o.seed = static_cast<std::uint64_t>(opt_num(j, "seed", o.seed));
    o.threads = static_cast<int>(opt_num(j, "threads", o.threads));
    o.reduction = static_cast<int>(opt_num(j, "reduction", o.reduction));
    if (o.reduction < 1) o.reduction = 1;
    std::vector<selftest::CriterionResult> rs;
    if (j.contains("cases")) {
      if (!j["cases"].is_string()) throw_invalid("bad_options", "options: cases");
      std::string cases = j["cases"].get<std::string>();
      size_t pos = 0;
      while (pos < cases.size()) {
        size_t comma = cases.find(',', pos);
        if (comma == std::string::npos) comma = cases.size();
        int id = std::atoi(cases.substr(pos, comma - pos).c_str());
        rs.push_back(selftest::run_criterion(id, o));
        pos = comma + 1;
      }
    } else {
      rs = selftest::run_all(o);
    }
    *summary_json = dup_string(selftest::summary_json(rs));
    for (const auto& r : rs)
      if (!r.pass) return CRP_VERIFY_FAILED;
    return CRP_OK;
  });
}

} // extern "C"
