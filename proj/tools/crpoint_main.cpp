// crpoint CLI: classification, normal forms, certified homotopies, surface
// verification and Levi scans over the shared-library C API.

#include <crpoint/crpoint.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

int fail_input(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  return CRP_INVALID_INPUT;
}

bool read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return true;
}

int emit(const char* text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text, stdout);
    std::fputc('\n', stdout);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) return 1;
  out << text << '\n';
  return out.good() ? 0 : 1;
}

int report_status(crp_status st) {
  if (st != CRP_OK) {
    const char* reason = crp_last_error_reason();
    const char* what = crp_last_error();
    if (reason && *reason)
      std::fprintf(stderr, "error [%s]: %s\n", reason, what);
    else if (what && *what)
      std::fprintf(stderr, "error: %s\n", what);
  }
  return static_cast<int>(st);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int resolve_threads(int threads_flag) {
  if (threads_flag > 0) return threads_flag;
  if (const char* env = std::getenv("CRPOINT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { crp_string_free(s); }
};

struct PairGuard {
  crp_pair* p = nullptr;
  ~PairGuard() { crp_pair_free(p); }
};

struct PathGuard {
  crp_path* p = nullptr;
  ~PathGuard() { crp_path_free(p); }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic complex points: classification, certified homotopies, "
               "surface checks and Levi scans"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  double tol = 0;
  std::string out_path;
  bool strict = false;
  int threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--tol", tol, "classification / canonicalization tolerance");
  app.add_option("--out", out_path, "write the report to this file instead of stdout");
  app.add_flag("--strict", strict, "treat degenerate classifications as failures");
  app.add_option("--threads", threads, "worker threads (env CRPOINT_THREADS as fallback)");
  app.add_option("--seed", seed, "seed for randomized stages");

  std::string pair_file, path_file;

  auto* classify = app.add_subcommand("classify", "sign-classify a pair file");
  classify->add_option("pair", pair_file, "pair JSON file")->required();

  auto* nform = app.add_subcommand("normal-form", "h-congruence normal form with witness");
  nform->add_option("pair", pair_file, "pair JSON file")->required();

  auto* homotopy = app.add_subcommand("homotopy", "certified path to the sign's model pair");
  int samples = 512, max_retries = 32;
  double margin = 1e-6, eta = 0.5, perturb_eta = 1e-2;
  homotopy->add_option("pair", pair_file, "pair JSON file")->required();
  homotopy->add_option("--samples", samples, "certificate samples per segment");
  homotopy->add_option("--margin", margin, "certificate floor on normalized |det4|");
  homotopy->add_option("--max-retries", max_retries, "search retries");
  homotopy->add_option("--eta", eta, "bump amplitude");
  homotopy->add_option("--perturb-eta", perturb_eta, "generic perturbation size");

  auto* surface = app.add_subcommand("surface-check", "Theorem-1 verification of a path file");
  double epsilon = 1.0;
  int n_used = 0, s_count = 64, sphere_u = 32, sphere_t1 = 32, sphere_t2 = 32, fd_checks = 100;
  bool no_reverse = false;
  surface->add_option("path", path_file, "path JSON file")->required();
  surface->add_option("--epsilon", epsilon, "model ball radius");
  surface->add_option("--n", n_used, "root index (0 = computed n_required)");
  surface->add_option("--grid-s", s_count, "s samples");
  surface->add_option("--grid-u", sphere_u, "sphere latitude samples");
  surface->add_option("--grid-t1", sphere_t1, "first phase samples");
  surface->add_option("--grid-t2", sphere_t2, "second phase samples");
  surface->add_option("--fd-checks", fd_checks, "random Wirtinger cross-check points");
  surface->add_flag("--no-reverse", no_reverse,
                    "treat path(0) as the center pair instead of reversing");

  auto* levi = app.add_subcommand("levi-scan", "positivity scan of a model Levi form");
  std::string model = "elliptic";
  double radius = 0.05;
  int gridsize = 20000;
  bool spectra_csv = false;
  levi->add_option("--model", model, "elliptic | hyperbolic")->required();
  levi->add_option("--radius", radius, "scan radius (<= 0.1)");
  levi->add_option("--grid", gridsize, "low-discrepancy points");
  levi->add_flag("--spectra-csv", spectra_csv, "emit per-point spectra as CSV");

  auto* growth = app.add_subcommand("growth-bounds", "estimate c, C with f ~ dist^2");
  growth->add_option("--model", model, "elliptic | hyperbolic")->required();
  growth->add_option("--radius", radius, "scan radius (<= 0.1)");
  growth->add_option("--grid", gridsize, "low-discrepancy points");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
  std::string cases;
  int reduction = 1;
  selftest->add_option("--cases", cases, "comma-separated criterion ids (default all)");
  selftest->add_option("--reduction", reduction, "workload divider for smoke runs");

  CLI11_PARSE(app, argc, argv);
  int nthreads = resolve_threads(threads);

  if (*classify || *nform || *homotopy) {
    std::string text;
    if (!read_file(pair_file, &text)) return fail_input("cannot read " + pair_file);
    PairGuard pair;
    if (crp_status st = crp_pair_from_json(text.c_str(), &pair.p); st != CRP_OK)
      return report_status(st);

    if (*classify) {
      StringGuard rep;
      double t = (tol > 0) ? tol : 1e-12;
      if (crp_status st = crp_classify(pair.p, t, &rep.s); st != CRP_OK)
        return report_status(st);
      if (emit(rep.s, out_path) != 0) return fail_input("cannot write " + out_path);
      if (strict && std::string(rep.s).find("\"sign\":\"degenerate\"") != std::string::npos) {
        std::fprintf(stderr, "error [degenerate_pair]: strict mode, degenerate classification\n");
        return CRP_DEGENERATE;
      }
      return 0;
    }
    if (*nform) {
      StringGuard rep;
      double t = (tol > 0) ? tol : 1e-7;
      if (crp_status st = crp_normal_form(pair.p, t, &rep.s); st != CRP_OK)
        return report_status(st);
      if (emit(rep.s, out_path) != 0) return fail_input("cannot write " + out_path);
      return 0;
    }
    // homotopy
    std::string opts = "{\"samples\":" + std::to_string(samples) +
                       ",\"margin\":" + num(margin) +
                       ",\"seed\":" + std::to_string(seed) +
                       ",\"max_retries\":" + std::to_string(max_retries) +
                       ",\"eta\":" + num(eta) +
                       ",\"perturb_eta\":" + num(perturb_eta) +
                       ",\"threads\":" + std::to_string(nthreads);
    if (tol > 0) opts += ",\"tol\":" + num(tol);
    opts += "}";
    PathGuard path;
    if (crp_status st = crp_connect_to_model(pair.p, opts.c_str(), &path.p); st != CRP_OK)
      return report_status(st);
    StringGuard rep;
    if (crp_status st = crp_path_to_json(path.p, &rep.s); st != CRP_OK)
      return report_status(st);
    if (emit(rep.s, out_path) != 0) return fail_input("cannot write " + out_path);
    return 0;
  }

  if (*surface) {
    std::string text;
    if (!read_file(path_file, &text)) return fail_input("cannot read " + path_file);
    PathGuard path;
    if (crp_status st = crp_path_from_json(text.c_str(), &path.p); st != CRP_OK)
      return report_status(st);
    std::string opts = "{\"epsilon\":" + num(epsilon) +
                       ",\"n\":" + std::to_string(n_used) +
                       ",\"s_count\":" + std::to_string(s_count) +
                       ",\"sphere_u\":" + std::to_string(sphere_u) +
                       ",\"sphere_t1\":" + std::to_string(sphere_t1) +
                       ",\"sphere_t2\":" + std::to_string(sphere_t2) +
                       ",\"fd_checks\":" + std::to_string(fd_checks) +
                       ",\"seed\":" + std::to_string(seed) +
                       ",\"threads\":" + std::to_string(nthreads) +
                       ",\"reverse\":" + (no_reverse ? std::string("0") : std::string("1"));
    if (tol > 0) opts += ",\"tol\":" + num(tol);
    opts += "}";
    StringGuard rep;
    crp_status st = crp_surface_check(path.p, opts.c_str(), &rep.s);
    if (rep.s != nullptr) {
      if (emit(rep.s, out_path) != 0) return fail_input("cannot write " + out_path);
    }
    return (st == CRP_OK) ? 0 : report_status(st);
  }

  if (*levi || *growth) {
    std::string opts = "{\"model\":\"" + model + "\"" +
                       ",\"radius\":" + num(radius) +
                       ",\"gridsize\":" + std::to_string(gridsize) +
                       ",\"seed\":" + std::to_string(seed) +
                       ",\"threads\":" + std::to_string(nthreads);
    if (*levi && spectra_csv) opts += ",\"spectra_csv\":1";
    opts += "}";
    StringGuard rep;
    crp_status st = (*levi) ? crp_levi_scan(opts.c_str(), &rep.s)
                            : crp_growth_bounds(opts.c_str(), &rep.s);
    if (rep.s != nullptr) {
      if (emit(rep.s, out_path) != 0) return fail_input("cannot write " + out_path);
    }
    return (st == CRP_OK) ? 0 : report_status(st);
  }

  if (*selftest) {
    std::uint64_t st_seed = (seed != 0) ? seed : 20260810ULL;
    std::string opts = "{\"seed\":" + std::to_string(st_seed) +
                       ",\"threads\":" + std::to_string(nthreads) +
                       ",\"reduction\":" + std::to_string(reduction);
    if (!cases.empty()) opts += ",\"cases\":\"" + cases + "\"";
    opts += "}";
    StringGuard rep;
    crp_status st = crp_selftest(opts.c_str(), &rep.s);
    if (rep.s != nullptr) {
      if (emit(rep.s, out_path) != 0) return fail_input("cannot write " + out_path);
    }
    return (st == CRP_OK) ? 0 : report_status(st);
  }

  return fail_input("no subcommand");
}
