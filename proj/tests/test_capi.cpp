// Exercises the shared-library C API surface only (opaque handles, status
// codes, JSON formats) — no internal headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <crpoint/crpoint.h>

#include <cstring>
#include <string>

namespace {

const char* kEli2 = R"({"A":[[[0,0],[0,0]],[[0,0],[0,0]]],"B":[[[1,0],[0,0]],[[0,0],[1,0]]]})";
const char* kHyp1 = R"({"A":[[[1,0],[0,0]],[[0,0],[0,0]]],"B":[[[0,0],[0,0]],[[0,0],[1,0]]]})";

struct Str {
  char* s = nullptr;
  ~Str() { crp_string_free(s); }
  std::string view() const { return s ? std::string(s) : std::string(); }
};

} // namespace

TEST_CASE("version and error plumbing") {
  CHECK(std::strlen(crp_version()) > 0);
  crp_pair* p = nullptr;
  CHECK(crp_pair_from_json("not json", &p) == CRP_INVALID_INPUT);
  CHECK(std::strlen(crp_last_error()) > 0);
  CHECK(std::string(crp_last_error_reason()) == "bad_json");
}

TEST_CASE("pair round-trip and validation") {
  crp_pair* p = nullptr;
  REQUIRE(crp_pair_from_json(kEli2, &p) == CRP_OK);
  Str out;
  REQUIRE(crp_pair_to_json(p, &out.s) == CRP_OK);
  crp_pair* p2 = nullptr;
  REQUIRE(crp_pair_from_json(out.s, &p2) == CRP_OK);
  Str out2;
  REQUIRE(crp_pair_to_json(p2, &out2.s) == CRP_OK);
  CHECK(out.view() == out2.view()); // byte-identical round trip
  crp_pair_free(p);
  crp_pair_free(p2);

  // non-symmetric B rejected with the invariant named
  const char* bad =
      R"({"A":[[[1,0],[0,0]],[[0,0],[1,0]]],"B":[[[0,0],[1,0]],[[2,0],[0,0]]]})";
  crp_pair* pb = nullptr;
  CHECK(crp_pair_from_json(bad, &pb) == CRP_INVALID_INPUT);
  CHECK(std::string(crp_last_error_reason()) == "non_symmetric_B");

  const char* unknown = R"({"A":[[[1,0],[0,0]],[[0,0],[1,0]]],"B":[[[0,0],[0,0]],[[0,0],[0,0]]],"C":1})";
  CHECK(crp_pair_from_json(unknown, &pb) == CRP_INVALID_INPUT);
}

TEST_CASE("classify: model pairs and determinism") {
  crp_pair* pe = nullptr;
  REQUIRE(crp_pair_from_json(kEli2, &pe) == CRP_OK);
  Str r1, r2;
  REQUIRE(crp_classify(pe, 1e-12, &r1.s) == CRP_OK);
  REQUIRE(crp_classify(pe, 1e-12, &r2.s) == CRP_OK);
  CHECK(r1.view() == r2.view());
  CHECK(r1.view().find("\"sign\":\"elliptic\"") != std::string::npos);
  CHECK(r1.view().find("\"det4\":1,") != std::string::npos);
  crp_pair_free(pe);

  crp_pair* ph = nullptr;
  REQUIRE(crp_pair_from_json(kHyp1, &ph) == CRP_OK);
  Str rh;
  REQUIRE(crp_classify(ph, 1e-12, &rh.s) == CRP_OK);
  CHECK(rh.view().find("\"sign\":\"hyperbolic\"") != std::string::npos);
  CHECK(rh.view().find("\"det4\":-1,") != std::string::npos);
  crp_pair_free(ph);
}

TEST_CASE("normal form: generic pair and non-generic reasons") {
  // diag(1, i) with B = diag(1, 2): TypeI with theta = pi/2
  const char* gen =
      R"({"A":[[[1,0],[0,0]],[[0,0],[0,1]]],"B":[[[1,0],[0,0]],[[0,0],[2,0]]]})";
  crp_pair* p = nullptr;
  REQUIRE(crp_pair_from_json(gen, &p) == CRP_OK);
  Str nf;
  REQUIRE(crp_normal_form(p, 1e-7, &nf.s) == CRP_OK);
  CHECK(nf.view().find("\"tag\":\"type_i\"") != std::string::npos);
  CHECK(nf.view().find("\"theta\":1.5707963267948966") != std::string::npos);
  crp_pair_free(p);

  // TypeII cosquare: A = (0,1;1,i)
  const char* t2 =
      R"({"A":[[[0,0],[1,0]],[[1,0],[0,1]]],"B":[[[1,0],[0,0]],[[0,0],[1,0]]]})";
  REQUIRE(crp_pair_from_json(t2, &p) == CRP_OK);
  Str nf2;
  CHECK(crp_normal_form(p, 1e-7, &nf2.s) == CRP_DEGENERATE);
  CHECK(std::string(crp_last_error_reason()) == "non_generic:type_ii");
  crp_pair_free(p);

  // singular A
  REQUIRE(crp_pair_from_json(kEli2, &p) == CRP_OK);
  Str nf3;
  CHECK(crp_normal_form(p, 1e-7, &nf3.s) == CRP_DEGENERATE);
  CHECK(std::string(crp_last_error_reason()) == "degenerate_A");
  crp_pair_free(p);
}

TEST_CASE("homotopy handles: connect, JSON round-trip, eval, verify") {
  crp_pair* p = nullptr;
  REQUIRE(crp_pair_random(42, 1.0, &p) == CRP_OK);
  crp_path* path = nullptr;
  crp_status st = crp_connect_to_model(p, R"({"samples":257,"seed":7})", &path);
  REQUIRE(st == CRP_OK);

  Str pj;
  REQUIRE(crp_path_to_json(path, &pj.s) == CRP_OK);
  CHECK(pj.view().find("\"certificate\"") != std::string::npos);
  CHECK(pj.view().find("\"pass\":true") != std::string::npos);

  crp_path* path2 = nullptr;
  REQUIRE(crp_path_from_json(pj.s, &path2) == CRP_OK);
  Str pj2;
  REQUIRE(crp_path_to_json(path2, &pj2.s) == CRP_OK);
  CHECK(pj.view() == pj2.view()); // byte-identical round trip

  // evaluation is deterministic and the path start carries the input's sign
  crp_pair* start = nullptr;
  REQUIRE(crp_path_eval(path2, 0.0, &start) == CRP_OK);
  crp_pair* start2 = nullptr;
  REQUIRE(crp_path_eval(path2, 0.0, &start2) == CRP_OK);
  Str sj, sj2;
  REQUIRE(crp_pair_to_json(start, &sj.s) == CRP_OK);
  REQUIRE(crp_pair_to_json(start2, &sj2.s) == CRP_OK);
  CHECK(sj.view() == sj2.view());
  Str cs, cp;
  REQUIRE(crp_classify(start, 1e-12, &cs.s) == CRP_OK);
  REQUIRE(crp_classify(p, 1e-12, &cp.s) == CRP_OK);
  auto sign_of = [](const std::string& rep) {
    size_t i = rep.find("\"sign\":");
    return rep.substr(i, rep.find(',', i) - i);
  };
  CHECK(sign_of(cs.view()) == sign_of(cp.view()));
  crp_pair_free(start2);

  Str cert;
  CHECK(crp_path_verify(path2, 129, 1e-6, &cert.s) == CRP_OK);
  CHECK(cert.view().find("\"pass\":true") != std::string::npos);

  crp_pair_free(start);
  crp_pair_free(p);
  crp_path_free(path);
  crp_path_free(path2);

  // unknown option key rejected
  crp_pair* q = nullptr;
  REQUIRE(crp_pair_random(43, 1.0, &q) == CRP_OK);
  crp_path* bad = nullptr;
  CHECK(crp_connect_to_model(q, R"({"sample":1})", &bad) == CRP_INVALID_INPUT);
  crp_pair_free(q);
}

TEST_CASE("surface check over the C API") {
  crp_pair* p = nullptr;
  REQUIRE(crp_pair_from_json(kHyp1, &p) == CRP_OK);
  crp_path* path = nullptr;
  REQUIRE(crp_connect_to_model(p, "", &path) == CRP_OK);
  Str rep;
  crp_status st = crp_surface_check(
      path, R"({"s_count":16,"sphere_u":9,"sphere_t1":8,"sphere_t2":8,"fd_checks":20})",
      &rep.s);
  CHECK(st == CRP_OK);
  CHECK(rep.view().find("\"pass\":true") != std::string::npos);
  CHECK(rep.view().find("\"n_required\":1") != std::string::npos);
  crp_pair_free(p);
  crp_path_free(path);
}

TEST_CASE("levi scan, growth bounds, selftest subset over the C API") {
  Str rep;
  CHECK(crp_levi_scan(R"({"model":"hyperbolic","radius":0.05,"gridsize":2000})", &rep.s) ==
        CRP_OK);
  CHECK(rep.view().find("\"violations\":[]") != std::string::npos);

  Str csv;
  CHECK(crp_levi_scan(R"({"model":"elliptic","radius":0.05,"gridsize":50,"spectra_csv":1})",
                      &csv.s) == CRP_OK);
  CHECK(csv.view().rfind("lambda1,lambda2,lambda3", 0) == 0);

  Str gb;
  CHECK(crp_growth_bounds(R"({"model":"elliptic","radius":0.05,"gridsize":500})", &gb.s) ==
        CRP_OK);
  CHECK(gb.view().find("\"c_est\":") != std::string::npos);

  Str bad;
  CHECK(crp_levi_scan(R"({"model":"flat"})", &bad.s) == CRP_INVALID_INPUT);

  Str st;
  CHECK(crp_selftest(R"({"cases":"1,2","reduction":10})", &st.s) == CRP_OK);
  CHECK(st.view().find("\"all_pass\":true") != std::string::npos);
}
