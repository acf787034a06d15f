#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jsonio.hpp"
#include "errors.hpp"

#include <cmath>

using namespace crpt;
using namespace crpt::jsonio;
using kernel::cx;
using kernel::Mat2;
using kernel::norm_fro;

TEST_CASE("number formatting is fixed at 17 significant digits") {
  CHECK(num(0.25) == "0.25");
  CHECK(num(1.0) == "1");
  CHECK(num(1.0 / 3.0) == "0.33333333333333331");
  CHECK(num(-2.5e-7) == "-2.4999999999999999e-07");
}

TEST_CASE("pair JSON: round-trip, rejection paths") {
  MatrixPair p = random_pair(8, 1.0);
  std::string text = pair_to_json(p);
  MatrixPair q = pair_from_json(text);
  CHECK(norm_fro(p.a - q.a) == 0.0);
  CHECK(norm_fro(p.b - q.b) == 0.0);
  CHECK(pair_to_json(q) == text);

  CHECK_THROWS_AS(pair_from_json("nonsense"), error);
  CHECK_THROWS_AS(pair_from_json("{\"A\":[[[0,0],[0,0]],[[0,0],[0,0]]]}"), error);
  CHECK_THROWS_AS(
      pair_from_json(
          R"({"A":[[[0,0],[0,0]],[[0,0],[0,0]]],"B":[[[0,0],[1,0]],[[0,0],[0,0]]]})"),
      error); // non-symmetric B
  CHECK_THROWS_AS(
      pair_from_json(
          R"({"A":[[[0,0],[0,0]],[[0,0],[0,0]]],"B":[[[0,0],[0,0]],[[0,0],[0,0]]],"X":3})"),
      error); // unknown key
}

TEST_CASE("path JSON: every segment kind round-trips and re-evaluates") {
  MatrixPair base = random_pair(21, 1.0);
  homotopy::HomotopyPath path;
  path.segments.push_back(homotopy::constant_segment(base));
  path.segments.push_back(homotopy::linear_segment(base, random_pair(22, 1.0)));
  path.segments.push_back(homotopy::group_segment(random_pair(23, 1.0), random_group_element(24)));
  path.segments.push_back(homotopy::catalog_segment("eli3-to-eli2-bump", {{"eta", 0.5}}));
  path.certificate = homotopy::verify_nondegenerate(path, 17, 1e-9);

  std::string text = path_to_json(path);
  homotopy::HomotopyPath back = path_from_json(text);
  CHECK(path_to_json(back) == text);
  REQUIRE(back.segments.size() == path.segments.size());
  for (double t : {0.0, 0.13, 0.42, 0.77, 1.0}) {
    MatrixPair a = homotopy::eval_path(path, t);
    MatrixPair b = homotopy::eval_path(back, t);
    CHECK(norm_fro(a.a - b.a) < 1e-14);
    CHECK(norm_fro(a.b - b.b) < 1e-14);
  }

  CHECK_THROWS_AS(path_from_json("{\"segments\":[]}"), error);
  CHECK_THROWS_AS(path_from_json("{\"segments\":[{\"kind\":\"warp\"}]}"), error);
}

TEST_CASE("report serializers emit the documented keys") {
  MatrixPair p{Mat2::diag(cx(1), cx(0, 1)), Mat2::diag(1, 2)};
  std::string rep = classify_report_to_json(sign_class(p), p, 1e-7);
  for (const char* key : {"\"sign\"", "\"det4\"", "\"det4_normalized\"", "\"cosquare_class\"",
                          "\"genericity_defect\""})
    CHECK(rep.find(key) != std::string::npos);

  canon::NormalForm nf = canon::normal_form(p);
  std::string nfj = normal_form_to_json(nf);
  for (const char* key : {"\"class\"", "\"B_reduced\"", "\"witness\"", "\"zeta\"", "\"P\""})
    CHECK(nfj.find(key) != std::string::npos);

  levi::ScanOptions so;
  so.gridsize = 50;
  levi::LeviReport lr = levi::positivity_scan(levi::ModelKind::Elliptic, so);
  std::string lj = levi_report_to_json(lr);
  for (const char* key : {"\"points_scanned\"", "\"violations\"", "\"min_margin\""})
    CHECK(lj.find(key) != std::string::npos);
}
