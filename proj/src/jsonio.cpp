#include "jsonio.hpp"

#include "errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace crpt::jsonio {

using kernel::cx;
using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string cnum(cx v) { return "[" + num(v.real()) + "," + num(v.imag()) + "]"; }

std::string mat2(const Mat2& m) {
  return "[[" + cnum(m(0, 0)) + "," + cnum(m(0, 1)) + "],[" + cnum(m(1, 0)) + "," +
         cnum(m(1, 1)) + "]]";
}

namespace {

std::string tag_name(SignTag t) {
  switch (t) {
    case SignTag::Elliptic: return "elliptic";
    case SignTag::Hyperbolic: return "hyperbolic";
    case SignTag::Degenerate: return "degenerate";
  }
  return "degenerate";
}

cx parse_complex(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw_invalid("bad_complex", std::string(what) + ": complex numbers are [re, im]");
  double re = j[0].get<double>(), im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im))
    throw_invalid("non_finite", std::string(what) + ": entries must be finite");
  return {re, im};
}

Mat2 parse_mat2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2)
    throw_invalid("bad_matrix", std::string(what) + ": matrices are [[c,c],[c,c]]");
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) m(i, k) = parse_complex(j[i][k], what);
  return m;
}

json parse_root(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw_invalid("bad_json", std::string(what) + ": malformed JSON");
  return j;
}

} // namespace

MatrixPair pair_from_json(const std::string& text) {
  json j = parse_root(text, "pair");
  if (!j.is_object()) throw_invalid("bad_pair", "pair: expected an object with keys A and B");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "A" && it.key() != "B")
      throw_invalid("unknown_key", "pair: unknown key " + it.key());
  if (!j.contains("A") || !j.contains("B"))
    throw_invalid("bad_pair", "pair: both A and B are required");
  return make_pair(parse_mat2(j["A"], "pair.A"), parse_mat2(j["B"], "pair.B"));
}

std::string pair_to_json(const MatrixPair& p) {
  return "{\"A\":" + mat2(p.a) + ",\"B\":" + mat2(p.b) + "}";
}

std::string cosquare_class_to_json(const canon::CosquareClass& c) {
  using Tag = canon::CosquareClass::Tag;
  switch (c.tag) {
    case Tag::TypeI:
      return "{\"tag\":\"type_i\",\"theta\":" + num(c.theta) + "}";
    case Tag::TypeII:
      return "{\"tag\":\"type_ii\"}";
    case Tag::TypeIII:
      return "{\"tag\":\"type_iii\",\"mu\":" + num(c.mu) + "}";
    case Tag::BoundaryThetaZero:
      return "{\"tag\":\"boundary_theta_zero\"}";
    case Tag::BoundaryThetaPi:
      return "{\"tag\":\"boundary_theta_pi\"}";
    case Tag::NearBoundary:
      return "{\"tag\":\"near_boundary\",\"defect\":" + num(c.defect) + "}";
  }
  return "{}";
}

std::string normal_form_to_json(const canon::NormalForm& nf) {
  std::string s = "{\"class\":" + cosquare_class_to_json(nf.cls);
  s += ",\"canonical_A\":" + mat2(nf.canonical_a);
  s += ",\"B_reduced\":" + mat2(nf.b_reduced);
  s += ",\"witness\":{\"zeta\":" + cnum(nf.witness.zeta) + ",\"P\":" + mat2(nf.witness.p) + "}";
  s += ",\"degenerate_warning\":";
  s += nf.degenerate_warning ? "true" : "false";
  s += "}";
  return s;
}

std::string certificate_to_json(const homotopy::Certificate& c) {
  std::string s = "{\"samples\":" + std::to_string(c.samples);
  s += ",\"min_abs_det4\":" + num(c.min_abs_det4);
  s += ",\"sign\":" + std::to_string(c.sign);
  s += ",\"min_abs_det4_normalized\":" + num(c.min_abs_det4_normalized);
  s += ",\"max_step\":" + num(c.max_step);
  s += ",\"margin\":" + num(c.margin);
  s += ",\"pass\":";
  s += c.pass ? "true" : "false";
  s += "}";
  return s;
}

namespace {

std::string segment_to_json(const homotopy::Segment& s) {
  using Kind = homotopy::Segment::Kind;
  switch (s.kind) {
    case Kind::Constant:
      return "{\"kind\":\"constant\",\"pair\":" + pair_to_json(s.p0) + "}";
    case Kind::Linear:
      return "{\"kind\":\"linear\",\"from\":" + pair_to_json(s.p0) +
             ",\"to\":" + pair_to_json(s.p1) + "}";
    case Kind::Group:
      return "{\"kind\":\"group\",\"base\":" + pair_to_json(s.base) +
             ",\"zeta\":" + cnum(s.g.zeta) + ",\"P\":" + mat2(s.g.p) + "}";
    case Kind::Catalog: {
      std::string out = "{\"kind\":\"catalog\",\"name\":\"" + s.name + "\",\"params\":{";
      bool first = true;
      for (const auto& [k, v] : s.params) {
        if (!first) out += ",";
        first = false;
        out += "\"" + k + "\":" + num(v);
      }
      out += "}}";
      return out;
    }
  }
  throw error(errc::internal, "bad_segment", "segment_to_json: corrupt kind");
}

homotopy::Segment segment_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw_invalid("bad_segment", "path: segments need a string kind");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "constant") {
    return homotopy::constant_segment(
        make_pair(parse_mat2(j.at("pair").at("A"), "segment"), parse_mat2(j.at("pair").at("B"), "segment")));
  }
  if (kind == "linear") {
    MatrixPair from = make_pair(parse_mat2(j.at("from").at("A"), "segment"),
                                parse_mat2(j.at("from").at("B"), "segment"));
    MatrixPair to = make_pair(parse_mat2(j.at("to").at("A"), "segment"),
                              parse_mat2(j.at("to").at("B"), "segment"));
    return homotopy::linear_segment(from, to);
  }
  if (kind == "group") {
    MatrixPair base = make_pair(parse_mat2(j.at("base").at("A"), "segment"),
                                parse_mat2(j.at("base").at("B"), "segment"));
    cx zeta = parse_complex(j.at("zeta"), "segment.zeta");
    Mat2 p = parse_mat2(j.at("P"), "segment.P");
    return homotopy::group_segment(base, make_group_element(zeta, p));
  }
  if (kind == "catalog") {
    if (!j.contains("name") || !j["name"].is_string() || !j.contains("params") ||
        !j["params"].is_object())
      throw_invalid("bad_segment", "path: catalog segments need name and params");
    std::map<std::string, double> params;
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
      if (!it.value().is_number())
        throw_invalid("bad_segment", "path: catalog params must be numbers");
      params[it.key()] = it.value().get<double>();
    }
    return homotopy::catalog_segment(j["name"].get<std::string>(), params);
  }
  throw_invalid("bad_segment", "path: unknown segment kind " + kind);
}

} // namespace

std::string path_to_json(const homotopy::HomotopyPath& p) {
  std::string s = "{\"segments\":[";
  for (size_t i = 0; i < p.segments.size(); ++i) {
    if (i) s += ",";
    s += segment_to_json(p.segments[i]);
  }
  s += "],\"certificate\":" + certificate_to_json(p.certificate) + "}";
  return s;
}

homotopy::HomotopyPath path_from_json(const std::string& text) {
  json j = parse_root(text, "path");
  if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array() ||
      j["segments"].empty())
    throw_invalid("bad_path", "path: expected an object with a nonempty segments array");
  homotopy::HomotopyPath path;
  for (const auto& js : j["segments"]) path.segments.push_back(segment_from_json(js));
  if (j.contains("certificate") && j["certificate"].is_object()) {
    const auto& c = j["certificate"];
    if (c.contains("samples")) path.certificate.samples = c["samples"].get<int>();
    if (c.contains("min_abs_det4")) path.certificate.min_abs_det4 = c["min_abs_det4"].get<double>();
    if (c.contains("min_abs_det4_normalized"))
      path.certificate.min_abs_det4_normalized = c["min_abs_det4_normalized"].get<double>();
    if (c.contains("sign")) path.certificate.sign = c["sign"].get<int>();
    if (c.contains("max_step")) path.certificate.max_step = c["max_step"].get<double>();
    if (c.contains("margin")) path.certificate.margin = c["margin"].get<double>();
    if (c.contains("pass")) path.certificate.pass = c["pass"].get<bool>();
  }
  return path;
}

std::string classify_report_to_json(const SignClass& sc, const MatrixPair& p, double tol) {
  std::string s = "{\"sign\":\"" + tag_name(sc.tag) + "\"";
  s += ",\"det4\":" + num(sc.det4);
  s += ",\"det4_normalized\":" + num(sc.det4_normalized);
  s += ",\"cosquare_class\":";
  try {
    s += cosquare_class_to_json(canon::classify_cosquare(p.a, tol));
  } catch (const error&) {
    s += "{\"tag\":\"degenerate_A\"}";
  }
  s += ",\"genericity_defect\":";
  try {
    s += num(canon::genericity_defect(p.a));
  } catch (const error&) {
    s += "null";
  }
  s += "}";
  return s;
}

std::string surface_report_to_json(const surface::NoNewReport& rep) {
  std::string s = "{\"delta\":" + num(rep.delta);
  s += ",\"m\":" + num(rep.m);
  s += ",\"n_required\":" + std::to_string(rep.n_required);
  s += ",\"n_used\":" + std::to_string(rep.n_used);
  s += ",\"min_inequality\":" + num(rep.min_inequality);
  s += ",\"pass\":";
  s += rep.pass ? "true" : "false";
  s += ",\"worst_point\":{\"s\":" + num(rep.worst_s) + ",\"zprime\":[" +
       cnum(rep.worst_zprime[0]) + "," + cnum(rep.worst_zprime[1]) + "]}";
  s += ",\"fd_max_err\":" + num(rep.fd_max_err);
  s += ",\"lipschitz_hint\":" + num(rep.lipschitz_hint);
  s += "}";
  return s;
}

std::string levi_report_to_json(const levi::LeviReport& rep) {
  std::string s = "{\"points_scanned\":" + std::to_string(rep.points_scanned);
  s += ",\"positive_definite\":" + std::to_string(rep.positive_definite);
  s += ",\"two_positive\":" + std::to_string(rep.two_positive);
  s += ",\"violations\":[";
  for (size_t i = 0; i < rep.violations.size(); ++i) {
    if (i) s += ",";
    const auto& v = rep.violations[i];
    s += "{\"point\":[" + cnum(v.point[0]) + "," + cnum(v.point[1]) + "," + cnum(v.point[2]) +
         "],\"margin\":" + num(v.margin) + "}";
  }
  s += "],\"min_margin\":" + num(rep.min_margin);
  s += ",\"min_trace\":" + num(rep.min_trace);
  s += "}";
  return s;
}

std::string growth_to_json(const levi::GrowthBounds& gb) {
  std::string s = "{\"c_est\":" + num(gb.c_est);
  s += ",\"C_est\":" + num(gb.C_est);
  s += ",\"points_used\":" + std::to_string(gb.points_used);
  s += ",\"points_skipped\":" + std::to_string(gb.points_skipped);
  s += "}";
  return s;
}

std::string spectra_to_csv(const levi::LeviReport& rep) {
  std::string s = "lambda1,lambda2,lambda3\n";
  for (const auto& w : rep.spectra)
    s += num(w[0]) + "," + num(w[1]) + "," + num(w[2]) + "\n";
  return s;
}

} // namespace crpt::jsonio
