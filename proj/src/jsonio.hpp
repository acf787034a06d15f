#pragma once

// JSON surfaces shared by the C API and the CLI. Parsing uses nlohmann/json;
// emission uses a small fixed-order writer so repeated runs are byte-identical
// (insertion-ordered keys, floats at 17 significant digits).

#include "canon.hpp"
#include "homotopy.hpp"
#include "levi.hpp"
#include "pairs.hpp"
#include "surface.hpp"

#include <string>

namespace crpt::jsonio {

// number / complex / matrix primitives
std::string num(double v);
std::string cnum(kernel::cx v);      // [re, im]
std::string mat2(const Mat2& m);     // [[c,c],[c,c]]

// pair files: {"A": [[c,c],[c,c]], "B": ...}; rejects unknown keys,
// non-finite entries and non-symmetric B beyond tolerance
MatrixPair pair_from_json(const std::string& text);
std::string pair_to_json(const MatrixPair& p);

std::string cosquare_class_to_json(const canon::CosquareClass& c);
std::string normal_form_to_json(const canon::NormalForm& nf);

std::string certificate_to_json(const homotopy::Certificate& c);
std::string path_to_json(const homotopy::HomotopyPath& p);
homotopy::HomotopyPath path_from_json(const std::string& text);

std::string classify_report_to_json(const SignClass& sc, const MatrixPair& p, double tol);

std::string surface_report_to_json(const surface::NoNewReport& rep);

std::string levi_report_to_json(const levi::LeviReport& rep);
std::string growth_to_json(const levi::GrowthBounds& gb);

// CSV export of scan spectra (flag-gated by the CLI)
std::string spectra_to_csv(const levi::LeviReport& rep);

} // namespace crpt::jsonio
