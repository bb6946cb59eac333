#pragma once
#include <string>

#include "json.hpp"
#include "qsp/diagrams.hpp"
#include "qsp/uqrep.hpp"

namespace qsp {

using nlohmann::json;

// exact rationals as "num/den" strings
json rat_to_json(const Rat& r);
Rat rat_from_json(const json& j);
json weight_to_json(const Weight& w);
Weight weight_from_json(const json& j);
json root_datum_to_json(const RootDatum& D);

// nested arrays of [re, im]
json matrix_to_json(const CMat& A);
CMat matrix_from_json(const json& j);
json cvec_to_json(const std::vector<cplx>& v);

// {"type":"A","rank":3,"X":[2],"tau":[[1,3]],"z":[[k,n],...]} with 1-based vertices; z is optional.
SatakeDiagram diagram_from_json(const json& j);
json diagram_to_json(const SatakeDiagram& S);

// basis weights and generator matrices
json module_to_json(const WeightModule& M);

// "1,0,2" or "1 0 2"
IWeight parse_iweight(const std::string& s);
std::vector<double> parse_doubles(const std::string& s);

json read_json_file(const std::string& path);

}  // namespace qsp
