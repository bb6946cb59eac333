#include "qsp/io.hpp"

#include <fstream>
#include <sstream>

#include "qsp/errors.hpp"

namespace qsp {

json rat_to_json(const Rat& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (!j.is_string()) throw InputError("rational must be a \"num/den\" string or an integer");
  const std::string s = j.get<std::string>();
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s));
    const long long den = std::stoll(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    return Rat(std::stoll(s.substr(0, slash)), den);
  } catch (const std::logic_error&) {
    throw InputError("malformed rational '" + s + "'");
  }
}

json weight_to_json(const Weight& w) {
  json a = json::array();
  for (auto& r : w) a.push_back(rat_to_json(r));
  return a;
}

Weight weight_from_json(const json& j) {
  if (!j.is_array()) throw InputError("weight must be an array");
  Weight w;
  for (auto& e : j) w.push_back(rat_from_json(e));
  return w;
}

json root_datum_to_json(const RootDatum& D) {
  json j;
  j["label"] = D.label();
  j["rank"] = D.rank();
  j["cartan"] = D.cartan();
  std::vector<int> d;
  for (int r = 0; r < D.rank(); ++r) d.push_back(D.d(r));
  j["d"] = d;
  json roots = json::array();
  for (auto& b : positive_roots(D, all_vertices(D))) roots.push_back(weight_to_json(b));
  j["positive_roots"] = roots;
  j["rho"] = weight_to_json(rho(D));
  return j;
}

json matrix_to_json(const CMat& A) {
  json rows = json::array();
  for (long i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (long k = 0; k < A.cols(); ++k) row.push_back({A(i, k).real(), A(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  const size_t n = j.size(), m = j[0].size();
  CMat A(n, m);
  for (size_t i = 0; i < n; ++i) {
    if (j[i].size() != m) throw InputError("ragged matrix");
    for (size_t k = 0; k < m; ++k) {
      const auto& e = j[i][k];
      if (e.is_number())
        A(i, k) = e.get<double>();
      else if (e.is_array() && e.size() == 2)
        A(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
      else
        throw InputError("matrix entries must be numbers or [re, im]");
    }
  }
  return A;
}

json cvec_to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

SatakeDiagram diagram_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw InputError("diagram needs a \"type\"");
  std::string label = j["type"].get<std::string>();
  if (j.contains("rank")) label += std::to_string(j["rank"].get<int>());
  const RootDatum D = parse_root_datum(label);
  const int n = D.rank();
  auto vertex = [&](const json& v) {
    const int r = v.get<int>();
    if (r < 1 || r > n) throw InputError("vertex " + std::to_string(r) + " out of range 1.." + std::to_string(n));
    return r - 1;
  };
  VertexSet X;
  if (j.contains("X"))
    for (auto& v : j["X"]) X.push_back(vertex(v));
  Perm tau = identity_perm(n);
  if (j.contains("tau"))
    for (auto& pr : j["tau"]) {
      if (!pr.is_array() || pr.size() != 2) throw InputError("tau entries are pairs [r, s]");
      const int a = vertex(pr[0]), b = vertex(pr[1]);
      tau[a] = b;
      tau[b] = a;
    }
  SatakeDiagram S = make_satake(D, X, tau);
  if (j.contains("z") && !j["z"].is_null()) {
    if (j["z"].size() != size_t(n)) throw InputError("z needs one phase [k, n] per vertex");
    std::vector<Phase> z;
    for (auto& e : j["z"]) z.push_back(Phase{e[0].get<int>(), e[1].get<int>()});
    S.z = z;
    if (!z_condition_holds(S)) throw InputError("supplied z violates the phase condition");
  }
  return S;
}

json diagram_to_json(const SatakeDiagram& S) {
  json j;
  const auto& comps = S.datum.components();
  if (comps.size() == 1) {
    j["type"] = std::string(1, comps[0].type);
    j["rank"] = comps[0].rank;
  } else {
    j["type"] = S.datum.label();
  }
  std::vector<int> X;
  for (int r : S.X) X.push_back(r + 1);
  j["X"] = X;
  json tau = json::array();
  for (int r = 0; r < S.datum.rank(); ++r)
    if (S.tau[r] > r) tau.push_back({r + 1, S.tau[r] + 1});
  j["tau"] = tau;
  json z = json::array();
  for (auto& p : S.z) z.push_back({p.k, p.n});
  j["z"] = z;
  return j;
}

json module_to_json(const WeightModule& M) {
  json j;
  j["algebra"] = M.D().label();
  j["q"] = M.qp.q;
  j["dim"] = M.dim();
  j["weights"] = M.weights;
  json E = json::array(), F = json::array(), K = json::array();
  for (int r = 0; r < M.D().rank(); ++r) {
    E.push_back(matrix_to_json(M.E[r]));
    F.push_back(matrix_to_json(M.F[r]));
    K.push_back(matrix_to_json(M.Kr(r)));
  }
  j["E"] = E;
  j["F"] = F;
  j["K"] = K;
  return j;
}

IWeight parse_iweight(const std::string& s) {
  IWeight w;
  for (double x : parse_doubles(s)) {
    if (x != double(int(x)) || x < 0) throw InputError("weight entries must be non-negative integers: '" + s + "'");
    w.push_back(int(x));
  }
  return w;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream is(t);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw InputError("not a number: '" + tok + "'");
    }
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace qsp
