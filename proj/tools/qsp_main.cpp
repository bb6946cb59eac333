#include <fstream>
#include <iostream>
#include <new>

#include "CLI11.hpp"
#include "qsp/errors.hpp"
#include "qsp/harness.hpp"
#include "qsp/io.hpp"
#include "qsp/rmatrix.hpp"

using namespace qsp;

namespace {

struct Output {
  std::string path;
  void emit(const json& j) const {
    const std::string s = j.dump(2);
    if (path.empty()) {
      std::cout << s << "\n";
      return;
    }
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write " + path);
    out << s << "\n";
  }
};

// "0.5", "-1.2i", "0.3+0.4i"
cplx parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw InputError("empty complex number");
  try {
    if (s.back() != 'i') return std::stod(s);
    s.pop_back();
    size_t split = std::string::npos;
    for (size_t k = 1; k < s.size(); ++k)
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') split = k;
    auto im = [](const std::string& t) { return t == "+" || t.empty() ? 1.0 : t == "-" ? -1.0 : std::stod(t); };
    if (split == std::string::npos) return cplx(0, im(s));
    return cplx(std::stod(s.substr(0, split)), im(s.substr(split)));
  } catch (const std::logic_error&) {
    throw InputError("not a complex number: '" + s + "'");
  }
}

std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> out;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, ',')) out.push_back(parse_complex(tok));
  return out;
}

int report_exit(const Report& r) { return r.pass ? kExitPass : kExitFail; }

int report_exit(const std::vector<Report>& rs) {
  for (auto& r : rs)
    if (!r.pass) return kExitFail;
  return kExitPass;
}

json reports_json(const std::vector<Report>& rs) {
  json a = json::array();
  for (auto& r : rs) a.push_back(to_json(r));
  return a;
}

std::shared_ptr<const RootDatum> datum_of(const std::string& label) {
  return std::make_shared<const RootDatum>(parse_root_datum(label));
}

IWeight unit_weight(int n, int r) {
  IWeight w(n, 0);
  w[r] = 1;
  return w;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum symmetric pair workbench"};
  app.require_subcommand(1);
  Output out;
  int code = kExitPass;
  auto add_out = [&](CLI::App* c) { c->add_option("--out", out.path, "write JSON to this file"); };

  // rootsys
  auto* rs = app.add_subcommand("rootsys", "root datum as JSON");
  std::string rs_alg;
  rs->add_option("--algebra", rs_alg, "type label, e.g. A3 or A1xB2")->required();
  add_out(rs);
  rs->callback([&] { out.emit(root_datum_to_json(parse_root_datum(rs_alg))); });

  // diagram
  auto* dg = app.add_subcommand("diagram", "Satake diagrams");
  dg->require_subcommand(1);
  auto* dg_check = dg->add_subcommand("check", "validate a diagram file");
  std::string dg_file;
  dg_check->add_option("--file", dg_file)->required();
  add_out(dg_check);
  dg_check->callback([&] {
    const json j = read_json_file(dg_file);
    std::string label = j.at("type").get<std::string>();
    if (j.contains("rank")) label += std::to_string(j["rank"].get<int>());
    const RootDatum D = parse_root_datum(label);
    const int n = D.rank();
    VertexSet X;
    Perm tau = identity_perm(n);
    for (auto& v : j.value("X", json::array())) X.push_back(v.get<int>() - 1);
    for (auto& pr : j.value("tau", json::array())) {
      tau.at(pr[0].get<int>() - 1) = pr[1].get<int>() - 1;
      tau.at(pr[1].get<int>() - 1) = pr[0].get<int>() - 1;
    }
    for (int r : X)
      if (r < 0 || r >= n) throw InputError("vertex out of range");
    const auto adm = check_admissible(D, X, tau);
    json res;
    res["admissible"] = adm.ok;
    res["violations"] = adm.violations;
    if (adm.ok) {
      const auto S = diagram_from_json(j);
      res["diagram"] = diagram_to_json(S);
      res["z_condition"] = z_condition_holds(S);
      const auto h = hermitian_type(S);
      res["hermitian_type"] = to_string(h.kind);
      if (h.distinguished) res["distinguished_vertex"] = *h.distinguished + 1;
    }
    out.emit(res);
    code = adm.ok ? kExitPass : kExitFail;
  });
  auto* dg_list = dg->add_subcommand("list", "all admissible pairs of a type");
  std::string dg_type;
  int dg_rank = 0;
  dg_list->add_option("--type", dg_type)->required();
  dg_list->add_option("--rank", dg_rank)->required();
  add_out(dg_list);
  dg_list->callback([&] {
    json a = json::array();
    for (auto& S : enumerate_admissible(parse_root_datum(dg_type + std::to_string(dg_rank)))) {
      json d = diagram_to_json(S);
      d["hermitian_type"] = to_string(hermitian_type(S).kind);
      a.push_back(d);
    }
    out.emit(a);
  });

  // rep
  auto* rp = app.add_subcommand("rep", "representations");
  rp->require_subcommand(1);
  auto* rp_build = rp->add_subcommand("build", "irreducible *-representation");
  std::string rp_alg, rp_w;
  double rp_q = 0.7;
  rp_build->add_option("--algebra", rp_alg)->required();
  rp_build->add_option("--weight", rp_w, "highest weight in fundamental coordinates")->required();
  rp_build->add_option("--q", rp_q);
  add_out(rp_build);
  rp_build->callback([&] {
    const auto M = build_irrep(datum_of(rp_alg), parse_iweight(rp_w), QParams(rp_q));
    json j = module_to_json(M);
    const auto rr = relation_residuals(M);
    j["relation_residual"] = rr.max();
    out.emit(j);
  });

  // rmatrix
  auto* rm = app.add_subcommand("rmatrix", "R-matrix on V (x) W");
  std::string rm_alg, rm_v, rm_w;
  double rm_q = 0.7;
  rm->add_option("--algebra", rm_alg)->required();
  rm->add_option("--v", rm_v)->required();
  rm->add_option("--w", rm_w)->required();
  rm->add_option("--q", rm_q);
  add_out(rm);
  rm->callback([&] {
    const auto D = datum_of(rm_alg);
    const auto V = build_irrep(D, parse_iweight(rm_v), QParams(rm_q)), W = build_irrep(D, parse_iweight(rm_w), QParams(rm_q));
    const auto R = rmat(V, W);
    json j;
    j["matrix"] = matrix_to_json(R.matrix);
    j["intertwining_residual"] = intertwining_residual(R.matrix, tensor_generators(V, W));
    j["ribbon_residual"] = ribbon_residual(V, W);
    out.emit(j);
  });

  // coideal
  auto* cd = app.add_subcommand("coideal", "coideal subalgebras");
  cd->require_subcommand(1);
  auto* cd_val = cd->add_subcommand("validate", "check *-invariance conditions on the parameters");
  std::string cd_file, cd_c, cd_s;
  double cd_q = 0.7;
  bool cd_member = false;
  cd_val->add_option("--diagram", cd_file)->required();
  cd_val->add_option("--c", cd_c, "comma separated, one per vertex (default: no-parameter values)");
  cd_val->add_option("--s", cd_s, "comma separated complex values such as 0.3i");
  cd_val->add_option("--q", cd_q);
  cd_val->add_flag("--membership", cd_member, "also test B_r^* against the coideal on the fundamental modules");
  add_out(cd_val);
  cd_val->callback([&] {
    const auto S = diagram_from_json(read_json_file(cd_file));
    const QParams qp(cd_q);
    auto p = no_parameter(S, qp);
    const size_t n = S.datum.rank();
    if (!cd_c.empty()) p.c = parse_complex_list(cd_c);
    if (!cd_s.empty()) p.s = parse_complex_list(cd_s);
    if (p.c.size() != n || p.s.size() != n) throw InputError("c and s need one entry per vertex");
    const auto v = validate_star(S, p, qp);
    json j;
    j["diagram"] = diagram_to_json(S);
    j["star_ok"] = v.ok;
    j["violations"] = v.violations;
    j["c"] = cvec_to_json(p.c);
    j["s"] = cvec_to_json(p.s);
    bool ok = v.ok;
    if (cd_member) {
      const auto ctx = make_braid_context(S, qp);
      std::vector<WeightModule> mods;
      for (size_t r = 0; r < n; ++r) mods.push_back(build_irrep(ctx.datum, unit_weight(int(n), int(r)), qp));
      const auto m = star_membership(ctx, p, mods);
      j["membership_residual"] = m.max;
      j["membership_inconclusive"] = m.inconclusive;
      ok = ok && m.max < 1e-8 && !m.inconclusive;
    }
    out.emit(j);
    code = ok ? kExitPass : kExitFail;
  });

  auto* km = app.add_subcommand("kmatrix", "K-matrix for the character chi_t on an irreducible module");
  std::string km_file, km_rep = "1";
  double km_t = 0, km_q = 0.7;
  km->add_option("--diagram", km_file)->required();
  km->add_option("--t", km_t);
  km->add_option("--rep", km_rep, "highest weight");
  km->add_option("--q", km_q);
  add_out(km);
  km->callback([&] {
    const auto S = diagram_from_json(read_json_file(km_file));
    const QParams qp(km_q);
    const auto ctx = make_braid_context(S, qp);
    const auto p = no_parameter(S, qp);
    const int n = S.datum.rank();
    const Character chi = hermitian_type(S).kind == HermitianKind::NonHermitian ? counit_character(S)
                                                                               : relative_character(S, p, km_t);
    IWeight w = parse_iweight(km_rep);
    if (int(w.size()) != n) throw InputError("--rep needs " + std::to_string(n) + " entries");
    const auto U = build_irrep(ctx.datum, w, qp);
    KMatrix k;
    try {
      k = kmatrix_solve(ctx, p, chi, U);
    } catch (const NumericalError&) {
      const auto V = build_irrep(ctx.datum, unit_weight(n, 0), qp);
      const auto kV = kmatrix_solve(ctx, p, chi, V);
      k = kmatrix_solve(ctx, p, chi, U, KMatrixRef{&V, kV.eta});
    }
    json j;
    j["matrix"] = matrix_to_json(k.eta);
    j["residuals"] = {{"intertwining", k.intertwining_residual}, {"constraints", k.constraint_residual}};
    j["nullity"] = k.nullity;
    Eigen::JacobiSVD<CMat> svd(k.eta);
    j["singular_values"] = std::vector<double>(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
    out.emit(j);
    code = std::max(k.intertwining_residual, k.constraint_residual) < kTolAlg ? kExitPass : kExitFail;
  });

  // kz
  auto* kz = app.add_subcommand("kz", "cyclotomic KZ monodromy");
  kz->require_subcommand(1);
  auto* kz_psi = kz->add_subcommand("psi", "connection matrix Psi(a, b+, b-)");
  std::string kz_cfg;
  kz_psi->add_option("--config", kz_cfg)->required();
  add_out(kz_psi);
  kz_psi->callback([&] {
    const json c = read_json_file(kz_cfg);
    MonodromyProblem P;
    if (c.contains("a")) {
      P.a = matrix_from_json(c["a"]);
      P.b_plus = matrix_from_json(c.at("b_plus"));
      P.b_minus = matrix_from_json(c.at("b_minus"));
    } else {
      // {"lambda": .., "q": .., "v": 1, "w": 1} on chi_lambda (x) V_v (x) V_w for su2
      const auto T = split_tensors(su2_theta());
      const double q = c.value("q", 0.7);
      const auto k = kz_coeffs(T, T.character(c.value("lambda", 0.0)), classical_irrep(c.value("v", 1)),
                               classical_irrep(c.value("w", 1)), QParams(q).hbar());
      P.a = k.a;
      P.b_plus = k.b_plus;
      P.b_minus = k.b_minus;
    }
    P.series_order = c.value("series_order", P.series_order);
    P.abs_tol = c.value("abs_tol", P.abs_tol);
    P.rel_tol = c.value("rel_tol", P.rel_tol);
    const auto r = psi(P);
    json j;
    j["psi"] = matrix_to_json(r.psi);
    j["truncation_error"] = r.truncation_error;
    j["spread"] = r.spread;
    j["conditioning"] = r.conditioning;
    j["resonance"] = {{"a", r.resonance_a.min_gap}, {"b_plus", r.resonance_b.min_gap}};
    out.emit(j);
    code = r.spread < P.spread_tol ? kExitPass : kExitFail;
  });
  auto* kz_ver = kz->add_subcommand("verify", "monodromy identity suite");
  std::string kz_suite = "su2";
  double kz_q = 0.7;
  kz_ver->add_option("--suite", kz_suite);
  kz_ver->add_option("--q", kz_q);
  add_out(kz_ver);
  kz_ver->callback([&] {
    if (kz_suite != "su2") throw InputError("only the su2 suite is available");
    const auto r = verify_kz(kz_q);
    out.emit(to_json(r));
    code = report_exit(r);
  });

  // vogan
  auto* vg = app.add_subcommand("vogan", "rank-one twisted double");
  vg->require_subcommand(1);
  auto* vg_e = vg->add_subcommand("e-matrix", "eigenvalue table of E per weight space");
  double vg_r = 0.25, vg_q = 0.7;
  int vg_levels = 20;
  vg_e->add_option("--r", vg_r);
  vg_e->add_option("--q", vg_q);
  vg_e->add_option("--levels", vg_levels);
  add_out(vg_e);
  vg_e->callback([&] {
    const QParams qp(vg_q);
    const auto M = build_Mr(vg_r, qp, vg_levels);
    const auto V = build_irrep(datum_of("A1"), IWeight{1}, qp);
    const CMat E = e_matrix(M, V);
    const CMat P = twist_to_plain(E, M, V);
    const auto plain = weight_spaces(P, M, V);
    json table = json::array();
    const auto spaces = weight_spaces(E, M, V);
    for (size_t k = 0; k < spaces.size(); ++k) {
      json row;
      row["weight"] = spaces[k].weight;
      row["dim"] = spaces[k].indices.size();
      row["eigenvalues"] = cvec_to_json(spaces[k].eigenvalues);
      row["plain_eigenvalues"] = cvec_to_json(plain[k].eigenvalues);
      row["singular_values"] = spaces[k].singular_values;
      table.push_back(row);
    }
    json j;
    j["r"] = vg_r;
    j["q"] = vg_q;
    j["levels"] = vg_levels;
    j["expected"] = {std::pow(vg_q, -vg_r - 1.5), std::pow(vg_q, vg_r + 0.5)};
    j["weight_spaces"] = table;
    j["twisted_intertwining_residual"] = twisted_intertwining_residual(E, M, V);
    const auto f = fusion_check(M, V);
    json low = json::array();
    for (auto& [w, m] : f.lowest) low.push_back({{"weight", w}, {"multiplicity", m}});
    j["fusion"] = {{"lowest", low}, {"matches", f.matches}};
    out.emit(j);
  });

  // verify
  auto* vf = app.add_subcommand("verify", "verification suites (Report JSON)");
  vf->require_subcommand(1);
  double v_q = 0.7, v_r = 0.25, v_t = 0.3;
  int v_levels = 20;
  std::string v_source, v_diag;
  auto* vr1 = vf->add_subcommand("rank-one", "coideal / KZ / Vogan comparison in rank one");
  vr1->add_option("--q", v_q);
  vr1->add_option("--r", v_r);
  vr1->add_option("--levels", v_levels);
  add_out(vr1);
  vr1->callback([&] {
    const auto r = run_rank_one(v_q, v_r, v_levels);
    out.emit(to_json(r));
    code = report_exit(r);
  });
  auto* vax = vf->add_subcommand("axioms", "octagon, ribbon and cylinder equations");
  vax->add_option("--source", v_source)->required()->check(CLI::IsMember({"coideal", "kz", "vogan"}));
  vax->add_option("--q", v_q);
  add_out(vax);
  vax->callback([&] {
    const auto r = verify_axioms(v_source, v_q);
    out.emit(to_json(r));
    code = report_exit(r);
  });
  auto* vkz = vf->add_subcommand("kz", "monodromy identities");
  vkz->add_option("--q", v_q);
  add_out(vkz);
  vkz->callback([&] {
    const auto r = verify_kz(v_q);
    out.emit(to_json(r));
    code = report_exit(r);
  });
  auto* vab = vf->add_subcommand("appendixB", "Z^+-, e_varpi and a_r^+ identities");
  vab->add_option("--diagram", v_diag)->required();
  vab->add_option("--q", v_q);
  add_out(vab);
  vab->callback([&] {
    const auto r = verify_appendixB(diagram_from_json(read_json_file(v_diag)), v_q);
    out.emit(to_json(r));
    code = report_exit(r);
  });
  auto* vch = vf->add_subcommand("characters", "characters and conjugation");
  vch->add_option("--diagram", v_diag)->required();
  vch->add_option("--t", v_t);
  vch->add_option("--q", v_q);
  add_out(vch);
  vch->callback([&] {
    const auto r = verify_characters(diagram_from_json(read_json_file(v_diag)), v_t, v_q);
    out.emit(to_json(r));
    code = report_exit(r);
  });
  auto* vall = vf->add_subcommand("all", "every suite with default settings");
  int v_threads = 0;
  vall->add_option("--q", v_q);
  vall->add_option("--levels", v_levels);
  vall->add_option("--threads", v_threads);
  add_out(vall);
  vall->callback([&] {
    RunConfig cfg;
    cfg.q = v_q;
    cfg.levels = v_levels;
    cfg.threads = v_threads;
    const auto rs = run_all(cfg);
    std::vector<Report> rank_one;
    for (auto& r : rs)
      if (r.case_id.rfind("rank-one", 0) == 0) rank_one.push_back(r);
    const auto h = lambda_hypotheses(rank_one);
    json j;
    j["reports"] = reports_json(rs);
    j["lambda_hypotheses"] = {{"lambda=2r+2", h.doubled_matches}, {"lambda=r+1", h.shifted_matches}};
    out.emit(j);
    code = report_exit(rs);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitInput;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: out of memory\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitFail;
  }
  return code;
}
