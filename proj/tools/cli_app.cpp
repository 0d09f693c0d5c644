#include "cli_app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfspec/oracle.hpp"
#include "pfspec/resolvent.hpp"
#include "pfspec/spectrum.hpp"
#include "pfspec/state_io.hpp"

namespace pfspec::cli {

using nlohmann::json;

namespace {

constexpr double kEffmassAgreementTol = 1e-4;
constexpr double kSigmaSweepTol = 1e-6;
constexpr double kResolventResidualTol = 1e-8;
constexpr double kGapFloor = 1e-9;  // combined eigensolver/root tolerance
constexpr double kFinalGapTol = 1e-3;

std::string fmt(double x) { return format_double(x); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

struct Output {
  std::ofstream file;
  std::ostream* os = nullptr;
};

Output open_output(const RunConfig& cfg) {
  Output o;
  if (cfg.out.empty()) {
    o.os = &std::cout;
  } else {
    o.file.open(cfg.out);
    if (!o.file)
      throw std::runtime_error("cannot open output file: " + cfg.out);
    o.os = &o.file;
  }
  return o;
}

std::string resolved_format(const RunConfig& cfg, const char* def) {
  if (cfg.format.empty()) return def;
  if (cfg.format != "csv" && cfg.format != "json")
    throw std::invalid_argument("format must be csv or json");
  return cfg.format;
}

json config_json(const RunConfig& cfg) {
  const ModelParams prm = cfg.params();
  json j;
  j["command"] = cfg.command;
  j["e"] = cfg.e;
  j["R"] = cfg.R;
  j["sigma"] = cfg.sigma;
  j["gamma0"] = prm.gamma0;
  j["gamma0_mode"] = cfg.gamma0 == "auto" ? "auto" : "explicit";
  j["tol"] = cfg.tol;
  j["quad"] = {{"n_rho", cfg.quad_nrho},
               {"n_t", cfg.quad_nt},
               {"n_phi", cfg.quad_nphi},
               {"abs_tol", cfg.quad().abs_tol}};
  j["strict"] = cfg.strict;
  if (cfg.command == "dispersion" || cfg.command == "bounds-audit") {
    j["p_min"] = cfg.p_min;
    j["p_max"] = cfg.p_max;
    j["p_count"] = cfg.p_count;
  }
  if (cfg.command != "effmass") j["direction"] = cfg.direction;
  if (cfg.command == "resolvent") {
    j["z"] = {cfg.z_re, cfg.z_im};
    j["state_in"] = cfg.state_in;
    j["p_abs"] = cfg.p_max;
  }
  if (cfg.command == "oracle-compare") {
    j["nrho_list"] = cfg.nrho_list;
    j["p_abs"] = cfg.p_max;
  }
  if (cfg.command == "effmass") {
    j["fd_h"] = cfg.fd_h;
    if (!cfg.sigma_sweep.empty()) j["sigma_sweep"] = cfg.sigma_sweep;
  }
  return j;
}

}  // namespace

ModelParams RunConfig::params() const {
  ModelParams prm;
  if (gamma0 == "auto") {
    prm = ModelParams::with_default_gamma0(e, R, sigma);
  } else {
    double g0 = 0.0;
    const char* b = gamma0.data();
    auto [ptr, ec] = std::from_chars(b, b + gamma0.size(), g0);
    if (ec != std::errc{} || ptr != b + gamma0.size())
      throw std::invalid_argument("gamma0 must be \"auto\" or a number");
    prm = ModelParams{e, R, sigma, g0};
    prm.validate();
  }
  return prm;
}

QuadratureSpec RunConfig::quad() const {
  QuadratureSpec q;
  q.n_rho = std::max(quad_nrho, 16);
  q.n_t = quad_nt;
  q.abs_tol = 1e-10;
  return q;
}

std::vector<double> RunConfig::p_grid() const {
  if (p_count < 1) throw std::invalid_argument("p-count must be >= 1");
  std::vector<double> g;
  g.reserve(p_count);
  if (p_count == 1) {
    g.push_back(p_min);
    return g;
  }
  for (int i = 0; i < p_count; ++i)
    g.push_back(p_min + (p_max - p_min) * i / (p_count - 1));
  return g;
}

Vec3 RunConfig::unit_direction() const {
  if (direction.size() != 3)
    throw std::invalid_argument("direction needs 3 components");
  Vec3 d{direction[0], direction[1], direction[2]};
  const double n = d.norm();
  if (n == 0.0) throw std::invalid_argument("direction must be nonzero");
  return d / n;
}

int run_dispersion(const RunConfig& cfg, std::ostream& out) {
  const ModelParams prm = cfg.params();
  const auto grid = cfg.p_grid();
  const auto reports =
      dispersion_curve(grid, cfg.unit_direction(), prm, cfg.quad(), cfg.tol);

  bool audit_ok = true;
  for (const auto& r : reports)
    audit_ok = audit_ok && r.bounds_ok.all() && r.note.empty();

  const std::string format = resolved_format(cfg, "csv");
  if (format == "csv") {
    out << "# config=" << config_json(cfg).dump() << '\n';
    out << "p_abs,ess_edge,z_star,f_at_edge,upper_ok,edge_ok,positivity_ok,"
           "note\n";
    for (const auto& r : reports) {
      out << fmt(r.p_abs) << ',' << fmt(r.ess_edge) << ','
          << (r.eigenvalue ? fmt(*r.eigenvalue) : "") << ','
          << fmt(r.f_at_edge) << ',' << int(r.bounds_ok.upper_bound) << ','
          << int(r.bounds_ok.edge_kernel) << ',' << int(r.bounds_ok.positivity) << ','
          << csv_escape(r.note) << '\n';
    }
  } else {
    json rows = json::array();
    for (const auto& r : reports) {
      json row;
      row["p_abs"] = r.p_abs;
      row["ess_edge"] = r.ess_edge;
      row["z_star"] = r.eigenvalue ? json(*r.eigenvalue) : json(nullptr);
      row["f_at_edge"] = r.f_at_edge;
      row["upper_ok"] = r.bounds_ok.upper_bound;
      row["edge_ok"] = r.bounds_ok.edge_kernel;
      row["positivity_ok"] = r.bounds_ok.positivity;
      row["note"] = r.note;
      rows.push_back(row);
    }
    json doc;
    doc["config"] = config_json(cfg);
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
  }
  return cfg.strict && !audit_ok ? 2 : 0;
}

int run_effmass(const RunConfig& cfg, std::ostream& out) {
  const ModelParams prm = cfg.params();
  const QuadratureSpec quad = cfg.quad();

  const EffectiveMassResult formula = effective_mass(prm, quad);
  const EffectiveMassResult fd_h = effective_mass_fd(prm, quad, cfg.fd_h);
  const EffectiveMassResult fd_h2 =
      effective_mass_fd(prm, quad, 0.5 * cfg.fd_h);
  const EffectiveMassResult fd_ext =
      effective_mass_fd_extrapolated(prm, quad, cfg.fd_h);
  const bool agrees =
      std::abs(fd_ext.inv_mass - formula.inv_mass) <= kEffmassAgreementTol;
  bool audit_ok = agrees;

  // sigma -> 0 sequence with linear extrapolation from the two smallest.
  json sweep;
  std::vector<std::pair<double, double>> seq;
  if (!cfg.sigma_sweep.empty()) {
    for (double s : cfg.sigma_sweep) {
      ModelParams ps = ModelParams::with_default_gamma0(cfg.e, cfg.R, s);
      seq.emplace_back(s, effective_mass(ps, quad).inv_mass);
    }
    std::sort(seq.begin(), seq.end());
    const double target = effective_mass_sigma0(cfg.e, cfg.R);
    double extrapolated = seq.front().second;
    if (seq.size() >= 2) {
      const auto [s1, v1] = seq[0];
      const auto [s2, v2] = seq[1];
      extrapolated = v1 - s1 * (v2 - v1) / (s2 - s1);
    }
    const bool converged = std::abs(extrapolated - target) <= kSigmaSweepTol;
    audit_ok = audit_ok && converged;
    sweep["sigmas"] = json::array();
    sweep["inv_mass"] = json::array();
    for (const auto& [s, v] : seq) {
      sweep["sigmas"].push_back(s);
      sweep["inv_mass"].push_back(v);
    }
    sweep["extrapolated"] = extrapolated;
    sweep["sigma0_closed_form"] = target;
    sweep["converged"] = converged;
  }

  const std::string format = resolved_format(cfg, "json");
  if (format == "json") {
    json doc;
    doc["config"] = config_json(cfg);
    doc["formula"] = {
        {"inv_mass", formula.inv_mass},
        {"mass", formula.mass ? json(*formula.mass) : json(nullptr)}};
    doc["finite_difference"] = {
        {"h", cfg.fd_h},
        {"inv_mass_h", fd_h.inv_mass},
        {"inv_mass_h_half", fd_h2.inv_mass},
        {"inv_mass_extrapolated", fd_ext.inv_mass},
        {"agrees_with_formula", agrees},
        {"tolerance", kEffmassAgreementTol}};
    if (!seq.empty()) doc["sigma_sweep"] = sweep;
    out << doc.dump(2) << '\n';
  } else {
    out << "# config=" << config_json(cfg).dump() << '\n';
    out << "method,sigma,h,inv_mass,mass\n";
    auto row = [&](const char* method, double sigma, std::optional<double> h,
                   double inv, std::optional<double> mass) {
      out << method << ',' << fmt(sigma) << ',' << (h ? fmt(*h) : "") << ','
          << fmt(inv) << ',' << (mass ? fmt(*mass) : "") << '\n';
    };
    row("formula", cfg.sigma, std::nullopt, formula.inv_mass, formula.mass);
    row("finite_difference", cfg.sigma, cfg.fd_h, fd_h.inv_mass, fd_h.mass);
    row("finite_difference", cfg.sigma, 0.5 * cfg.fd_h, fd_h2.inv_mass,
        fd_h2.mass);
    row("finite_difference_extrapolated", cfg.sigma, cfg.fd_h,
        fd_ext.inv_mass, fd_ext.mass);
    for (const auto& [s, v] : seq)
      row("formula", s, std::nullopt, v,
          v > 0 ? std::optional<double>(1.0 / v) : std::nullopt);
    if (!seq.empty())
      row("sigma_limit", 0.0, std::nullopt, sweep["extrapolated"].get<double>(),
          std::nullopt);
  }
  return cfg.strict && !audit_ok ? 2 : 0;
}

int run_resolvent(const RunConfig& cfg, std::ostream& report) {
  const ModelParams prm = cfg.params();

  if (cfg.emit_template) {
    auto grid = build_grid(cfg.quad_nrho, cfg.quad_nt, cfg.quad_nphi, prm);
    StateVector u(grid);
    u.f0 = 1.0;
    const std::string comment = "config=" + config_json(cfg).dump();
    if (cfg.out.empty()) {
      write_state_csv(std::cout, u, comment);
    } else {
      write_state_csv(cfg.out, u, comment);
      json doc;
      doc["config"] = config_json(cfg);
      doc["template_written"] = cfg.out;
      doc["nodes"] = grid->size();
      report << doc.dump(2) << '\n';
    }
    return 0;
  }

  if (cfg.state_in.empty()) {
    std::cerr << "resolvent: --in <state.csv> is required (or --emit-template)\n";
    return 64;
  }
  if (cfg.out.empty()) {
    std::cerr << "resolvent: --out <state.csv> is required\n";
    return 64;
  }

  const StateVector u = read_state_csv(cfg.state_in);
  const Momentum p = cfg.unit_direction() * cfg.p_max;
  const Complex z{cfg.z_re, cfg.z_im};

  ResolventStats stats;
  const StateVector f = apply_resolvent(p, z, u, prm, {}, &stats);
  write_state_csv(cfg.out, f, "config=" + config_json(cfg).dump());

  const auto hd = build_discrete_h(p, u.grid, prm);
  const double res = residual(hd, z, f, u);

  json doc;
  doc["config"] = config_json(cfg);
  doc["out"] = cfg.out;
  doc["residual"] = res;
  doc["dist_to_spectrum"] = stats.dist_to_spectrum;
  doc["accuracy_warning"] = stats.accuracy_warning;
  doc["residual_tolerance"] = kResolventResidualTol;
  report << doc.dump(2) << '\n';
  return cfg.strict && res > kResolventResidualTol ? 2 : 0;
}

int run_oracle_compare(const RunConfig& cfg, std::ostream& out) {
  const ModelParams prm = cfg.params();
  const Momentum p = cfg.unit_direction() * cfg.p_max;
  const auto zs = solve_ground(p, prm, cfg.quad(), cfg.tol);
  if (!zs)
    throw std::runtime_error(
        "oracle-compare: no eigenvalue below the band at this p");

  struct Row {
    int n_rho, dim;
    double eig, gap;
  };
  std::vector<Row> rows;
  bool dumped = false;
  for (int nr : cfg.nrho_list) {
    auto grid = build_grid(nr, cfg.quad_nt, cfg.quad_nphi, prm);
    auto hd = build_discrete_h(p, grid, prm);
    if (!cfg.dump_matrix.empty() && !dumped) {
      std::ofstream dm(cfg.dump_matrix);
      if (!dm)
        throw std::runtime_error("cannot open " + cfg.dump_matrix);
      dm << "# config=" << config_json(cfg).dump() << '\n';
      dump_matrix_triplets(hd, dm);
      dumped = true;
    }
    const double eig = ground_eigenvalue(hd);
    rows.push_back(Row{nr, hd.dim(), eig, std::abs(eig - *zs)});
  }

  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    monotone = monotone &&
               (rows[i].gap <= rows[i - 1].gap || rows[i].gap <= kGapFloor);
  const bool final_ok = rows.empty() || rows.back().gap <= kFinalGapTol;

  const std::string format = resolved_format(cfg, "csv");
  if (format == "csv") {
    out << "# config=" << config_json(cfg).dump() << '\n';
    out << "n_rho,n_t,n_phi,dim,oracle_eigenvalue,z_star,gap\n";
    for (const Row& r : rows)
      out << r.n_rho << ',' << cfg.quad_nt << ',' << cfg.quad_nphi << ','
          << r.dim << ',' << fmt(r.eig) << ',' << fmt(*zs) << ','
          << fmt(r.gap) << '\n';
  } else {
    json doc;
    doc["config"] = config_json(cfg);
    doc["z_star"] = *zs;
    doc["rows"] = json::array();
    for (const Row& r : rows)
      doc["rows"].push_back({{"n_rho", r.n_rho},
                             {"dim", r.dim},
                             {"oracle_eigenvalue", r.eig},
                             {"gap", r.gap}});
    doc["gap_monotone"] = monotone;
    doc["final_gap_ok"] = final_ok;
    out << doc.dump(2) << '\n';
  }
  return cfg.strict && !(monotone && final_ok) ? 2 : 0;
}

int run_bounds_audit(const RunConfig& cfg, std::ostream& out) {
  const ModelParams prm = cfg.params();
  const QuadratureSpec quad = cfg.quad();
  const Vec3 dir = cfg.unit_direction();
  const double th1 = eigenvalue_upper_bound(prm);

  struct Row {
    double p_abs = 0, d12_edge = 0, edge_bound = 0;
    std::optional<double> z_star;
    bool edge_ok = true, up_ok = true, pos_ok = true;
    std::string note;
  };
  const auto grid = cfg.p_grid();
  std::vector<Row> rows(grid.size() + 1);

  const int n = static_cast<int>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    Row& r = rows[i];
    r.p_abs = grid[i];
    try {
      const KernelValue d = d12_at_edge(r.p_abs, prm, quad);
      r.d12_edge = d.real();
      r.edge_bound = d12_edge_bound(r.p_abs, prm);
      r.edge_ok = r.d12_edge <= r.edge_bound + 10.0 * d.est_error;
      r.z_star = solve_ground(dir * r.p_abs, prm, quad, cfg.tol);
      if (r.z_star) {
        r.up_ok = *r.z_star <= th1;
        r.pos_ok = *r.z_star > 0.0;
      }
    } catch (const std::exception& ex) {
      r.note = ex.what();
    }
  }
  // No-root probe beyond the momentum bound.
  {
    Row& r = rows.back();
    r.p_abs = no_root_momentum_bound(prm) + 1.0;
    r.note = "no-root probe";
    try {
      const KernelValue d = d12_at_edge(r.p_abs, prm, quad);
      r.d12_edge = d.real();
      r.edge_bound = d12_edge_bound(r.p_abs, prm);
      r.edge_ok = r.d12_edge <= r.edge_bound + 10.0 * d.est_error;
      r.z_star = solve_ground(dir * r.p_abs, prm, quad, cfg.tol);
      r.up_ok = !r.z_star.has_value();  // any root here is a violation
    } catch (const std::exception& ex) {
      r.note += std::string("; ") + ex.what();
      r.up_ok = false;
    }
  }

  bool audit_ok = true;
  for (const Row& r : rows)
    audit_ok = audit_ok && r.edge_ok && r.up_ok && r.pos_ok;

  const std::string format = resolved_format(cfg, "csv");
  if (format == "csv") {
    out << "# config=" << config_json(cfg).dump() << '\n';
    out << "p_abs,d12_edge,edge_bound,edge_ok,z_star,eigenvalue_upper_bound,upper_ok,"
           "positivity_ok,note\n";
    for (const Row& r : rows)
      out << fmt(r.p_abs) << ',' << fmt(r.d12_edge) << ',' << fmt(r.edge_bound)
          << ',' << int(r.edge_ok) << ','
          << (r.z_star ? fmt(*r.z_star) : "") << ',' << fmt(th1) << ','
          << int(r.up_ok) << ',' << int(r.pos_ok) << ','
          << csv_escape(r.note) << '\n';
  } else {
    json doc;
    doc["config"] = config_json(cfg);
    doc["eigenvalue_upper_bound"] = th1;
    doc["rows"] = json::array();
    for (const Row& r : rows)
      doc["rows"].push_back(
          {{"p_abs", r.p_abs},
           {"d12_edge", r.d12_edge},
           {"edge_bound", r.edge_bound},
           {"edge_ok", r.edge_ok},
           {"z_star", r.z_star ? json(*r.z_star) : json(nullptr)},
           {"upper_ok", r.up_ok},
           {"positivity_ok", r.pos_ok},
           {"note", r.note}});
    doc["audit_ok"] = audit_ok;
    out << doc.dump(2) << '\n';
  }
  return cfg.strict && !audit_ok ? 2 : 0;
}

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--e", cfg.e, "coupling constant")->capture_default_str();
  cmd->add_option("--R", cfg.R, "ultraviolet cutoff radius")
      ->capture_default_str();
  cmd->add_option("--sigma", cfg.sigma, "infrared parameter in [0, 1/2)")
      ->capture_default_str();
  cmd->add_option("--gamma0", cfg.gamma0,
                  "energy shift; \"auto\" = pi e^2 R^(2+2s)/(1+s)")
      ->capture_default_str();
  cmd->add_option("--p-min", cfg.p_min, "sweep start |p|")
      ->capture_default_str();
  cmd->add_option("--p-max", cfg.p_max,
                  "sweep end |p|; single-p commands use this value")
      ->capture_default_str();
  cmd->add_option("--p-count", cfg.p_count, "sweep point count")
      ->capture_default_str();
  cmd->add_option("--direction", cfg.direction,
                  "momentum direction, 3 comma-separated components")
      ->delimiter(',')
      ->expected(3);
  cmd->add_option("--tol", cfg.tol, "root solver tolerance")
      ->capture_default_str();
  cmd->add_option("--quad-nrho", cfg.quad_nrho,
                  "adaptive panel cap / grid rho count")
      ->capture_default_str();
  cmd->add_option("--quad-nt", cfg.quad_nt, "grid t count")
      ->capture_default_str();
  cmd->add_option("--quad-nphi", cfg.quad_nphi, "grid phi count")
      ->capture_default_str();
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
  cmd->add_option("--format", cfg.format, "csv | json");
  cmd->add_flag("--strict", cfg.strict,
                "exit 2 when an audit fails its threshold");
}

}  // namespace

int run_main(int argc, char** argv) {
  CLI::App app{
      "pfspec: spectral data of the fiber Pauli-Fierz Hamiltonian truncated "
      "to at most one photon"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command line overrides");

  RunConfig c_disp, c_eff, c_res, c_orc, c_bnd;
  c_disp.command = "dispersion";
  c_eff.command = "effmass";
  c_res.command = "resolvent";
  c_res.quad_nrho = 16;  // template grid counts
  c_res.p_max = 0.5;
  c_orc.command = "oracle-compare";
  c_orc.p_max = 0.5;
  c_bnd.command = "bounds-audit";
  c_bnd.p_min = 0.05;
  c_bnd.p_max = 3.0;
  c_bnd.p_count = 50;

  auto* disp = app.add_subcommand(
      "dispersion", "band edge z0(|p|) and eigenvalue z*(p) over a |p| grid");
  add_common(disp, c_disp);

  auto* eff = app.add_subcommand(
      "effmass", "effective mass: formula, finite difference, sigma sweep");
  add_common(eff, c_eff);
  eff->add_option("--fd-h", c_eff.fd_h, "finite-difference step")
      ->capture_default_str();
  eff->add_option("--sigma-sweep", c_eff.sigma_sweep,
                  "sigma values for the sigma->0 sequence")
      ->delimiter(',');

  auto* res = app.add_subcommand(
      "resolvent", "apply (H(p)-z)^{-1} to a state file; |p| from --p-max");
  add_common(res, c_res);
  res->add_option("--in", c_res.state_in, "input state file");
  res->add_option("--z-re", c_res.z_re, "Re z")->capture_default_str();
  res->add_option("--z-im", c_res.z_im, "Im z")->capture_default_str();
  res->add_flag("--emit-template", c_res.emit_template,
                "write a template state u = (1,0,0) for the configured grid");

  auto* orc = app.add_subcommand(
      "oracle-compare",
      "discrete ground eigenvalue vs z* over a grid refinement sequence");
  add_common(orc, c_orc);
  orc->add_option("--nrho-list", c_orc.nrho_list, "grid rho counts")
      ->delimiter(',');
  orc->add_option("--dump-matrix", c_orc.dump_matrix,
                  "write the first grid's operator as i,j,value triplets");

  auto* bnd = app.add_subcommand("bounds-audit",
                                 "edge-kernel and eigenvalue bound audits");
  add_common(bnd, c_bnd);

  int code = 0;
  disp->callback([&] {
    auto o = open_output(c_disp);
    code = run_dispersion(c_disp, *o.os);
  });
  eff->callback([&] {
    auto o = open_output(c_eff);
    code = run_effmass(c_eff, *o.os);
  });
  res->callback([&] { code = run_resolvent(c_res, std::cout); });
  orc->callback([&] {
    auto o = open_output(c_orc);
    code = run_oracle_compare(c_orc, *o.os);
  });
  bnd->callback([&] {
    auto o = open_output(c_bnd);
    code = run_bounds_audit(c_bnd, *o.os);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return code;
}

}  // namespace pfspec::cli
