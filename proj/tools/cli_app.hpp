#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pfspec/model.hpp"
#include "pfspec/quadrature.hpp"

// Command-line front end. Subcommands: dispersion | effmass | resolvent |
// oracle-compare | bounds-audit. Tabular sweeps emit CSV (17 significant
// digits, '\n' endings, deterministic row order), single-result commands
// emit JSON; every output embeds the resolved configuration.
//
// Exit codes: 0 success, 1 systemic failure, 2 strict-mode audit failure,
// 64 usage error.

namespace pfspec::cli {

struct RunConfig {
  std::string command;

  double e = 1.0, R = 1.0, sigma = 0.0;
  std::string gamma0 = "auto";  // "auto" or a number

  double p_min = 0.0, p_max = 1.0;
  int p_count = 11;
  std::vector<double> direction{0.0, 0.0, 1.0};
  double tol = 1e-10;

  // Kernel integrals: panel cap / tensor nodes. Grid-building commands
  // (resolvent --emit-template, oracle-compare) read the counts directly.
  int quad_nrho = 128, quad_nt = 16, quad_nphi = 8;

  std::string out;     // output path; empty = stdout
  std::string format;  // "csv" | "json"; per-command default when empty
  bool strict = false;

  // resolvent
  double z_re = 0.0, z_im = 1.0;
  std::string state_in;
  bool emit_template = false;

  // oracle-compare
  std::vector<int> nrho_list{16, 32, 64};
  std::string dump_matrix;  // triplet dump of the first grid's operator

  // effmass
  std::vector<double> sigma_sweep;
  double fd_h = 1e-2;

  ModelParams params() const;
  QuadratureSpec quad() const;
  std::vector<double> p_grid() const;
  Vec3 unit_direction() const;
};

int run_dispersion(const RunConfig& cfg, std::ostream& out);
int run_effmass(const RunConfig& cfg, std::ostream& out);
int run_resolvent(const RunConfig& cfg, std::ostream& report);
int run_oracle_compare(const RunConfig& cfg, std::ostream& out);
int run_bounds_audit(const RunConfig& cfg, std::ostream& out);

int run_main(int argc, char** argv);

}  // namespace pfspec::cli
