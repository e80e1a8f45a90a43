#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tlq/errors.hpp"
#include "tlq/inversion.hpp"
#include "tlq/io.hpp"
#include "tlq/ladder.hpp"
#include "tlq/netlist.hpp"
#include "tlq/reduced_dynamics.hpp"
#include "tlq/spectral.hpp"
#include "tlq/tline.hpp"

namespace tlq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double invariant_tolerance = 1e-10;

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

fs::path output_dir(const std::string& flag) {
  std::string dir = flag;
  if (dir.empty()) {
    const char* env = std::getenv("TLQ_OUT_DIR");
    dir = env && *env ? env : ".";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot use output directory " + dir);
  return dir;
}

json complex_list(const std::vector<Complex>& zs, double scale = 1.0) {
  json a = json::array();
  for (const auto& z : zs) a.push_back({z.real() * scale, z.imag() * scale});
  return a;
}

// Z_c from --zc or from --ell/--cap.
double line_impedance(double zc, double ell, double cap) {
  if (zc > 0.0) return zc;
  if (ell > 0.0 && cap > 0.0) return std::sqrt(ell / cap);
  throw InputError("line impedance needed: pass --zc or both --ell and --cap");
}

struct ReduceArgs {
  std::string netlist;
  double zc = 0.0, ell = 0.0, cap = 0.0;
};

int cmd_reduce(const ReduceArgs& a, const fs::path& dir, std::ostream& out, std::ostream& err) {
  const CircuitTopology topo = parse_netlist_file(a.netlist);
  const ReducedModel model = derive_reduced_model(topo, line_impedance(a.zc, a.ell, a.cap));
  const ModelResiduals r = check_invariants(model, topo.coupling_capacitance);
  json j = to_json(model);
  j["coupling_capacitance"] = topo.coupling_capacitance;
  j["invariants"] = {{"cb_p_minus_e1", r.cb_p_minus_e1},
                     {"c_p_identity", r.c_p_identity},
                     {"a_plus_b_minus_cb_inv", r.a_plus_b},
                     {"cb_symmetry", r.cb_symmetry},
                     {"tolerance", invariant_tolerance}};
  io::write_json(dir / "reduced_model.json", j);
  out << j.dump(2) << "\n";
  for (const auto& w : model.warnings) err << "warning: " << w << "\n";
  const double worst = std::max({r.cb_p_minus_e1, r.c_p_identity, r.a_plus_b, r.cb_symmetry});
  if (!(worst <= invariant_tolerance))
    throw ModelError("reduced-model invariant residual " + io::format_double(worst) +
                     " exceeds tolerance");
  return 0;
}

struct PolesArgs {
  std::vector<double> alpha{0.5, 1.0, 2.0};
  double g_start = 0.001, g_stop = 0.999, g_step = 0.001;
};

int cmd_poles(const PolesArgs& a, const fs::path& dir, std::ostream& out) {
  for (double al : a.alpha)
    if (!(al > 0.0)) throw InputError("alpha must be positive");
  const std::vector<double> grid = uniform_grid(a.g_start, a.g_stop, a.g_step);
  json side = {{"alpha", a.alpha},
               {"g_grid", {{"start", a.g_start}, {"stop", a.g_stop}, {"step", a.g_step}}},
               {"units", "s/omega_r"},
               {"tables", json::array()}};
  for (double al : a.alpha) {
    const PoleLocus locus = pole_locus(al, grid);
    const std::string name = "poles_alpha_" + tag(al) + ".csv";
    io::write_csv(dir / name, locus.csv_header(), locus.csv_columns());
    std::vector<double> near;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (locus.near_double_root[i]) near.push_back(grid[i]);
    side["tables"].push_back(
        {{"alpha", al}, {"file", name}, {"transitions", locus.transitions}, {"near_double_root_g", near}});
    out << (dir / name).string() << "\n";
  }
  io::write_json(dir / "poles.json", side);
  return 0;
}

struct ImpulseArgs {
  std::vector<double> g{0.3, 0.8};
  double alpha = 2.0;
  double omega_r = 1.0;
  double t_max = 0.0;
  std::size_t n = 8192;
};

int cmd_impulse(const ImpulseArgs& a, bool normalized, const fs::path& dir, std::ostream& out,
                std::ostream& err) {
  const double omega_r = normalized ? 1.0 : a.omega_r;
  if (!(omega_r > 0.0)) throw InputError("omega_r must be positive");
  const double t_max = a.t_max > 0.0 ? a.t_max : 10.0 * 2.0 * std::numbers::pi / omega_r;
  for (double g : a.g) {
    if (!(g > 0.0 && g < 1.0)) throw InputError("g must lie in (0, 1)");
    const TransferMatrixSpec spec = transfer_matrix(g, a.alpha, omega_r);
    const PoleSet poles = find_poles(char_poly(g, a.alpha), omega_r);

    IfftOptions opts;
    opts.t_max = t_max;
    opts.n_samples = a.n;
    std::vector<std::string> header{"t"};
    std::vector<std::vector<double>> ifft_cols, pf_cols;
    json residues, discrepancy, imag;
    double worst = 0.0, alias = 0.0;
    IfftResult first;
    for (Entry e : all_entries) {
      IfftResult r = invert_ifft(spec, e, opts);
      const PartialFractions pf = partial_fractions(spec, e);
      const Signal exact = pf.evaluate(r.signal.grid());
      double d = 0.0;
      for (std::size_t j = 0; j < exact.size(); ++j)
        d = std::max(d, std::abs(exact[j] - r.signal[j]));
      worst = std::max(worst, d);
      alias = std::max(alias, r.alias_bound);
      residues[to_string(e)] = complex_list(pf.residues);
      discrepancy[to_string(e)] = d;
      imag[to_string(e)] = r.imag_residue;
      ifft_cols.push_back(r.signal.samples());
      pf_cols.push_back(exact.samples());
      if (e == Entry::h11) first = std::move(r);
    }
    discrepancy["max"] = worst;

    const TimeGrid grid = first.signal.grid();
    std::vector<double> t(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j) t[j] = grid.at(j) * (normalized ? omega_r : 1.0);
    std::vector<std::vector<double>> cols{t};
    for (Entry e : all_entries) header.push_back(to_string(e));
    for (Entry e : all_entries) header.push_back(std::string("pf_") + to_string(e));
    for (auto& c : ifft_cols) cols.push_back(std::move(c));
    for (auto& c : pf_cols) cols.push_back(std::move(c));

    // Slowest mode: the pole with the smallest decay rate.
    const auto slowest = *std::min_element(poles.poles.begin(), poles.poles.end(),
                                           [](Complex x, Complex y) { return -x.real() < -y.real(); });
    const double pscale = normalized ? 1.0 / omega_r : 1.0;
    const std::string stem = "impulse_g" + tag(g) + "_alpha" + tag(a.alpha);
    json side = {{"g", g},
                 {"alpha", a.alpha},
                 {"omega_r", omega_r},
                 {"normalized", normalized},
                 {"t_max", t_max},
                 {"sigma", first.sigma},
                 {"period", first.period},
                 {"n_samples", first.n_samples},
                 {"alias_bound", alias},
                 {"poles", complex_list(poles.poles, pscale)},
                 {"slowest_pole", {slowest.real() * pscale, slowest.imag() * pscale}},
                 {"slowest_pole_is_real", slowest.imag() == 0.0},
                 {"residues", residues},
                 {"max_discrepancy", discrepancy},
                 {"imag_residue", imag},
                 {"warnings", first.warnings}};
    for (const auto& w : first.warnings) err << "warning: " << w << "\n";
    io::write_csv(dir / (stem + ".csv"), header, cols);
    io::write_json(dir / (stem + ".json"), side);
    out << (dir / (stem + ".csv")).string() << "\n";
  }
  return 0;
}

struct SimulateArgs {
  std::string netlist;
  double zc = 0.0, ell = 0.0, cap = 0.0;
  double v_p = 1.0;
  std::vector<std::string> phi, q;
  double q0 = 0.0;
  double t_max = 0.0;
  double dt = 0.0;
  std::size_t sections = 4000;
  double length = 0.0;
  double courant = 0.5;
};

void assign_node_values(const std::vector<std::string>& items, Eigen::VectorXd& v,
                        const char* flag) {
  for (const auto& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError(std::string(flag) + " expects NODE=VALUE");
    int node = 0;
    double value = 0.0;
    try {
      node = std::stoi(s.substr(0, eq));
      value = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError(std::string(flag) + " expects NODE=VALUE, got '" + s + "'");
    }
    if (node < 1 || node > v.size())
      throw InputError(std::string(flag) + ": node " + std::to_string(node) + " out of range");
    v(node - 1) = value;
  }
}

int cmd_simulate(const SimulateArgs& a, const fs::path& dir, std::ostream& out, std::ostream& err) {
  if (!(a.t_max > 0.0)) throw InputError("--t-max must be positive");
  const CircuitTopology topo = parse_netlist_file(a.netlist);
  const LineParams line =
      a.ell > 0.0 && a.cap > 0.0 && a.zc <= 0.0
          ? line_params(a.ell, a.cap)
          : line_from_impedance(line_impedance(a.zc, a.ell, a.cap), a.v_p);
  const ReducedModel model = derive_reduced_model(topo, line.z_c);

  ReducedState init = ReducedState::zeros(model.size());
  assign_node_values(a.phi, init.phi, "--phi");
  assign_node_values(a.q, init.q, "--q");
  init.q0 = a.q0;

  const double dt = a.dt > 0.0 ? a.dt : a.t_max / 2000.0;
  const TimeGrid grid = TimeGrid::span(a.t_max, dt);

  const Trajectory reduced = integrate(assemble_rhs(model, topo), init, grid);
  LadderOptions lo;
  lo.n_sections = a.sections;
  lo.length = a.length;
  lo.courant = a.courant;
  const LadderRun ladder = ladder_oracle(line, topo, model, init, nullptr, grid, lo);

  json disc = json::object();
  double worst = 0.0;
  for (int node = 1; node <= model.size(); ++node) {
    const double d = relative_l2(reduced.phi(node), ladder.trajectory.phi(node));
    disc["phi" + std::to_string(node)] = d;
    worst = std::max(worst, d);
  }
  disc["max"] = worst;
  json side = {{"z_c", line.z_c},
               {"v_p", line.v_p},
               {"t_max", grid.back()},
               {"dt", grid.dt},
               {"reduced_integrator", reduced.integrator},
               {"ladder_sections", a.sections},
               {"ladder_length", ladder.length},
               {"ladder_dt", ladder.dt},
               {"ladder_energy_drift", ladder.max_energy_drift},
               {"relative_l2_discrepancy", disc},
               {"model", to_json(model)},
               {"warnings", reduced.warnings}};
  for (const auto& w : reduced.warnings) err << "warning: " << w << "\n";
  io::write_csv(dir / "reduced.csv", reduced.csv_header(), reduced.csv_columns());
  io::write_csv(dir / "ladder.csv", ladder.trajectory.csv_header(), ladder.trajectory.csv_columns());
  io::write_json(dir / "simulate.json", side);
  out << "relative L2 discrepancy (max over fluxes): " << io::format_double(worst) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmission line coupled to a lumped circuit: reduction, poles, impulse responses"};
  app.require_subcommand(1);
  std::string out_flag;
  bool normalized = false;
  app.add_option("--out", out_flag, "output directory (default: $TLQ_OUT_DIR or .)");
  app.add_flag("--normalized", normalized, "use omega_r = 1 units for times and poles");

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "derive the reduced model of a netlist");
  reduce->add_option("netlist", ra.netlist)->required();
  reduce->add_option("--zc", ra.zc, "line characteristic impedance (ohm)");
  reduce->add_option("--ell", ra.ell, "line inductance per length (H/m)");
  reduce->add_option("--cap", ra.cap, "line capacitance per length (F/m)");

  PolesArgs pa;
  auto* poles = app.add_subcommand("poles", "branch-tracked pole loci of the LC example");
  poles->add_option("--alpha", pa.alpha, "Z_c/Z_r values")->capture_default_str();
  poles->add_option("--g-start", pa.g_start)->capture_default_str();
  poles->add_option("--g-stop", pa.g_stop)->capture_default_str();
  poles->add_option("--g-step", pa.g_step)->capture_default_str();

  ImpulseArgs ia;
  auto* impulse = app.add_subcommand("impulse", "impulse-response matrix of the LC example");
  impulse->add_option("--g", ia.g, "coupling values")->capture_default_str();
  impulse->add_option("--alpha", ia.alpha)->capture_default_str();
  impulse->add_option("--omega-r", ia.omega_r, "resonator frequency (rad/s)")->capture_default_str();
  impulse->add_option("--t-max", ia.t_max, "window length (default 10 periods)");
  impulse->add_option("--n", ia.n, "FFT size, rounded up to a power of two")->capture_default_str();

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "reduced model against the LC-ladder oracle");
  simulate->add_option("netlist", sa.netlist)->required();
  simulate->add_option("--zc", sa.zc, "line characteristic impedance (ohm)");
  simulate->add_option("--ell", sa.ell, "line inductance per length (H/m)");
  simulate->add_option("--cap", sa.cap, "line capacitance per length (F/m)");
  simulate->add_option("--vp", sa.v_p, "phase velocity (m/s) when --zc is given")->capture_default_str();
  simulate->add_option("--phi", sa.phi, "initial node flux, NODE=VALUE");
  simulate->add_option("--q", sa.q, "initial node charge, NODE=VALUE");
  simulate->add_option("--q0", sa.q0, "initial coupling charge")->capture_default_str();
  simulate->add_option("--t-max", sa.t_max)->required();
  simulate->add_option("--dt", sa.dt, "sample spacing (default t_max/2000)");
  simulate->add_option("--sections", sa.sections)->capture_default_str();
  simulate->add_option("--length", sa.length, "ladder length (default: just beyond the echo limit)");
  simulate->add_option("--courant", sa.courant)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::input);
  }

  try {
    const fs::path dir = output_dir(out_flag);
    if (*reduce) return cmd_reduce(ra, dir, out, err);
    if (*poles) return cmd_poles(pa, dir, out);
    if (*impulse) return cmd_impulse(ia, normalized, dir, out, err);
    if (*simulate) return cmd_simulate(sa, dir, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace tlq::cli
