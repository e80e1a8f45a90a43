#include "tlq/netlist.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tlq/errors.hpp"

namespace tlq {

namespace {

[[noreturn]] void parse_error(int lineno, const std::string& msg) {
  throw InputError("netlist line " + std::to_string(lineno) + ": " + msg);
}

int parse_node(const std::string& tok, int lineno) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    parse_error(lineno, "bad node label '" + tok + "'");
  }
  if (used != tok.size()) parse_error(lineno, "bad node label '" + tok + "'");
  if (v == 0) parse_error(lineno, "node 0 is the line end and couples only through COUPLE");
  if (v < 0) parse_error(lineno, "negative node label");
  return v;
}

double parse_value(const std::string& tok, int lineno) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    parse_error(lineno, "bad value '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v)) parse_error(lineno, "bad value '" + tok + "'");
  if (!(v > 0.0)) parse_error(lineno, "element values must be positive");
  return v;
}

}  // namespace

CircuitTopology parse_netlist(std::istream& in) {
  CircuitTopology topo;
  bool have_couple = false;
  int max_node = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& kind = tok[0];
    if (kind == "C" || kind == "L") {
      if (tok.size() != 4) parse_error(lineno, kind + " expects: " + kind + " i j value");
      Branch b{parse_node(tok[1], lineno), parse_node(tok[2], lineno), parse_value(tok[3], lineno)};
      if (b.a == b.b) parse_error(lineno, "element connects a node to itself");
      max_node = std::max({max_node, b.a, b.b});
      (kind == "C" ? topo.capacitors : topo.inductors).push_back(b);
    } else if (kind == "J") {
      if (tok.size() != 4 && tok.size() != 5) parse_error(lineno, "J expects: J i j E_J [phi0]");
      Junction j{parse_node(tok[1], lineno), parse_node(tok[2], lineno), parse_value(tok[3], lineno)};
      if (tok.size() == 5) j.flux_scale = parse_value(tok[4], lineno);
      if (j.a == j.b) parse_error(lineno, "element connects a node to itself");
      max_node = std::max({max_node, j.a, j.b});
      topo.junctions.push_back(j);
    } else if (kind == "COUPLE") {
      if (tok.size() != 2) parse_error(lineno, "COUPLE expects: COUPLE value");
      if (have_couple) parse_error(lineno, "duplicate COUPLE");
      topo.coupling_capacitance = parse_value(tok[1], lineno);
      have_couple = true;
    } else if (kind == "GROUND") {
      if (tok.size() != 2 || tok[1] != "auto") parse_error(lineno, "only 'GROUND auto' is supported");
    } else {
      parse_error(lineno, "unknown element '" + kind + "'");
    }
  }
  if (!have_couple) throw InputError("netlist has no COUPLE line");
  if (max_node < 2) throw InputError("netlist needs at least one circuit node and ground");
  topo.node_count = max_node - 1;
  return topo;
}

CircuitTopology parse_netlist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open netlist " + path);
  return parse_netlist(in);
}

CircuitTopology parse_netlist_string(const std::string& text) {
  std::istringstream in(text);
  return parse_netlist(in);
}

void validate(const CircuitTopology& t) {
  if (t.node_count < 1) throw InputError("circuit needs at least one node");
  if (!(t.coupling_capacitance > 0.0)) throw InputError("coupling capacitance must be positive");
  const int nmax = t.ground();
  auto check = [&](int a, int b, double v, const char* what) {
    if (a < 1 || a > nmax || b < 1 || b > nmax)
      throw InputError(std::string(what) + " references a node outside 1.." + std::to_string(nmax));
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(what) + " value must be positive");
  };
  for (const auto& c : t.capacitors) check(c.a, c.b, c.value, "capacitor");
  for (const auto& l : t.inductors) check(l.a, l.b, l.value, "inductor");
  for (const auto& j : t.junctions) {
    check(j.a, j.b, j.josephson_energy, "junction");
    if (!(j.flux_scale > 0.0)) throw InputError("junction flux scale must be positive");
  }
  std::vector<bool> has_cap(nmax + 1, false), has_ind(nmax + 1, false);
  for (const auto& c : t.capacitors) has_cap[c.a] = has_cap[c.b] = true;
  for (const auto& l : t.inductors) has_ind[l.a] = has_ind[l.b] = true;
  for (const auto& j : t.junctions) has_ind[j.a] = has_ind[j.b] = true;
  for (int n = 1; n <= t.node_count; ++n) {
    if (!has_cap[n] || !has_ind[n])
      throw ModelError("inactive node " + std::to_string(n) +
                       ": every node needs a capacitor and an inductive element");
  }
}

Eigen::MatrixXd build_capacitance_matrix(const CircuitTopology& t) {
  const int n = t.node_count + 1;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (const auto& cap : t.capacitors) {
    if (!(cap.value > 0.0)) throw InputError("capacitance must be positive");
    const int i = cap.a - 1, j = cap.b - 1;
    if (i < 0 || j < 0 || i >= n || j >= n) throw InputError("capacitor node out of range");
    c(i, j) -= cap.value;
    c(j, i) -= cap.value;
    c(i, i) += cap.value;
    c(j, j) += cap.value;
  }
  return c;
}

Eigen::MatrixXd reduce_ground(const Eigen::MatrixXd& full, int ground_index) {
  const auto n = full.rows();
  if (full.cols() != n) throw InputError("capacitance matrix must be square");
  if (ground_index < 0 || ground_index >= n) throw InputError("ground index out of range");
  Eigen::MatrixXd cb(n - 1, n - 1);
  for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
    if (r == ground_index) continue;
    for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
      if (c == ground_index) continue;
      cb(rr, cc++) = full(r, c);
    }
    ++rr;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cb);
  if (cb.size() == 0 || llt.info() != Eigen::Success)
    throw ModelError("inactive node / floating island: reduced capacitance matrix is singular");
  return cb;
}

Eigen::MatrixXd inductance_stiffness(const CircuitTopology& t) {
  const int n = t.node_count;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (const auto& l : t.inductors) {
    const double y = 1.0 / l.value;
    const int i = l.a - 1, j = l.b - 1;  // index n is ground
    if (i < n) k(i, i) += y;
    if (j < n) k(j, j) += y;
    if (i < n && j < n) {
      k(i, j) -= y;
      k(j, i) -= y;
    }
  }
  return k;
}

ReducedModel derive_reduced_model(const CircuitTopology& t, double z_c, double condition_bound) {
  validate(t);
  if (!(z_c > 0.0)) throw InputError("characteristic impedance must be positive");
  ReducedModel m;
  m.cb = reduce_ground(build_capacitance_matrix(t), t.ground() - 1);
  const auto n = m.cb.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(m.cb);
  m.cb_inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  m.cb_inv = 0.5 * (m.cb_inv + m.cb_inv.transpose()).eval();
  m.p = m.cb_inv.row(0).transpose();
  m.c_p = 1.0 / (1.0 / t.coupling_capacitance + m.p(0));
  m.b = m.c_p * m.p * m.p.transpose();
  m.a = m.cb_inv - m.b;
  m.z_c = z_c;
  m.tau = z_c * m.c_p;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.cb, Eigen::EigenvaluesOnly);
  const auto ev = eig.eigenvalues();
  m.condition_number = ev.maxCoeff() / ev.minCoeff();
  if (m.condition_number > condition_bound) {
    std::ostringstream os;
    os << "capacitance matrix is ill-conditioned (cond = " << m.condition_number << ")";
    m.warnings.push_back(os.str());
  }
  return m;
}

nlohmann::json to_json(const ReducedModel& m) {
  auto rows = [](const Eigen::MatrixXd& a) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(a.size()));
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) v.push_back(a(r, c));
    return v;
  };
  nlohmann::json j;
  j["n"] = m.size();
  j["cb"] = rows(m.cb);
  j["p"] = std::vector<double>(m.p.data(), m.p.data() + m.p.size());
  j["c_p"] = m.c_p;
  j["a"] = rows(m.a);
  j["b"] = rows(m.b);
  j["tau"] = m.tau;
  j["z_c"] = m.z_c;
  j["condition_number"] = m.condition_number;
  j["warnings"] = m.warnings;
  return j;
}

ModelResiduals check_invariants(const ReducedModel& m, double cc) {
  ModelResiduals r;
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(m.size());
  e1(0) = 1.0;
  const double cb_norm = m.cb.lpNorm<Eigen::Infinity>();
  r.cb_p_minus_e1 = (m.cb * m.p - e1).lpNorm<Eigen::Infinity>() /
                    (cb_norm * m.p.lpNorm<Eigen::Infinity>());
  r.c_p_identity = std::abs(1.0 / m.c_p - 1.0 / cc - m.p(0)) * m.c_p;
  r.a_plus_b = (m.a + m.b - m.cb_inv).lpNorm<Eigen::Infinity>() /
               m.cb_inv.lpNorm<Eigen::Infinity>();
  r.cb_symmetry = (m.cb - m.cb.transpose()).lpNorm<Eigen::Infinity>() / cb_norm;
  return r;
}

namespace {

double node_flux(const Eigen::VectorXd& phi, int node, int n) {
  return node <= n ? phi(node - 1) : 0.0;
}

void check_flux(const CircuitTopology& t, const Eigen::VectorXd& phi) {
  if (phi.size() != t.node_count) throw InputError("flux vector has wrong size");
  if (!phi.allFinite()) throw InputError("flux vector is not finite");
}

}  // namespace

double potential_energy(const CircuitTopology& t, const Eigen::VectorXd& phi) {
  check_flux(t, phi);
  const int n = t.node_count;
  double u = 0.0;
  for (const auto& l : t.inductors) {
    const double d = node_flux(phi, l.a, n) - node_flux(phi, l.b, n);
    u += d * d / (2.0 * l.value);
  }
  for (const auto& j : t.junctions) {
    const double d = node_flux(phi, j.a, n) - node_flux(phi, j.b, n);
    u -= j.josephson_energy * std::cos(d / j.flux_scale);
  }
  return u;
}

Eigen::VectorXd potential_gradient(const CircuitTopology& t, const Eigen::VectorXd& phi) {
  check_flux(t, phi);
  const int n = t.node_count;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  auto add = [&](int a, int b, double f) {
    if (a <= n) g(a - 1) += f;
    if (b <= n) g(b - 1) -= f;
  };
  for (const auto& l : t.inductors)
    add(l.a, l.b, (node_flux(phi, l.a, n) - node_flux(phi, l.b, n)) / l.value);
  for (const auto& j : t.junctions) {
    const double d = node_flux(phi, j.a, n) - node_flux(phi, j.b, n);
    add(j.a, j.b, j.josephson_energy / j.flux_scale * std::sin(d / j.flux_scale));
  }
  return g;
}

}  // namespace tlq
