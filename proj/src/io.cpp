#include "towers/io.hpp"

#include "towers/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace towers {

namespace {

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw InputError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(what + " must be finite");
  return v;
}

int integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw InputError(what + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const Json& j, std::size_t n, const std::string& what) {
  if (j.is_number()) return std::vector<double>(n, number(j, what));
  if (!j.is_array() || j.size() != n)
    throw InputError(what + " must be a number or an array of length " + std::to_string(n));
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

std::vector<int> integers(const Json& j, std::size_t n, const std::string& what) {
  if (j.is_number_integer()) return std::vector<int>(n, integer(j, what));
  if (!j.is_array() || j.size() != n)
    throw InputError(what + " must be an integer or an array of length " + std::to_string(n));
  std::vector<int> out;
  for (const auto& v : j) out.push_back(integer(v, what));
  return out;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw InputError("unknown key \"" + key + "\" in " + where);
  }
}

PhononSpec parse_phonons(const Json& j, int n_sites) {
  if (!j.is_object()) throw InputError("phonons must be an object");
  reject_unknown(j, {"modes", "mass", "omega", "coupling", "quartic", "n_max"}, "phonons");
  for (const char* k : {"modes", "mass", "omega", "coupling"})
    if (!j.contains(k)) throw InputError(std::string("phonons: missing \"") + k + "\"");
  const int modes = integer(j.at("modes"), "phonons.modes");
  if (modes < 1) throw InputError("phonons.modes must be positive");
  const auto m = static_cast<std::size_t>(modes);

  PhononSpec ph;
  ph.masses = numbers(j.at("mass"), m, "phonons.mass");
  ph.frequencies = numbers(j.at("omega"), m, "phonons.omega");
  ph.quartic = j.contains("quartic") ? numbers(j.at("quartic"), m, "phonons.quartic") : std::vector<double>(m, 0.0);
  ph.n_max = j.contains("n_max") ? integers(j.at("n_max"), m, "phonons.n_max") : std::vector<int>(m, 4);
  const Json& g = j.at("coupling");
  if (!g.is_array() || g.size() != m) throw InputError("phonons.coupling must have one row per mode");
  ph.coupling.resize(modes, n_sites);
  for (int i = 0; i < modes; ++i) {
    const auto row = numbers(g[static_cast<std::size_t>(i)], static_cast<std::size_t>(n_sites), "phonons.coupling row");
    for (int x = 0; x < n_sites; ++x) ph.coupling(i, x) = row[static_cast<std::size_t>(x)];
  }
  ph.validate(n_sites);
  return ph;
}

}  // namespace

ModelFile parse_model(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("lattice file must be a JSON object");
  reject_unknown(j, {"sites", "bonds", "interactions", "bipartition", "phonons"}, "lattice file");
  for (const char* k : {"sites", "bonds", "interactions"})
    if (!j.contains(k)) throw InputError(std::string("missing \"") + k + "\"");

  const int n = integer(j.at("sites"), "sites");
  if (n < 1) throw InputError("sites must be positive");
  const Json& bond_list = j.at("bonds");
  if (!bond_list.is_array()) throw InputError("bonds must be an array");

  std::vector<Bond> bonds;
  std::map<std::pair<int, int>, std::pair<int, double>> listed;  // unordered pair -> (first x, t)
  for (const auto& b : bond_list) {
    if (!b.is_array() || b.size() != 3) throw InputError("each bond must be [x, y, t]");
    const int x = integer(b[0], "bond site") - 1;
    const int y = integer(b[1], "bond site") - 1;
    const double t = number(b[2], "bond t");
    if (x < 0 || y < 0 || x >= n || y >= n)
      throw InputError("bond [" + std::to_string(x + 1) + ", " + std::to_string(y + 1) + "] out of range");
    const auto key = std::minmax(x, y);
    if (auto it = listed.find(key); it != listed.end() && it->second.first != x) {
      if (it->second.second != t)
        throw InputError("bond (" + std::to_string(x + 1) + ", " + std::to_string(y + 1) +
                         ") listed in both directions with different t");
      continue;
    }
    listed.emplace(key, std::make_pair(x, t));
    bonds.push_back({x, y, t});
  }

  const auto u = numbers(j.at("interactions"), static_cast<std::size_t>(n), "interactions");
  std::optional<std::vector<int>> bip;
  if (j.contains("bipartition")) {
    bip = integers(j.at("bipartition"), static_cast<std::size_t>(n), "bipartition");
    for (int e : *bip)
      if (e != 0 && e != 1) throw InputError("bipartition entries must be 0 or 1");
  }

  ModelFile out{build_lattice(n, bonds, u, bip), std::nullopt};
  if (j.contains("phonons")) out.phonons = parse_phonons(j.at("phonons"), n);
  return out;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string serialize_model(const LatticeSpec& lattice, const std::optional<PhononSpec>& phonons) {
  Json j;
  j["sites"] = lattice.n_sites();
  Json bonds = Json::array();
  for (const Bond& b : lattice.bonds()) bonds.push_back(Json::array({b.x + 1, b.y + 1, b.t}));
  j["bonds"] = bonds;
  j["interactions"] = lattice.interactions();
  if (lattice.bipartition()) j["bipartition"] = *lattice.bipartition();
  if (phonons) {
    Json p;
    p["modes"] = phonons->n_modes();
    p["mass"] = phonons->masses;
    p["omega"] = phonons->frequencies;
    Json g = Json::array();
    for (Eigen::Index i = 0; i < phonons->coupling.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index x = 0; x < phonons->coupling.cols(); ++x) row.push_back(phonons->coupling(i, x));
      g.push_back(row);
    }
    p["coupling"] = g;
    p["quartic"] = phonons->quartic;
    p["n_max"] = phonons->n_max;
    j["phonons"] = p;
  }
  return dump(j);
}

Json to_json(HalfInt h) {
  if (h.is_integer()) return h.twice / 2;
  return h.value();
}

Json to_json(const SpectrumRecord& r) {
  Json j;
  j["energy"] = r.energy;
  j["sector"] = Json::array({r.sector.n_up, r.sector.n_down});
  j["s"] = to_json(r.s);
  j["m"] = to_json(r.m);
  j["j"] = r.j ? to_json(*r.j) : Json();
  j["m_j"] = to_json(r.m_j);
  j["cluster"] = r.cluster;
  j["casimir_residual"] = r.casimir_residual;
  return j;
}

Json to_json(const TowerReport& t) {
  Json j;
  j["kind"] = t.kind == TowerKind::Spin ? "spin" : "pseudospin";
  Json entries = Json::array();
  for (const auto& e : t.entries) entries.push_back(Json{{"value", to_json(e.value)}, {"min_energy", e.min_energy}});
  j["entries"] = entries;
  Json violations = Json::array();
  for (const auto& [a, b] : t.violations) violations.push_back(Json::array({to_json(a), to_json(b)}));
  j["violations"] = violations;
  j["strict"] = t.strict;
  j["min_gap"] = t.min_gap ? Json(*t.min_gap) : Json();
  return j;
}

Json to_json(const GroundStateReport& g) {
  Json j;
  j["n_electrons"] = g.n_electrons;
  j["energy"] = g.energy;
  j["degeneracy"] = g.degeneracy;
  j["s"] = to_json(g.s);
  j["j"] = g.j ? to_json(*g.j) : Json();
  j["labels_consistent"] = g.labels_consistent;
  j["unique"] = g.unique;
  return j;
}

Json to_json(const WitnessReport& w) {
  Json j;
  j["e0"] = w.e0;
  j["e_abs_psi"] = w.e_abs_psi;
  j["trace_abs"] = w.trace_abs;
  j["max_diag"] = w.max_diag;
  j["psd_min_eig"] = w.psd_min_eig;
  j["ground_degeneracy"] = w.ground_degeneracy;
  j["pass_flags"] = Json{{"energy", w.energy_ok},
                         {"trace", w.trace_ok},
                         {"diagonal", w.diagonal_ok},
                         {"psi_was_psd", w.psi_was_psd},
                         {"psd_representative", w.psd_representative ? Json(*w.psd_representative) : Json()}};
  j["pass"] = w.pass();
  return j;
}

Json to_json(const ConfigPath& path, const ChainProduct& product) {
  Json j;
  Json nodes = Json::array();
  for (const auto& node : path.nodes) {
    Json sites = Json::array();
    for (int x : node.sites()) sites.push_back(x + 1);
    nodes.push_back(sites);
  }
  j["nodes"] = nodes;
  Json moves = Json::array();
  for (const auto& m : path.moves) moves.push_back(Json{{"from", m.from + 1}, {"to", m.to + 1}, {"t", m.t}});
  j["moves"] = moves;
  j["chain_product"] = product.value;
  j["expected_abs"] = product.expected_abs;
  j["nonzero"] = product.nonzero;
  return j;
}

Json to_json(const CensusReport& c) {
  Json j;
  j["n_particles"] = c.n_particles;
  j["nodes"] = c.nodes;
  j["edges"] = c.edges;
  j["components"] = c.components;
  j["component_sizes"] = c.component_sizes;
  j["lattice_connected"] = c.lattice_connected;
  j["consistent"] = c.consistent();
  return j;
}

Json to_json(const CorrespondenceReport& c) {
  Json j;
  j["operator_deviation"] = c.operator_deviation;
  j["spectral_deviation"] = c.spectral_deviation;
  j["first_mismatch"] = c.first_mismatch ? Json(*c.first_mismatch) : Json();
  Json levels = Json::array();
  for (const auto& l : c.levels)
    levels.push_back(Json{{"source", l.source_energy}, {"target_shifted", l.target_energy}, {"deviation", l.deviation}});
  j["levels"] = levels;
  j["pass"] = c.pass();
  return j;
}

Json to_json(const LabelSwapReport& l) {
  Json j;
  Json levels = Json::array();
  for (const auto& m : l.levels) {
    levels.push_back(Json{{"source_level", m.source_level},
                          {"target_level", m.target_level},
                          {"energy", m.energy},
                          {"source", Json{{"s", to_json(m.s_source)}, {"m", to_json(m.m_source)},
                                          {"j", to_json(m.j_source)}, {"m_j", to_json(m.m_j_source)}}},
                          {"target", Json{{"s", to_json(m.s_target)}, {"m", to_json(m.m_target)},
                                          {"j", to_json(m.j_target)}, {"m_j", to_json(m.m_j_target)}}},
                          {"overlap", m.overlap},
                          {"casimir_residual", m.casimir_residual},
                          {"ok", m.ok}});
  }
  j["levels"] = levels;
  j["max_casimir_residual"] = l.max_casimir_residual;
  j["mismatches"] = l.mismatches;
  j["pass"] = l.pass();
  return j;
}

Json to_json(const BoundednessReport& b) {
  Json j;
  j["bounded"] = b.bounded;
  j["trace_abs_hopping"] = b.trace_abs_hopping;
  j["lower_bound"] = b.lower_bound;
  j["minimizer"] = std::vector<double>(b.minimizer.data(), b.minimizer.data() + b.minimizer.size());
  j["has_quartic"] = b.has_quartic;
  j["coupling_rank"] = b.coupling_rank;
  j["couplings_independent"] = b.couplings_independent;
  j["note"] = b.note;
  return j;
}

Json spectrum_report(const std::vector<SpectrumRecord>& records, const std::vector<TowerReport>& towers) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  Json rs = Json::array();
  for (const auto& r : records) rs.push_back(to_json(r));
  j["records"] = rs;
  Json ts = Json::array();
  for (const auto& t : towers) ts.push_back(to_json(t));
  j["towers"] = ts;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

}  // namespace towers
