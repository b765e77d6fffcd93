#include "commands.hpp"

#include "towers/errors.hpp"
#include "towers/io.hpp"
#include "towers/parallel.hpp"
#include "towers/mbgraph.hpp"
#include "towers/phonon.hpp"
#include "towers/pph.hpp"
#include "towers/random_lattice.hpp"
#include "towers/srp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>

namespace lieb {

using namespace towers;

namespace {

class CheckList {
 public:
  void add(const std::string& name, bool pass, Json detail = Json::object()) {
    detail["name"] = name;
    detail["pass"] = pass;
    items_.push_back(detail);
    all_ = all_ && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << name << "\n";
  }
  bool all() const { return all_; }
  const Json& items() const { return items_; }

 private:
  Json items_ = Json::array();
  bool all_ = true;
};

void require(bool condition, const std::string& missing) {
  if (!condition) throw HypothesisError("hypothesis not satisfied: " + missing);
}

bool all_u(const LatticeSpec& lat, const std::function<bool(double)>& pred) {
  return std::all_of(lat.interactions().begin(), lat.interactions().end(), pred);
}

void emit(const RunConfig& config, const Json& report) {
  if (!config.output.empty()) write_text(config.output, dump(report));
}

ModelFile load(const RunConfig& config) {
  if (config.input.empty()) throw InputError("--input is required");
  ModelFile model = load_model(config.input);
  if (config.nmax && model.phonons) {
    if (*config.nmax < 1) throw InputError("--nmax must be at least 1");
    std::fill(model.phonons->n_max.begin(), model.phonons->n_max.end(), *config.nmax);
  }
  return model;
}

Sector checked_sector(const std::pair<int, int>& s, int n) {
  if (s.first < 0 || s.second < 0 || s.first > n || s.second > n)
    throw InputError("sector (" + std::to_string(s.first) + ", " + std::to_string(s.second) + ") out of range");
  return {s.first, s.second};
}

int checked_ne(int ne, int n) {
  if (ne < 0 || ne > 2 * n) throw InputError("--ne out of range");
  return ne;
}

std::vector<int> even_fillings(const RunConfig& config, int n) {
  if (config.ne) {
    const int ne = checked_ne(*config.ne, n);
    require(ne % 2 == 0, "N_e even");
    return {ne};
  }
  std::vector<int> out;
  for (int ne = 2; ne <= 2 * (n / 2); ne += 2) out.push_back(ne);
  if (out.empty()) out.push_back(0);
  return out;
}

std::string label(const std::optional<HalfInt>& h) { return h ? h->str() : "-"; }

void print_table(const std::vector<SpectrumRecord>& records) {
  std::printf("%5s %6s %20s %5s %5s %5s %5s %7s\n", "N_up", "N_down", "energy", "s", "m", "j", "m_j", "cluster");
  for (const auto& r : records)
    std::printf("%5d %6d %20.12f %5s %5s %5s %5s %7d\n", r.sector.n_up, r.sector.n_down, r.energy,
                r.s.str().c_str(), r.m.str().c_str(), label(r.j).c_str(), r.m_j.str().c_str(), r.cluster);
}

SectorBuilder builder_for(const ModelFile& model, PseudospinLabels labels = PseudospinLabels::Auto) {
  if (model.phonons) return electron_phonon_problem(model.lattice, *model.phonons);
  return hubbard_problem(model.lattice, labels);
}

Json ground_json(const GroundStateReport& g) { return to_json(g); }

// ---- verify targets -------------------------------------------------------

void verify_theorem1(const ModelFile& m, const RunConfig& c, CheckList& checks, Json& report) {
  const LatticeSpec& lat = m.lattice;
  require(!m.phonons, "a pure Hubbard model (use holstein-singlet for phonons)");
  require(all_u(lat, [](double u) { return u <= 0.0; }), "U_x attractive (some U_x > 0)");
  const auto opts = c.spectrum_options();
  for (int ne : even_fillings(c, lat.n_sites())) {
    const auto g = ground_state_report(hubbard_problem(lat), lat.n_sites(), ne, opts);
    const bool has_singlet = std::any_of(g.ground_records.begin(), g.ground_records.end(),
                                         [](const auto& r) { return r.s.twice == 0; });
    checks.add("singlet ground state at N_e=" + std::to_string(ne), has_singlet, Json{{"ground", ground_json(g)}});
    const auto srp = analyze_srp(lat, ne / 2, opts);
    checks.add("positivity witness at N_e=" + std::to_string(ne), srp.witness.pass(),
               Json{{"witness", to_json(srp.witness)}});
  }
  report["target"] = "theorem1";
}

void verify_theorem3(const ModelFile& m, const RunConfig& c, CheckList& checks, Json& report) {
  const LatticeSpec& lat = m.lattice;
  require(!m.phonons, "a pure Hubbard model");
  require(all_u(lat, [](double u) { return u < 0.0; }), "U_x strictly negative");
  require(is_connected(lat).connected, "connected lattice");
  for (int ne : even_fillings(c, lat.n_sites())) {
    const auto g = ground_state_report(hubbard_problem(lat), lat.n_sites(), ne, c.spectrum_options());
    checks.add("unique singlet ground state at N_e=" + std::to_string(ne), g.unique && g.s.twice == 0,
               Json{{"ground", ground_json(g)}});
  }
  report["target"] = "theorem3";
}

void verify_lieb_spin(const ModelFile& m, const RunConfig& c, CheckList& checks, Json& report) {
  const LatticeSpec& lat = m.lattice;
  const int n = lat.n_sites();
  require(!m.phonons, "a pure Hubbard model");
  require(all_u(lat, [](double u) { return u > 0.0; }), "U_x strictly positive");
  require(is_connected(lat).connected, "connected lattice");
  const auto bip = detect_bipartition(lat);
  require(bip.is_bipartite, "bipartite lattice");
  require(!c.ne || *c.ne == n, "half filling (N_e = |Λ|)");
  const int twice_s = std::abs(bip.size_a - bip.size_b);
  const auto g = ground_state_report(hubbard_problem(lat), n, n, c.spectrum_options());
  checks.add("ground spin equals ||A|-|B||/2 = " + HalfInt{twice_s}.str(),
             g.unique && g.s.twice == twice_s && g.degeneracy == twice_s + 1,
             Json{{"ground", ground_json(g)}, {"size_a", bip.size_a}, {"size_b", bip.size_b}});
  report["target"] = "lieb-spin";
}

void verify_towers(const ModelFile& m, const RunConfig& c, CheckList& checks, Json& report) {
  const LatticeSpec& lat = m.lattice;
  const int n = lat.n_sites();
  require(!m.phonons, "a pure Hubbard model");
  const auto opts = c.spectrum_options();
  Json towers = Json::array();
  if (all_u(lat, [](double u) { return u < 0.0; })) {
    require(pseudospin_symmetric(lat), "pseudospin symmetry (bipartite, no t_xx, uniform U)");
    std::vector<int> fillings;
    if (c.ne) {
      fillings.push_back(checked_ne(*c.ne, n));
    } else {
      for (int ne = 0; ne <= 2 * n; ++ne) fillings.push_back(ne);
    }
    for (int ne : fillings) {
      const auto spectra = solve_sectors(hubbard_problem(lat), sectors_with_electrons(n, ne), n, opts);
      const auto records = collect_records(spectra);
      const auto pseudo = extract_tower(records, TowerKind::Pseudospin, TowerScope::fixed_electrons(ne), c.deg_tol);
      const auto spin = extract_tower(records, TowerKind::Spin, TowerScope::fixed_electrons(ne), c.deg_tol);
      checks.add("pseudospin tower at N_e=" + std::to_string(ne), pseudo.strict, Json{{"tower", to_json(pseudo)}});
      towers.push_back(Json{{"n_electrons", ne}, {"pseudospin", to_json(pseudo)}, {"spin_measured", to_json(spin)}});
    }
  } else if (all_u(lat, [](double u) { return u > 0.0; })) {
    const auto bip = detect_bipartition(lat);
    require(bip.is_bipartite, "bipartite lattice");
    require(!c.ne || *c.ne == n, "half filling (N_e = |Λ|)");
    const HalfInt s0{std::abs(bip.size_a - bip.size_b)};
    const auto spectra = solve_sectors(hubbard_problem(lat), sectors_with_electrons(n, n), n, opts);
    const auto spin = extract_tower(collect_records(spectra), TowerKind::Spin, TowerScope::fixed_electrons(n), c.deg_tol);
    checks.add("spin tower from s=" + s0.str() + " at half filling", spin.strict_from(s0),
               Json{{"tower", to_json(spin)}});
    towers.push_back(Json{{"n_electrons", n}, {"spin", to_json(spin)}});
  } else {
    require(false, "U_x uniformly signed (all negative or all positive)");
  }
  report["target"] = "towers";
  report["towers"] = towers;
}

void verify_pph(const ModelFile& m, const RunConfig& c, CheckList& checks, Json& report) {
  const LatticeSpec& lat = m.lattice;
  const int n = lat.n_sites();
  require(!m.phonons, "a pure Hubbard model");
  require(resolve_bipartition(lat).has_value(), "bipartite lattice");
  require(!lat.has_diagonal_hopping(), "no diagonal hopping t_xx");
  require(lat.uniform_interaction(), "uniform U_x");

  std::vector<Sector> sectors;
  if (c.sector) {
    sectors.push_back(checked_sector(*c.sector, n));
  } else if (c.ne) {
    sectors = sectors_with_electrons(n, checked_ne(*c.ne, n));
  } else {
    sectors = all_sectors(n);
  }
  const SpectrumOptions opts = c.spectrum_options();

  double op_dev = 0.0;
  double spec_dev = 0.0;
  int mismatches = 0;
  Json per_sector = Json::array();
  const auto source_builder = hubbard_problem(lat, PseudospinLabels::Force);
  for (const Sector s : sectors) {
    const PphMap map = build_pph(lat, s);
    if (map.dimension() > opts.dense_cap)
      throw CapExceeded("sector dimension for label matching", static_cast<long long>(map.dimension()),
                        static_cast<long long>(opts.dense_cap));
    const auto corr = verify_spectral_correspondence(map, opts);
    const auto src = solve_sector(source_builder, map.source, n, opts);
    const auto tgt = solve_sector(hubbard_problem(map.target_spec, PseudospinLabels::Force), map.target, n, opts);
    const auto swap = verify_label_swap(map, src, tgt, c.label_tol);
    op_dev = std::max(op_dev, corr.operator_deviation);
    spec_dev = std::max(spec_dev, corr.spectral_deviation);
    mismatches += swap.mismatches;
    per_sector.push_back(Json{{"source", Json::array({s.n_up, s.n_down})},
                              {"target", Json::array({map.target.n_up, map.target.n_down})},
                              {"energy_shift", map.energy_shift},
                              {"correspondence", to_json(corr)},
                              {"label_swap", to_json(swap)}});
  }
  checks.add("conjugated Hamiltonian matches target", op_dev < 1e-12, Json{{"max_deviation", op_dev}});
  checks.add("spectra agree after the U*N_down shift", spec_dev < 1e-9, Json{{"max_deviation", spec_dev}});
  checks.add("spin and pseudospin labels swap", mismatches == 0, Json{{"mismatches", mismatches}});
  std::printf("max operator deviation %.3e, max spectral deviation %.3e\n", op_dev, spec_dev);
  report["target"] = "pph";
  report["sectors"] = per_sector;
}

void verify_srp(const ModelFile& m, const RunConfig& c, CheckList& checks, Json& report) {
  const LatticeSpec& lat = m.lattice;
  require(!m.phonons, "a pure Hubbard model");
  require(all_u(lat, [](double u) { return u <= 0.0; }), "U_x attractive (some U_x > 0)");
  Json witnesses = Json::array();
  for (int ne : even_fillings(c, lat.n_sites())) {
    const auto srp = analyze_srp(lat, ne / 2, c.spectrum_options());
    checks.add("positivity witness at N=" + std::to_string(ne / 2) + " per spin", srp.witness.pass(),
               Json{{"witness", to_json(srp.witness)}, {"hermiticity_residual", srp.psi.hermiticity_residual}});
  }
  report["target"] = "srp";
}

bool check_path(const LatticeSpec& lat, ConfigNode x, ConfigNode y, Json* out) {
  const ConfigPath path = find_path(lat, x, y);
  const std::string why = validate_path(lat, path);
  if (!why.empty()) {
    if (out) *out = Json{{"error", why}};
    return false;
  }
  const ChainProduct p = verify_chain_product(lat, path);
  if (out) *out = to_json(path, p);
  return path.nodes.front() == x && path.nodes.back() == y && p.nonzero &&
         std::abs(std::abs(p.value) - p.expected_abs) <= 1e-12 * p.expected_abs;
}

void verify_lemma1(const ModelFile& m, const RunConfig& c, CheckList& checks, Json& report) {
  const LatticeSpec& lat = m.lattice;
  const int n = lat.n_sites();
  require(is_connected(lat).connected, "connected lattice");
  std::vector<int> counts;
  if (c.ne) {
    require(*c.ne >= 0 && *c.ne <= n, "particle number within 0..|Λ|");
    counts.push_back(*c.ne);
  } else {
    for (int k = 1; k < n; ++k) counts.push_back(k);
    if (counts.empty()) counts.push_back(n);
  }
  Json census = Json::array();
  for (int k : counts) {
    const CensusReport cr = connectivity_census(lat, k, c.census_cap);
    checks.add("configuration graph connected for N=" + std::to_string(k), cr.consistent() && cr.components == 1,
               Json{{"census", to_json(cr)}});
    census.push_back(to_json(cr));

    const auto nodes = masks_with_popcount(n, k);
    std::vector<std::pair<Mask, Mask>> pairs;
    if (nodes.size() * nodes.size() <= 4000) {
      for (Mask a : nodes)
        for (Mask b : nodes) pairs.emplace_back(a, b);
    } else {
      auto rng = case_rng(c.seed, static_cast<std::uint64_t>(k));
      std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
      for (int i = 0; i < 4000; ++i) pairs.emplace_back(nodes[pick(rng)], nodes[pick(rng)]);
    }
    int failed = 0;
    for (const auto& [a, b] : pairs)
      if (!check_path(lat, {a}, {b}, nullptr)) ++failed;
    checks.add("paths with nonzero chain product for N=" + std::to_string(k), failed == 0,
               Json{{"pairs", pairs.size()}, {"failed", failed}});
  }
  report["target"] = "lemma1";
  report["census"] = census;
}

void verify_holstein(const ModelFile& m, const RunConfig& c, CheckList& checks, Json& report) {
  require(m.phonons.has_value(), "phonon modes in the input");
  const LatticeSpec& lat = m.lattice;
  const int n = lat.n_sites();
  const auto fillings = even_fillings(c, n);
  const int top = *std::max_element(m.phonons->n_max.begin(), m.phonons->n_max.end());
  const auto opts = c.spectrum_options();

  Json sweep = Json::array();
  for (int ne : fillings) {
    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    bool singlet = true;
    for (int cut = 1; cut <= top; ++cut) {
      PhononSpec ph = *m.phonons;
      std::fill(ph.n_max.begin(), ph.n_max.end(), cut);
      const auto g = ground_state_report(electron_phonon_problem(lat, ph), n, ne, opts);
      const bool has_singlet = std::any_of(g.ground_records.begin(), g.ground_records.end(),
                                           [](const auto& r) { return r.s.twice == 0; });
      singlet = singlet && has_singlet;
      monotone = monotone && g.energy <= previous + 1e-10 * (1.0 + std::abs(g.energy));
      previous = g.energy;
      sweep.push_back(Json{{"n_electrons", ne}, {"n_max", cut}, {"ground", ground_json(g)}});
    }
    checks.add("singlet ground state at every truncation, N_e=" + std::to_string(ne), singlet);
    checks.add("ground energy non-increasing in n_max, N_e=" + std::to_string(ne), monotone);
  }
  const auto bound = check_boundedness(lat, *m.phonons);
  checks.add("phonon energy bounded below", bound.bounded, Json{{"boundedness", to_json(bound)}});
  report["target"] = "holstein-singlet";
  report["sweep"] = sweep;
}

}  // namespace

SpectrumOptions RunConfig::spectrum_options() const {
  if (!(deg_tol > 0.0) || !(label_tol > 0.0)) throw InputError("tolerances must be positive");
  if (dense_cap < 1) throw InputError("--dense-cap must be at least 1");
  SpectrumOptions o;
  o.dense_cap = dense_cap;
  o.degeneracy_tol = deg_tol;
  o.label_tol = label_tol;
  return o;
}

int cmd_spectrum(const RunConfig& config) {
  const ModelFile model = load(config);
  const int n = model.lattice.n_sites();
  std::vector<Sector> sectors;
  TowerScope scope = TowerScope::all();
  if (config.sector) {
    sectors.push_back(checked_sector(*config.sector, n));
    scope = TowerScope::fixed_sector(sectors.front());
  } else if (config.ne) {
    sectors = sectors_with_electrons(n, checked_ne(*config.ne, n));
    scope = TowerScope::fixed_electrons(*config.ne);
  } else {
    sectors = all_sectors(n);
  }
  const auto opts = config.spectrum_options();
  const auto spectra = solve_sectors(builder_for(model), sectors, n, opts);
  const auto records = collect_records(spectra);
  print_table(records);

  std::vector<TowerReport> towers{extract_tower(records, TowerKind::Spin, scope, opts.degeneracy_tol)};
  const bool labeled_j = std::any_of(records.begin(), records.end(), [](const auto& r) { return r.j.has_value(); });
  if (labeled_j && scope.kind != TowerScope::Kind::All)
    towers.push_back(extract_tower(records, TowerKind::Pseudospin, scope, opts.degeneracy_tol));
  const bool partial = std::any_of(spectra.begin(), spectra.end(), [](const auto& s) { return s.partial; });
  if (partial) std::printf("note: sectors above the dense cap list only their lowest %d levels\n", opts.lowest_k);

  Json report = spectrum_report(records, towers);
  report["partial"] = partial;
  emit(config, report);
  return kOk;
}

int cmd_verify(const RunConfig& config) {
  static const std::map<std::string, void (*)(const ModelFile&, const RunConfig&, CheckList&, Json&)> targets{
      {"theorem1", verify_theorem1}, {"theorem3", verify_theorem3}, {"lieb-spin", verify_lieb_spin},
      {"towers", verify_towers},     {"pph", verify_pph},           {"srp", verify_srp},
      {"lemma1", verify_lemma1},     {"holstein-singlet", verify_holstein}};
  const auto it = targets.find(config.which);
  if (it == targets.end()) throw InputError("unknown verification target \"" + config.which + "\"");
  const ModelFile model = load(config);
  CheckList checks;
  Json report;
  report["schema_version"] = kReportSchemaVersion;
  it->second(model, config, checks, report);
  report["checks"] = checks.items();
  report["pass"] = checks.all();
  emit(config, report);
  return checks.all() ? kOk : kCheckFailed;
}

int cmd_suite(const RunConfig& config) {
  if (config.cases < 0) throw InputError("--cases must be non-negative");
  if (config.max_sites < 1 || config.max_sites > 8) throw InputError("--max-sites must be within 1..8");
  RandomLatticeOptions family;
  family.max_sites = config.max_sites;
  family.min_sites = std::min(3, config.max_sites);
  const auto opts = config.spectrum_options();

  struct Outcome {
    int n_sites = 0;
    Json failures = Json::array();
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(config.cases));
  std::vector<std::string> specs(outcomes.size());
  parallel_for(outcomes.size(), [&](std::size_t i) {
    const LatticeSpec lat = random_case(config.seed, i, family);
    const int n = lat.n_sites();
    Outcome& o = outcomes[i];
    o.n_sites = n;
    auto fail = [&](const std::string& check, Json detail) {
      detail["check"] = check;
      o.failures.push_back(detail);
    };
    for (int ne = 2; ne <= 2 * (n / 2); ne += 2) {
      const auto g = ground_state_report(hubbard_problem(lat), n, ne, opts);
      if (!(g.unique && g.s.twice == 0)) fail("unique singlet ground state", Json{{"ground", to_json(g)}});
      const auto srp = analyze_srp(lat, ne / 2, opts);
      if (!srp.witness.pass()) fail("positivity witness", Json{{"witness", to_json(srp.witness)}});
    }
    for (int k = 1; k <= std::min(3, n - 1); ++k) {
      const CensusReport cr = connectivity_census(lat, k, config.census_cap);
      if (!(cr.consistent() && cr.components == 1)) fail("configuration graph connected", Json{{"census", to_json(cr)}});
      const auto nodes = masks_with_popcount(n, k);
      Json path;
      if (!check_path(lat, {nodes.front()}, {nodes.back()}, &path)) fail("connecting path", Json{{"path", path}});
    }
    if (!o.failures.empty()) specs[i] = serialize_model(lat);
  });

  Json failures = Json::array();
  int passed = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].failures.empty()) {
      ++passed;
      continue;
    }
    failures.push_back(Json{{"case", i}, {"checks", outcomes[i].failures}, {"spec", Json::parse(specs[i])}});
  }
  std::printf("suite seed %llu: %d/%d cases passed\n", static_cast<unsigned long long>(config.seed), passed,
              config.cases);
  Json report;
  report["schema_version"] = kReportSchemaVersion;
  report["seed"] = config.seed;
  report["cases"] = config.cases;
  report["max_sites"] = config.max_sites;
  report["passed"] = passed;
  report["failures"] = failures;
  emit(config, report);
  return failures.empty() ? kOk : kCheckFailed;
}

int cmd_path(const RunConfig& config) {
  const ModelFile model = load(config);
  const LatticeSpec& lat = model.lattice;
  const int n = lat.n_sites();
  auto to_node = [&](const std::vector<int>& sites) {
    std::vector<int> zero_based;
    for (int s : sites) zero_based.push_back(s - 1);
    return ConfigNode::from_sites(zero_based, n);
  };
  ConfigNode x;
  ConfigNode y;
  if (!config.from.empty() || !config.to.empty()) {
    x = to_node(config.from);
    y = to_node(config.to);
  } else {
    const int k = config.ne.value_or(1);
    if (k < 0 || k > n) throw InputError("--ne out of range for a path");
    const auto nodes = masks_with_popcount(n, k);
    x = {nodes.front()};
    y = {nodes.back()};
  }
  Json path;
  const bool ok = check_path(lat, x, y, &path);
  for (const auto& node : path["nodes"]) std::cout << node.dump() << "\n";
  std::printf("%zu moves, chain product %.17g\n", path["moves"].size(), path["chain_product"].get<double>());
  Json report;
  report["schema_version"] = kReportSchemaVersion;
  report["path"] = path;
  report["pass"] = ok;
  emit(config, report);
  return ok ? kOk : kCheckFailed;
}

int cmd_pph(const RunConfig& config) {
  RunConfig c = config;
  c.which = "pph";
  return cmd_verify(c);
}

}  // namespace lieb
