// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "oracle.hpp"

#include "towers/mbgraph.hpp"
#include "towers/operators.hpp"
#include "towers/phonon.hpp"
#include "towers/pph.hpp"
#include "towers/random_lattice.hpp"
#include "towers/spectra.hpp"
#include "towers/srp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace towers;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Criteria {
 public:
  void run(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(id, name, o, secs, limit_seconds);
  }

  void report(int id, const std::string& name, Outcome o, double secs, double limit_seconds) {
    if (limit_seconds > 0 && secs > limit_seconds) {
      o.pass = false;
      o.detail += " (over the " + fmt(limit_seconds) + " s limit)";
    }
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures_ += o.pass ? 0 : 1;
  }

  int failures() const { return failures_; }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

 private:
  int failures_ = 0;
};

LatticeSpec two_site(double u) { return build_lattice(2, {{0, 1, -1.0}}, {u, u}); }

// (s, m, j, m_j) as twice their values, plus energy.
using Label = std::tuple<int, int, int, int>;
struct Level {
  Label label;
  double energy;
};

std::vector<Level> golden_two_site(double t, double u) {
  const double root = std::sqrt(u * u + 16 * t * t);
  std::vector<Level> g;
  g.push_back({{0, 0, 2, -2}, 0.0});
  for (int m : {-1, 1})
    for (double e : {-t, t}) g.push_back({{1, m, 1, -1}, e});
  g.push_back({{0, 0, 2, 0}, u});
  for (int m : {-2, 0, 2}) g.push_back({{2, m, 0, 0}, 0.0});
  g.push_back({{0, 0, 0, 0}, u / 2 - root / 2});
  g.push_back({{0, 0, 0, 0}, u / 2 + root / 2});
  for (int m : {-1, 1})
    for (double e : {u - t, u + t}) g.push_back({{1, m, 1, 1}, e});
  g.push_back({{0, 0, 2, 2}, 2 * u});
  return g;
}

Outcome criterion_golden_table() {
  Outcome o;
  double worst = 0.0;
  for (double u : {-4.0, 4.0}) {
    const auto records = collect_records(solve_sectors(hubbard_problem(two_site(u)), all_sectors(2), 2));
    std::vector<Level> got;
    for (const auto& r : records) {
      if (!r.j) {
        o.pass = false;
        o.detail += "missing j; ";
        continue;
      }
      got.push_back({{r.s.twice, r.m.twice, r.j->twice, r.m_j.twice}, r.energy});
    }
    auto want = golden_two_site(1.0, u);
    const auto order = [](const Level& a, const Level& b) {
      return std::tie(a.label, a.energy) < std::tie(b.label, b.energy);
    };
    std::sort(got.begin(), got.end(), order);
    std::sort(want.begin(), want.end(), order);
    if (got.size() != 16 || want.size() != 16) {
      o.pass = false;
      o.detail += "state count " + std::to_string(got.size()) + "; ";
      continue;
    }
    for (std::size_t k = 0; k < 16; ++k) {
      if (got[k].label != want[k].label) {
        o.pass = false;
        o.detail += "label mismatch at U=" + Criteria::fmt(u) + "; ";
        break;
      }
      worst = std::max(worst, std::abs(got[k].energy - want[k].energy));
    }
  }
  if (worst >= 1e-10) o.pass = false;
  o.detail += "16 states x 2 values of U, labels exact, max |dE| = " + Criteria::fmt(worst);
  return o;
}

// Criterion 2 and 6 share the random family.
struct AttractiveFamilyResult {
  Outcome uniqueness;
  Outcome witness;
  std::vector<LatticeSpec> specs;
};

AttractiveFamilyResult attractive_family() {
  AttractiveFamilyResult res;
  int checks = 0;
  int bad_unique = 0;
  int bad_witness = 0;
  double worst_energy = 0.0;
  double min_trace = 1e300;
  double min_diag = 1e300;
  std::string first_bad;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto spec = random_case(7, i);
    res.specs.push_back(spec);
    const int n = spec.n_sites();
    for (int ne = 2; ne <= 2 * (n / 2); ne += 2) {
      ++checks;
      const auto g = ground_state_report(hubbard_problem(spec), n, ne);
      if (!(g.unique && g.degeneracy == 1 && g.s.twice == 0)) {
        ++bad_unique;
        if (first_bad.empty()) first_bad = "case " + std::to_string(i) + " N_e=" + std::to_string(ne);
      }
      const auto srp = analyze_srp(spec, ne / 2);
      const double de = std::abs(srp.witness.e_abs_psi - srp.e0);
      worst_energy = std::max(worst_energy, de);
      min_trace = std::min(min_trace, srp.witness.trace_abs);
      min_diag = std::min(min_diag, srp.witness.max_diag);
      if (!(de < 1e-8 && srp.witness.trace_abs > 0 && srp.witness.max_diag > 1e-10)) ++bad_witness;
    }
  }
  res.uniqueness.pass = bad_unique == 0;
  res.uniqueness.detail = std::to_string(checks - bad_unique) + "/" + std::to_string(checks) +
                          " (graph, N_e) cases unique with s=0 over 200 graphs";
  if (!first_bad.empty()) res.uniqueness.detail += "; first failure " + first_bad;
  res.witness.pass = bad_witness == 0;
  res.witness.detail = std::to_string(checks - bad_witness) + "/" + std::to_string(checks) +
                       " witnesses; max |E(|Psi|)-E0| = " + Criteria::fmt(worst_energy) +
                       ", min Tr|Psi| = " + Criteria::fmt(min_trace) +
                       ", min max-diagonal = " + Criteria::fmt(min_diag);
  return res;
}

Outcome criterion_lieb_spin() {
  Outcome o;
  for (double u : {1.0, 4.0, 8.0}) {
    const auto g = ground_state_report(hubbard_problem(generate_lieb_chain(2, 1.0, u)), 6, 6);
    double residual = 0.0;
    for (const auto& r : g.ground_records) residual = std::max(residual, r.casimir_residual);
    const bool ok = g.s.twice == 2 && g.degeneracy == 3 && g.labels_consistent && residual < 1e-6;
    o.pass = o.pass && ok;
    o.detail += "U=" + Criteria::fmt(u) + ": s=" + g.s.str() + " deg=" + std::to_string(g.degeneracy) + "; ";
  }
  return o;
}

Outcome criterion_pph() {
  Outcome o;
  double op_dev = 0.0;
  double spec_dev = 0.0;
  int levels = 0;
  int mismatches = 0;
  const auto check = [&](const LatticeSpec& spec) {
    const int n = spec.n_sites();
    for (const auto& sector : all_sectors(n)) {
      const auto map = build_pph(spec, sector);
      const auto c = verify_spectral_correspondence(map);
      op_dev = std::max(op_dev, c.operator_deviation);
      spec_dev = std::max(spec_dev, c.spectral_deviation);
      const auto src = solve_sector(hubbard_problem(spec), sector, n);
      const auto tgt = solve_sector(hubbard_problem(map.target_spec), map.target, n);
      const auto swap = verify_label_swap(map, src, tgt);
      levels += static_cast<int>(swap.levels.size());
      mismatches += swap.mismatches;
      if (swap.levels.size() != src.records.size()) ++mismatches;
    }
  };
  for (double u : {-4.0, 4.0}) check(two_site(u));
  for (double u : {-3.0, 4.0}) check(generate_lieb_chain(2, 1.0, u));
  o.pass = op_dev < 1e-12 && spec_dev < 1e-9 && mismatches == 0;
  o.detail = "operator dev " + Criteria::fmt(op_dev) + ", spectral dev " + Criteria::fmt(spec_dev) + ", " +
             std::to_string(levels - mismatches) + "/" + std::to_string(levels) + " levels swap s<->j";
  return o;
}

Outcome criterion_towers() {
  Outcome o;
  std::ostringstream out;
  double min_gap = 1e300;
  for (const auto& spec : {two_site(-4.0), generate_chain(4, 1.0, -2.0)}) {
    const int n = spec.n_sites();
    const auto records = collect_records(solve_sectors(hubbard_problem(spec), all_sectors(n), n));
    for (int ne = 0; ne <= 2 * n; ++ne) {
      const auto t = extract_tower(records, TowerKind::Pseudospin, TowerScope::fixed_electrons(ne));
      if (!t.strict) {
        o.pass = false;
        out << "pseudospin tower not strict at |L|=" << n << " N_e=" << ne << "; ";
      }
      if (t.min_gap) min_gap = std::min(min_gap, *t.min_gap);
    }
    const auto spin = extract_tower(records, TowerKind::Spin, TowerScope::fixed_electrons(n));
    out << "attractive spin tower |L|=" << n << " (measured only): "
        << (spin.strict ? "strict" : std::to_string(spin.violations.size()) + " violations") << "; ";
  }
  if (!(min_gap > 0)) o.pass = false;
  out << "min pseudospin gap " << Criteria::fmt(min_gap) << "; ";
  const auto lieb = generate_lieb_chain(2, 1.0, 4.0);
  const auto records = collect_records(solve_sectors(hubbard_problem(lieb), sectors_with_electrons(6, 6), 6));
  const auto spin = extract_tower(records, TowerKind::Spin, TowerScope::fixed_electrons(6));
  const bool partial = spin.strict_from(HalfInt::from_twice(2));
  o.pass = o.pass && partial;
  out << "Lieb U=4 spin tower from s=1: " << (partial ? "strict" : "violated");
  o.detail = out.str();
  return o;
}

Outcome criterion_paths() {
  Outcome o;
  RandomLatticeOptions opts;
  opts.min_sites = 2;
  opts.max_sites = 7;
  std::mt19937_64 rng(1);
  long paths = 0;
  int bad = 0;
  int census_agree = 0;
  int census_total = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto spec = random_case(11, i, opts);
    const int n = spec.n_sites();
    for (int particles = 1; particles <= std::min(3, n); ++particles) {
      const auto g = oracle::config_graph(spec.hopping(), particles);
      const auto c = connectivity_census(spec, particles);
      std::size_t edges = 0;
      for (const auto& a : g.adj) edges += a.size();
      ++census_total;
      if (c.nodes == g.nodes.size() && c.edges == edges / 2 && c.components == oracle::component_count(g.adj) &&
          c.components == 1)
        ++census_agree;
      std::vector<std::pair<unsigned, unsigned>> pairs;
      if (g.nodes.size() <= 15) {
        for (unsigned a : g.nodes)
          for (unsigned b : g.nodes) pairs.emplace_back(a, b);
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, g.nodes.size() - 1);
        for (int k = 0; k < 120; ++k) pairs.emplace_back(g.nodes[pick(rng)], g.nodes[pick(rng)]);
      }
      for (const auto& [a, b] : pairs) {
        ++paths;
        const auto path = find_path(spec, ConfigNode{a}, ConfigNode{b});
        const bool valid = validate_path(spec, path).empty() && path.nodes.front().occupied == a &&
                           path.nodes.back().occupied == b &&
                           static_cast<int>(path.length()) >= oracle::bfs_distance(g, a, b);
        if (!valid || !verify_chain_product(spec, path).nonzero) ++bad;
      }
    }
  }
  o.pass = bad == 0 && census_agree == census_total;
  o.detail = std::to_string(paths - bad) + "/" + std::to_string(paths) + " paths valid with nonzero product, " +
             std::to_string(census_agree) + "/" + std::to_string(census_total) + " censuses agree";
  return o;
}

// Residual ratios of the algebra identities on every sector of a spec.
struct AlgebraTally {
  double worst = 0.0;  // max residual / (1e-12 * norm)
  long identities = 0;

  void add(const CommutatorCheck& c) {
    worst = std::max(worst, c.norm > 0 ? c.residual / (1e-12 * c.norm) : 0.0);
    ++identities;
  }
};

void algebra_identities(const LatticeSpec& spec, AlgebraTally& tally) {
  const int n = spec.n_sites();
  const bool pseudo = pseudospin_symmetric(spec);
  const double u = spec.interaction(0);
  for (const auto& sector : all_sectors(n)) {
    const int a = sector.n_up;
    const int b = sector.n_down;
    const SectorBasis basis(n, sector);
    const auto h = build_hubbard(spec, basis);
    const auto spin = build_spin_ops(n, sector);
    // [S+, S-] = 2 S_z on this sector.
    SparseMatrix comm(h.rows(), h.cols());
    if (a > 0 && b < n) comm += SparseMatrix(build_spin_raise(n, {a - 1, b + 1}).matrix * spin.s_minus.matrix);
    if (b > 0 && a < n) comm -= SparseMatrix(build_spin_lower(n, {a + 1, b - 1}).matrix * spin.s_plus.matrix);
    const SparseMatrix diff = comm - 2.0 * spin.s_z.matrix;
    const double scale = std::max(1.0, one_norm(comm) + 2.0 * one_norm(spin.s_z.matrix));
    tally.add({one_norm(diff), scale});
    if (a < n && b > 0) {
      const auto h_t = build_hubbard(spec, SectorBasis(n, {a + 1, b - 1}));
      tally.add(intertwining_residual(h_t.matrix, spin.s_plus.matrix, h.matrix));
    }
    if (b < n && a > 0) {
      const auto h_t = build_hubbard(spec, SectorBasis(n, {a - 1, b + 1}));
      tally.add(intertwining_residual(h_t.matrix, spin.s_minus.matrix, h.matrix));
    }
    if (!pseudo) continue;
    const auto pj = build_pseudospin_ops(spec, sector);
    if (a < n && b < n) {
      const auto h_t = build_hubbard(spec, SectorBasis(n, {a + 1, b + 1}));
      tally.add(intertwining_residual(h_t.matrix, pj.j_plus.matrix, h.matrix, u));
    }
    if (a > 0 && b > 0) {
      const auto h_t = build_hubbard(spec, SectorBasis(n, {a - 1, b - 1}));
      tally.add(intertwining_residual(h_t.matrix, pj.j_minus.matrix, h.matrix, -u));
    }
    tally.add(intertwining_residual(h.matrix, pj.j_squared.matrix, h.matrix));
  }
}

Outcome criterion_algebra(const std::vector<LatticeSpec>& family) {
  AlgebraTally tally;
  std::vector<LatticeSpec> specs{two_site(-4.0), two_site(4.0)};
  for (double u : {1.0, 4.0, 8.0, -3.0}) specs.push_back(generate_lieb_chain(2, 1.0, u));
  specs.insert(specs.end(), family.begin(), family.end());
  for (const auto& s : specs) algebra_identities(s, tally);
  Outcome o;
  o.pass = tally.worst <= 1.0;
  o.detail = std::to_string(tally.identities) + " identities on " + std::to_string(specs.size()) +
             " specs, worst residual " + Criteria::fmt(tally.worst) + " x 1e-12 |.|_1";
  return o;
}

Outcome criterion_holstein() {
  Outcome o;
  std::ostringstream out;
  const auto dimer = two_site(0.0);
  for (double g : {0.5, 1.0, 2.0}) {
    double previous = 1e300;
    bool monotone = true;
    bool singlet = true;
    for (int n_max = 2; n_max <= 6; ++n_max) {
      const auto r = ground_state_report(electron_phonon_problem(dimer, holstein(2, g, 1.0, 1.0, n_max)), 2, 2);
      singlet = singlet && r.s.twice == 0 && r.unique;
      monotone = monotone && r.energy <= previous + 1e-12;
      previous = r.energy;
    }
    o.pass = o.pass && singlet && monotone;
    out << "g=" << g << (singlet ? " singlet" : " NOT singlet") << (monotone ? " monotone" : " NOT monotone") << "; ";
  }
  double worst = 0.0;
  const auto site = build_lattice(1, {}, {0.0});
  for (double g : {0.5, 1.0, 2.0})
    for (int q : {1, 2}) {
      const double exact = -g * g * q * q / 2.0 + 0.5;
      const Sector s = q == 1 ? Sector{1, 0} : Sector{1, 1};
      double previous = 1e300;
      double e = 0.0;
      for (int n_max = 8; n_max <= 96; n_max += 8) {
        const auto h = build_ep_hamiltonian(site, holstein(1, g, 1.0, 1.0, n_max), SectorBasis(1, s));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(), Eigen::EigenvaluesOnly);
        e = es.eigenvalues()(0);
        if (std::abs(previous - e) < 1e-12) break;
        previous = e;
      }
      worst = std::max(worst, std::abs(e - exact));
    }
  if (worst >= 1e-6) o.pass = false;
  out << "displaced oscillator max |dE| = " << Criteria::fmt(worst);
  o.detail = out.str();
  return o;
}

}  // namespace

int main() {
  Criteria c;
  c.run(1, "two-site golden table", 1.0, criterion_golden_table);
  AttractiveFamilyResult family;
  c.run(2, "attractive ground states unique singlets", 120.0, [&] {
    family = attractive_family();
    return family.uniqueness;
  });
  c.report(6, "spin-reflection positivity witness", family.witness, 0.0, 0.0);
  c.run(3, "Lieb chain ground spin", 60.0, criterion_lieb_spin);
  c.run(4, "partial particle-hole correspondence", 60.0, criterion_pph);
  c.run(5, "spin and pseudospin towers", 60.0, criterion_towers);
  c.run(7, "configuration graph paths and census", 60.0, criterion_paths);
  c.run(8, "spin and pseudospin algebra identities", 0.0, [&] { return criterion_algebra(family.specs); });
  c.run(9, "Holstein singlet and truncation", 120.0, criterion_holstein);
  std::printf("%d criteria failed\n", c.failures());
  return c.failures() == 0 ? 0 : 1;
}
