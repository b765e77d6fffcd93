#include "commands.hpp"

#include "towers/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace lieb;
  RunConfig config;
  std::vector<int> sector;

  CLI::App app{"Symmetry-resolved exact diagonalization for Hubbard and Holstein models"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "lattice JSON file");
    sub->add_option("--output", config.output, "write the JSON report here");
    sub->add_option("--sector", sector, "sector N_up N_down")->expected(2);
    sub->add_option("--ne", config.ne, "electron number (particle number for path and lemma1)");
    sub->add_option("--nmax", config.nmax, "phonon cutoff per mode");
    sub->add_option("--deg-tol", config.deg_tol, "relative degeneracy tolerance");
    sub->add_option("--label-tol", config.label_tol, "Casimir label residual tolerance");
    sub->add_option("--dense-cap", config.dense_cap, "largest dimension for dense diagonalization");
    sub->add_option("--census-cap", config.census_cap, "largest configuration graph");
    sub->add_option("--seed", config.seed, "seed for randomized pairs and suites");
  };

  auto* spectrum = app.add_subcommand("spectrum", "labeled spectrum of one or more sectors");
  common(spectrum);
  auto* verify = app.add_subcommand("verify", "check a theorem's conclusion on the input model");
  common(verify);
  verify->add_option("which", config.which, "theorem1 | theorem3 | lieb-spin | towers | pph | srp | lemma1 | holstein-singlet")
      ->required();
  auto* suite = app.add_subcommand("suite", "randomized attractive-model property suite");
  common(suite);
  suite->add_option("--cases", config.cases, "number of random lattices");
  suite->add_option("--max-sites", config.max_sites, "largest lattice size");
  auto* path = app.add_subcommand("path", "connecting path in the configuration graph");
  common(path);
  path->add_option("--from", config.from, "start configuration (1-based sites)");
  path->add_option("--to", config.to, "end configuration (1-based sites)");
  auto* pph = app.add_subcommand("pph", "partial particle-hole correspondence");
  common(pph);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseError;
  }
  if (sector.size() == 2) config.sector = std::make_pair(sector[0], sector[1]);

  try {
    if (*spectrum) return cmd_spectrum(config);
    if (*verify) return cmd_verify(config);
    if (*suite) return cmd_suite(config);
    if (*path) return cmd_path(config);
    if (*pph) return cmd_pph(config);
  } catch (const towers::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const towers::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const towers::LabelingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kLabelingFailed;
  } catch (const towers::HypothesisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kHypothesisViolated;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kParseError;
}
