#pragma once

#include "towers/lattice.hpp"
#include "towers/mbgraph.hpp"
#include "towers/phonon.hpp"
#include "towers/pph.hpp"
#include "towers/spectra.hpp"
#include "towers/srp.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace towers {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

// A lattice file, optionally carrying phonon modes under "phonons".
struct ModelFile {
  LatticeSpec lattice;
  std::optional<PhononSpec> phonons;
};

/*
 * {"sites": n, "bonds": [[x, y, t], ...], "interactions": [U, ...],
 *  "bipartition": [0|1, ...], "phonons": {"modes", "mass", "omega",
 *  "coupling", "quartic", "n_max"}}
 *
 * Sites are 1-based. "interactions", "mass", "omega", "quartic" and "n_max"
 * accept a scalar that is broadcast. A bond listed as both (x, y) and (y, x)
 * must carry the same t and counts once. Throws InputError.
 */
ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::string& path);

// Canonical form: explicit arrays, bonds with x <= y in row-major order.
std::string serialize_model(const LatticeSpec& lattice,
                            const std::optional<PhononSpec>& phonons = std::nullopt);

Json to_json(HalfInt h);
Json to_json(const SpectrumRecord& r);
Json to_json(const TowerReport& t);
Json to_json(const GroundStateReport& g);
Json to_json(const WitnessReport& w);
Json to_json(const ConfigPath& path, const ChainProduct& product);
Json to_json(const CensusReport& c);
Json to_json(const CorrespondenceReport& c);
Json to_json(const LabelSwapReport& l);
Json to_json(const BoundednessReport& b);

// Records plus towers under a schema version.
Json spectrum_report(const std::vector<SpectrumRecord>& records, const std::vector<TowerReport>& towers);

// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

void write_text(const std::string& path, const std::string& text);

}  // namespace towers
