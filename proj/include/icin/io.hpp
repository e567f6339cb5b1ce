#pragma once
// File formats: observed-distribution and counts JSON, microdata CSV,
// sensitivity specs, reports and run manifests. Floats serialize with 17
// significant digits; writes go through a temp file and a rename.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icin/categorical.hpp"
#include "icin/continuous.hpp"
#include "icin/diagnostics.hpp"
#include "icin/posterior.hpp"
#include "icin/sensitivity.hpp"

namespace icin {

// Item names and level labels used by files and functional specs.
struct Schema {
  std::vector<std::string> items;
  std::vector<std::vector<std::string>> labels;
  std::string weight_column;  // microdata only; "" = none
  std::vector<std::string> missing_tokens{"", "NA"};
  std::map<std::string, std::string> recode;  // raw token -> token, applied first

  static Schema defaults(const std::vector<int>& levels);  // X1.. / "1".."K"
  std::vector<int> level_counts() const;
  int item_index(const std::string& name) const;           // -1 when absent
  int level_index(int item, const std::string& label) const;
  void validate() const;
};

struct LabeledObserved {
  ObservedDistribution dist;
  Schema schema;
};

struct LabeledCounts {
  ObservedCounts counts;
  Schema schema;
};

// categorical microdata with explicit missing markers
struct MicrodataTable {
  Schema schema;
  std::vector<std::vector<int>> rows;  // level index, -1 = missing
  std::vector<double> weights;
  std::vector<std::size_t> line_numbers;  // for row-level error messages
};

MicrodataTable read_microdata_csv(const std::string& path,
                                  const std::optional<Schema>& schema = std::nullopt);
// reject rows whose blanks are not a trailing run (dropout ingestion)
void require_monotone_rows(const MicrodataTable& table);
LabeledCounts aggregate(const MicrodataTable& table);

LabeledObserved read_observed_json(const std::string& path);
void write_observed_json(const std::string& path, const ObservedDistribution& dist,
                         const Schema& schema);
LabeledCounts read_counts_json(const std::string& path);
void write_counts_json(const std::string& path, const ObservedCounts& counts,
                       const Schema& schema);

void write_full_data_csv(const std::string& path, const FullDataDistribution& g);
void write_full_data_json(const std::string& path, const FullDataDistribution& g,
                          const Schema& schema);

// sensitivity specification and grid files (item/level references by label)
SensitivityFunction read_xi_json(const std::string& path, const CategoricalSpace& space,
                                 const Schema& schema);
SensitivityGrid read_grid_json(const std::string& path, const CategoricalSpace& space,
                               const Schema& schema);

// "name=ITEM=LEVEL&ITEM=LEVEL" conjunction over full cells
NamedEvent parse_functional(const std::string& spec, const CategoricalSpace& space,
                            const Schema& schema);

// continuous microdata: columns x1, x2, optional weight; empty = missing
WeightedSample read_weighted_sample_csv(const std::string& path,
                                        const std::string& weight_column = "weight");

void write_feasibility_json(const std::string& path, const FeasibilityReport& report,
                            const Schema& schema);

// simulation output: one row per record, missing cells empty
void write_masked_records_csv(const std::string& path,
                              const std::vector<MaskedRecord>& records,
                              const Schema& schema);

// run manifest: input hashes, seed and parameters, outputs
struct Manifest {
  std::string mode;
  std::map<std::string, std::string> inputs;   // path -> content hash
  std::map<std::string, std::string> params;
  std::vector<std::string> outputs;
};
void write_manifest_json(const std::string& path, const Manifest& manifest);
std::string hash_file(const std::string& path);  // "fnv1a64:...."

// shared low-level helpers
std::string read_text_file(const std::string& path);
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace icin
