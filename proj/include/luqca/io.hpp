#pragma once

// Text serialization: automaton definitions and circuits as JSON documents,
// state snapshots, and CSV observable tables. Float literals round-trip
// bit-exactly (shortest-representation printing).
//
// Schemas (documented in the README):
//   luqca-qca-v1     layout, neighborhood offsets, matrices as row-major
//                    [re, im] pairs, optional quiescent index. Built-in
//                    kernel operators serialize by name + parameters.
//   luqca-cqca-v1    layout, coloring (period + color table), phase list.
//   luqca-circuit-v1 wire dimensions, layers of {wires, matrix} gates.
//   luqca-state-v1   region, layout, per-cell classical values, amplitude
//                    entries {cells, re, im} above a threshold.

#include <iosfwd>
#include <string>

#include "luqca/coloring.hpp"
#include "luqca/circuit.hpp"
#include "luqca/state.hpp"

namespace luqca {

std::string qca_to_json(const QcaDefinition& qca);
QcaDefinition qca_from_json(const std::string& text);

std::string cqca_to_json(const CqcaDefinition& cqca);
CqcaDefinition cqca_from_json(const std::string& text);

std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

std::string state_to_json(const RegionState& state, double threshold = 1e-12);
RegionState state_from_json(const std::string& text);

/// Either a QCA or a CQCA model file.
struct ModelFile {
  std::optional<QcaDefinition> qca;
  std::optional<CqcaDefinition> cqca;
};
ModelFile model_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// CSV with a versioned header comment line: `# luqca-csv-v1 <name>` then a
/// column-name row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::string& name,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ostream& os_;
  std::size_t columns_;
};

}  // namespace luqca
