#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pathlet/dqn.hpp"
#include "pathlet/merge_env.hpp"
#include "pathlet/metrics.hpp"

namespace pathlet {

// Dictionary JSON: {"pathlets": [{pathlet_id, edge_seq, start_node, end_node,
// length, traversal_traj_ids, weight}, ...], "summary": {S1, phi, L_traj,
// mu_bar, config}}.
void write_dictionary_json(std::ostream& out, const PathletGraph& graph,
                           const EnvConfig& config);

struct LoadedDictionary {
  std::vector<std::vector<EdgeId>> pathlets;
  double size = 0.0;
  double phi = 0.0;
  double loss = 0.0;
  double mu_bar = 0.0;
};

// Throws Error(kParse) on malformed JSON and Error(kValidation) on segment
// names the network does not know.
LoadedDictionary read_dictionary_json(std::istream& in, const RoadNetwork& net);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);
void write_returns_csv(std::ostream& out,
                       const std::vector<IterationReturns>& returns);

struct ReportRow {
  std::string label;
  double value = 0.0;
  DictionaryReport report;
};

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows,
                      const std::string& value_column = "value");
void write_histograms_json(std::ostream& out,
                           const std::vector<ReportRow>& rows);
void write_curve_csv(std::ostream& out, const ReconstructionCurve& curve);

void save_checkpoint(std::ostream& out, const DqnAgent& agent);
// Restores network, target, optimizer moments and counters. Throws
// Error(kValidation) when the layer sizes differ from the agent's.
void load_checkpoint(std::istream& in, DqnAgent& agent);

// Writes via a temporary file renamed into place.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pathlet
