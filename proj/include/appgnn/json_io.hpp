// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "appgnn/gat.hpp"
#include "appgnn/graph.hpp"
#include "appgnn/sampler.hpp"
#include "appgnn/standardize.hpp"
#include "appgnn/trainer.hpp"

namespace appgnn {

/// Graph interchange: {nodes:[{id,cell,label,is_pi,is_po}], edges:[[u,v]],
/// features:[[...]]} plus name/library/meta. The feature rows carry the
/// stored per-node fields, so a sampled graph round-trips losslessly.
std::string graph_to_json(const CircuitGraph& g);
CircuitGraph graph_from_json(const std::string& text, CellLibraryPtr lib);

std::string stats_to_json(const StandardizerStats& s);
StandardizerStats stats_from_json(const std::string& text);

std::string report_to_json(const SampleReport& r);

/// Versioned checkpoint bundle: library order, class names, standardizer
/// stats, hyperparameters and all parameter tensors.
struct Checkpoint {
  std::string library_text;
  std::vector<std::string> class_names;
  StandardizerStats stats;
  GatModel model;
};

std::string checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const std::string& text);

std::string history_to_csv(const std::vector<EpochStat>& history);
std::string eval_report_to_json(const EvalReport& r, const std::vector<std::string>& class_names);
std::string area_accuracy_csv(const EvalReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace appgnn
