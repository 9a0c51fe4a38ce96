#include "app.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include <spdlog/spdlog.h>

#include "pathlet/error.hpp"
#include "pathlet/forced_actions.hpp"
#include "pathlet/io.hpp"
#include "pathlet/metrics.hpp"
#include "pathlet/synthetic.hpp"

namespace pathlet::app {
namespace {

namespace fs = std::filesystem;

template <typename Writer>
void emit(const fs::path& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  write_file(path, buffer.str());
  spdlog::debug("wrote {}", path.string());
}


void write_dictionary_artifacts(const fs::path& dir, const PathletGraph& graph,
                                const EnvConfig& env,
                                const std::vector<TraceRow>& trace) {
  emit(dir / "dictionary.json",
       [&](std::ostream& o) { write_dictionary_json(o, graph, env); });
  const std::vector<ReportRow> rows{{"dictionary", 0.0, report(graph, env)}};
  emit(dir / "report.csv", [&](std::ostream& o) { write_report_csv(o, rows); });
  emit(dir / "histogram.json",
       [&](std::ostream& o) { write_histograms_json(o, rows); });
  emit(dir / "trace.csv", [&](std::ostream& o) { write_trace_csv(o, trace); });
}

void run_generate(const ExperimentConfig& c, std::ostream& out) {
  const SyntheticWorld world = generate_world(c.world);
  const fs::path net_file = c.paths.network_file.empty()
                                ? c.paths.output_dir / "network.csv"
                                : c.paths.network_file;
  const fs::path traj_file = c.paths.trajectory_file.empty()
                                 ? c.paths.output_dir / "trajectories.txt"
                                 : c.paths.trajectory_file;
  write_world(world, net_file, traj_file);
  out << "network " << net_file.string() << " (" << world.network.edge_count()
      << " segments)\n"
      << "trajectories " << traj_file.string() << " ("
      << world.trajectories.size() << ")\n";
}

void run_memory(const ExperimentConfig& c, std::ostream& out) {
  const RoadNetwork net = load_road_network(c.paths.network_file);
  const auto topdown =
      memory_estimate_topdown(net, c.memory.max_length, c.memory.path_budget);
  const auto bottomup = memory_estimate_bottomup(net);
  const double ratio = bottomup ? double(topdown) / double(bottomup) : 0.0;
  out << "topdown_paths " << topdown << '\n'
      << "bottomup_pathlets " << bottomup << '\n'
      << "ratio " << ratio << '\n';
  std::ostringstream json;
  json << "{\"topdown_paths\": " << topdown
       << ", \"bottomup_pathlets\": " << bottomup << ", \"ratio\": " << ratio;
  if (c.memory.bytes_per_record > 0.0) {
    out << "topdown_bytes " << double(topdown) * c.memory.bytes_per_record << '\n'
        << "bottomup_bytes " << double(bottomup) * c.memory.bytes_per_record
        << '\n';
    json << ", \"bytes_per_record\": " << c.memory.bytes_per_record;
  }
  json << "}\n";
  write_file(c.paths.output_dir / "memory.json", json.str());
}

void run_forced(const ExperimentConfig& c, const fs::path& script_path,
                std::ostream& out) {
  auto net = std::make_shared<RoadNetwork>(load_road_network(c.paths.network_file));
  const auto trajs = load_trajectories(c.paths.trajectory_file, *net);
  const auto script = load_forced_actions(script_path);
  auto graph = std::make_shared<PathletGraph>(PathletGraph::build(net, trajs));
  MergeEnvironment env(c.env, graph);
  env.reset();
  env.set_trace_enabled(true);
  const EpisodeOutcome outcome = replay_forced_actions(env, script);
  write_dictionary_artifacts(c.paths.output_dir, env.graph(), env.config(),
                             env.trace());
  out << "forced replay: " << env.graph().live_count() << " pathlets, "
      << outcome.steps << " steps, "
      << (outcome.termination ? to_string(*outcome.termination) : "") << '\n';
}

void run_train(const ExperimentConfig& c, std::ostream& out) {
  auto net = std::make_shared<RoadNetwork>(load_road_network(c.paths.network_file));
  const auto trajs = load_trajectories(c.paths.trajectory_file, *net);
  const TrajectorySplit split = split_trajectories(trajs, c.split_fraction, c.seed);
  emit(c.paths.output_dir / "train_trajectories.txt",
       [&](std::ostream& o) { write_trajectories(o, *net, split.train); });
  emit(c.paths.output_dir / "test_trajectories.txt",
       [&](std::ostream& o) { write_trajectories(o, *net, split.test); });

  auto graph = std::make_shared<PathletGraph>(PathletGraph::build(net, split.train));
  MergeEnvironment env(c.env, graph);
  spdlog::info("training on {} trajectories, {} initial pathlets",
               split.train.size(), graph->live_count());
  TrainingResult result = run_training(env, c.train, [](const IterationReturns& r) {
    spdlog::debug("iteration {} mean return {:.6f}", r.iteration, r.mean);
  });
  write_dictionary_artifacts(c.paths.output_dir, result.dictionary, env.config(),
                             result.final_trace);
  emit(c.paths.output_dir / "returns.csv",
       [&](std::ostream& o) { write_returns_csv(o, result.returns); });
  if (result.agent) {
    emit(c.paths.output_dir / "checkpoint.json",
         [&](std::ostream& o) { save_checkpoint(o, *result.agent); });
  }
  const DictionaryReport r = report(result.dictionary, env.config());
  out << "dictionary size " << r.size << " (initial " << graph->initial_count()
      << "), phi " << r.phi << ", L_traj " << r.loss << ", mu_bar " << r.mu_bar
      << '\n';
}

void run_evaluate(const ExperimentConfig& c, std::ostream& out) {
  const RoadNetwork net = load_road_network(c.paths.network_file);
  const auto trajs = load_trajectories(c.paths.trajectory_file, net);
  const TrajectorySplit split = split_trajectories(trajs, c.split_fraction, c.seed);
  const fs::path dict_path = c.paths.dictionary_file.empty()
                                 ? c.paths.output_dir / "dictionary.json"
                                 : c.paths.dictionary_file;
  if (!fs::exists(dict_path)) {
    throw Error(ErrorCode::kMissingInput,
                "dictionary file not found: " + dict_path.string());
  }
  std::ifstream in(dict_path);
  const LoadedDictionary dict = read_dictionary_json(in, net);
  const ReconstructionCurve curve =
      reconstruction_curve(net.edge_count(), dict.pathlets, split.test, c.seed);
  emit(c.paths.output_dir / ("curve_" + c.label + ".csv"),
       [&](std::ostream& o) { write_curve_csv(o, curve); });
  for (std::size_t i = 0; i < curve.sample_fractions.size(); ++i) {
    out << curve.sample_fractions[i] << ' ' << curve.reconstructable_fraction[i]
        << '\n';
  }
}

void run_sweep(const ExperimentConfig& c, std::ostream& out) {
  auto net = std::make_shared<RoadNetwork>(load_road_network(c.paths.network_file));
  const auto trajs = load_trajectories(c.paths.trajectory_file, *net);
  const TrajectorySplit split = split_trajectories(trajs, c.split_fraction, c.seed);
  auto graph = std::make_shared<PathletGraph>(PathletGraph::build(net, split.train));
  const auto rows = sweep(graph, c.env, c.train, c.sweep.parameter, c.sweep.values);
  std::vector<ReportRow> report_rows;
  for (const auto& row : rows) {
    report_rows.push_back({std::string(to_string(row.parameter)), row.value,
                           row.report});
    out << to_string(row.parameter) << '=' << row.value << " size "
        << row.report.size << " mu_bar " << row.report.mu_bar << '\n';
  }
  const std::string column(to_string(c.sweep.parameter));
  emit(c.paths.output_dir / "sweep.csv",
       [&](std::ostream& o) { write_report_csv(o, report_rows, column); });
  emit(c.paths.output_dir / "sweep_histograms.json",
       [&](std::ostream& o) { write_histograms_json(o, report_rows); });
}

}  // namespace

void run(const ExperimentConfig& config, const RunOptions& options,
         std::ostream& out) {
  validate(config);
  fs::create_directories(config.paths.output_dir);
  const std::string resolved = to_json(config);
  spdlog::info("resolved config:\n{}", resolved);
  write_file(config.paths.output_dir / "config.resolved.json", resolved + "\n");

  switch (config.mode) {
    case Mode::kGenerate: run_generate(config, out); break;
    case Mode::kMemory: run_memory(config, out); break;
    case Mode::kTrain:
      if (options.force_actions) {
        run_forced(config, *options.force_actions, out);
      } else {
        run_train(config, out);
      }
      break;
    case Mode::kEvaluate: run_evaluate(config, out); break;
    case Mode::kSweep: run_sweep(config, out); break;
  }
}

int run_guarded(const ExperimentConfig& config, const RunOptions& options,
                std::ostream& out, std::ostream& err) {
  try {
    run(config, options, out);
    return 0;
  } catch (const Error& e) {
    err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error[" << to_string(ErrorCode::kIo) << "]: " << e.what() << '\n';
    return static_cast<int>(ErrorCode::kIo);
  }
}

}  // namespace pathlet::app
