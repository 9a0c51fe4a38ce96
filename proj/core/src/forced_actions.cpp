#include "pathlet/forced_actions.hpp"

#include <fstream>
#include <string>

#include "pathlet/error.hpp"

namespace pathlet {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<ForcedAction> parse_forced_actions(std::istream& in) {
  std::vector<ForcedAction> script;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    const std::string where = "forced actions line " + std::to_string(line_no);
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kParse, where + ": expected current,action");
    }
    ForcedAction step;
    const std::string current = trim(line.substr(0, comma));
    if (current.empty()) throw Error(ErrorCode::kParse, where + ": empty current");
    if (current != "*") step.current_segment = current;
    try {
      std::size_t used = 0;
      const std::string action = trim(line.substr(comma + 1));
      step.action = std::stoi(action, &used);
      if (used != action.size()) throw std::invalid_argument(action);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, where + ": action must be an integer");
    }
    script.push_back(std::move(step));
  }
  return script;
}

std::vector<ForcedAction> load_forced_actions(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingInput,
                "forced action script not found: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_forced_actions(in);
}

PathletId live_pathlet_of(const PathletGraph& graph, EdgeId segment) {
  for (PathletId id : graph.live_pathlets()) {
    for (EdgeId e : graph.pathlet(id).edges) {
      if (e == segment) return id;
    }
  }
  throw Error(ErrorCode::kLookup,
              "no live pathlet holds segment " + std::to_string(segment));
}

EpisodeOutcome replay_forced_actions(MergeEnvironment& env,
                                     const std::vector<ForcedAction>& script) {
  const RoadNetwork& net = env.graph().network();
  for (const auto& step : script) {
    if (env.done()) break;
    if (step.current_segment) {
      auto segment = net.find_segment(*step.current_segment);
      if (!segment) {
        throw Error(ErrorCode::kLookup,
                    "forced action names unknown segment " + *step.current_segment);
      }
      env.force_current(live_pathlet_of(env.graph(), *segment));
    }
    env.step(step.action);
  }
  while (!env.done()) env.step(0);
  return {env.episode_return(), env.steps_taken(), env.termination()};
}

}  // namespace pathlet
