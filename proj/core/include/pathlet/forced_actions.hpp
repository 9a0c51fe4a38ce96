#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pathlet/dqn.hpp"
#include "pathlet/merge_env.hpp"

namespace pathlet {

// One scripted step. `current_segment` names a segment whose live pathlet is
// made current before acting; empty keeps the environment's own choice.
struct ForcedAction {
  std::optional<std::string> current_segment;
  int action = 0;
};

// Script format: one `current,action` pair per line, `*` for "leave the
// current pathlet alone", `#` comments.
std::vector<ForcedAction> parse_forced_actions(std::istream& in);
std::vector<ForcedAction> load_forced_actions(const std::filesystem::path& path);

// Live pathlet containing `segment`. Throws Error(kLookup) if none.
PathletId live_pathlet_of(const PathletGraph& graph, EdgeId segment);

// Plays the script on an already-reset environment, then keeps every
// remaining pathlet until the episode ends.
EpisodeOutcome replay_forced_actions(MergeEnvironment& env,
                                     const std::vector<ForcedAction>& script);

}  // namespace pathlet
