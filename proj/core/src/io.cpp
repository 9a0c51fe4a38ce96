#include "pathlet/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pathlet/config.hpp"
#include "pathlet/error.hpp"

namespace pathlet {
namespace {

using nlohmann::json;

json moments_json(const Mlp::Gradients& g) {
  return json(Mlp::flatten(g));
}

Mlp::Gradients moments_from(const json& j, const Mlp& shape) {
  Mlp copy = shape;
  copy.set_flat_parameters(j.get<std::vector<double>>());
  Mlp::Gradients g;
  for (const auto& layer : copy.layers()) {
    g.weight.push_back(layer.weight);
    g.bias.push_back(layer.bias);
  }
  return g;
}

const char* termination_text(const std::optional<Termination>& t) {
  return t ? to_string(*t).data() : "";
}

}  // namespace

void write_dictionary_json(std::ostream& out, const PathletGraph& graph,
                           const EnvConfig& config) {
  const RoadNetwork& net = graph.network();
  json pathlets = json::array();
  for (PathletId id : graph.live_pathlets()) {
    const Pathlet& p = graph.pathlet(id);
    json edges = json::array();
    for (EdgeId e : p.edges) edges.push_back(net.segment(e).name);
    json travellers = json::array();
    for (TrajIndex t : p.traversal) travellers.push_back(graph.trajectories()[t].id);
    pathlets.push_back({{"pathlet_id", p.id},
                        {"edge_seq", edges},
                        {"start_node", net.node_name(p.start())},
                        {"end_node", net.node_name(p.end())},
                        {"length", p.length()},
                        {"traversal_traj_ids", travellers},
                        {"weight", config.variant == Variant::kUnweighted
                                       ? 1.0
                                       : graph.weight(id)}});
  }
  const DictionaryReport r = report(graph, config);
  json summary{{"S1", r.size},
               {"phi", r.phi},
               {"L_traj", r.loss},
               {"mu_bar", r.mu_bar_applicable ? json(r.mu_bar) : json()},
               {"config", json::parse(to_json(config))}};
  out << json{{"pathlets", pathlets}, {"summary", summary}}.dump(2) << '\n';
}

LoadedDictionary read_dictionary_json(std::istream& in, const RoadNetwork& net) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("dictionary: ") + e.what());
  }
  LoadedDictionary d;
  try {
    for (const auto& p : doc.at("pathlets")) {
      std::vector<EdgeId> edges;
      for (const auto& name : p.at("edge_seq")) {
        auto e = net.find_segment(name.get<std::string>());
        if (!e) {
          throw Error(ErrorCode::kValidation,
                      "dictionary references unknown segment " +
                          name.get<std::string>());
        }
        edges.push_back(*e);
      }
      d.pathlets.push_back(std::move(edges));
    }
    const json& s = doc.at("summary");
    d.size = s.at("S1").get<double>();
    d.phi = s.at("phi").get<double>();
    d.loss = s.at("L_traj").get<double>();
    d.mu_bar = s.at("mu_bar").is_null() ? 1.0 : s.at("mu_bar").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("dictionary: ") + e.what());
  }
  return d;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "step,action,valid,S1,S2,S3,S4,reward,termination_reason\n";
  out << std::setprecision(17);
  for (const auto& row : trace) {
    out << row.step << ',' << row.action << ',' << (row.valid ? 1 : 0) << ','
        << row.state.size << ',' << row.state.phi << ',' << row.state.loss
        << ',' << row.state.mu_bar << ',' << row.reward << ','
        << termination_text(row.termination) << '\n';
  }
}

void write_returns_csv(std::ostream& out,
                       const std::vector<IterationReturns>& returns) {
  out << "iteration,mean_return,min_return,max_return\n";
  out << std::setprecision(17);
  for (const auto& r : returns) {
    out << r.iteration << ',' << r.mean << ',' << r.min << ',' << r.max << '\n';
  }
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows,
                      const std::string& value_column) {
  out << "label," << value_column << ",size,phi,L_traj,mu_bar\n";
  out << std::setprecision(17);
  for (const auto& row : rows) {
    out << row.label << ',' << row.value << ',' << row.report.size << ','
        << row.report.phi << ',' << row.report.loss << ',';
    if (row.report.mu_bar_applicable) out << row.report.mu_bar;
    out << '\n';
  }
}

void write_histograms_json(std::ostream& out,
                           const std::vector<ReportRow>& rows) {
  json doc = json::array();
  for (const auto& row : rows) {
    json hist = json::object();
    for (const auto& [len, count] : row.report.length_histogram) {
      hist[std::to_string(len)] = count;
    }
    doc.push_back({{"label", row.label}, {"value", row.value}, {"histogram", hist}});
  }
  out << doc.dump(2) << '\n';
}

void write_curve_csv(std::ostream& out, const ReconstructionCurve& curve) {
  out << "x,fraction\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < curve.sample_fractions.size(); ++i) {
    out << curve.sample_fractions[i] << ',' << curve.reconstructable_fraction[i]
        << '\n';
  }
}

void save_checkpoint(std::ostream& out, const DqnAgent& agent) {
  json doc{{"layer_sizes", agent.online().sizes()},
           {"dropout", agent.online().dropout_rate()},
           {"online", agent.online().flat_parameters()},
           {"target", agent.target().flat_parameters()},
           {"adam",
            {{"step", agent.optimizer().steps()},
             {"m", moments_json(agent.optimizer().first_moment())},
             {"v", moments_json(agent.optimizer().second_moment())}}},
           {"gradient_steps", agent.gradient_steps()}};
  out << doc.dump() << '\n';
}

void load_checkpoint(std::istream& in, DqnAgent& agent) {
  json doc;
  try {
    doc = json::parse(in);
    if (doc.at("layer_sizes").get<std::vector<int>>() != agent.online().sizes()) {
      throw Error(ErrorCode::kValidation,
                  "checkpoint layer sizes do not match the agent");
    }
    agent.online().set_flat_parameters(doc.at("online").get<std::vector<double>>());
    agent.target().set_flat_parameters(doc.at("target").get<std::vector<double>>());
    const json& adam = doc.at("adam");
    agent.optimizer().restore(moments_from(adam.at("m"), agent.online()),
                              moments_from(adam.at("v"), agent.online()),
                              adam.at("step").get<long long>());
    agent.set_gradient_steps(doc.at("gradient_steps").get<long long>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("checkpoint: ") + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename into " + path.string());
}

}  // namespace pathlet
