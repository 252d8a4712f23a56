#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "orchmach/analysis.hpp"
#include "orchmach/breed.hpp"
#include "orchmach/codec.hpp"
#include "orchmach/engine.hpp"
#include "orchmach/enumerate.hpp"
#include "orchmach/errors.hpp"
#include "orchmach/harness.hpp"
#include "orchmach/ndtm.hpp"
#include "orchmach/rule_text.hpp"

namespace orchmach::io {

using json = nlohmann::json;

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ParseError("cannot write " + p.string());
  out << text;
}

inline json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

// Breed file:
//   {"name": "...", "machines": [{"name": "C", "code": [2, 0, 6, 2, 14]}, ...]}
// A machine that reads or writes blank uses "rules": ["0,_ -> 2,_,L", ...]
// instead of "code".
inline TuringMachine machine_from_json(const json& j) {
  try {
    const std::string name = j.at("name").get<std::string>();
    if (j.contains("code")) {
      if (j.contains("rules")) throw ParseError(name + ": give either code or rules, not both");
      return decode_rule_index(j.at("code").get<RuleIndexCode>(), name);
    }
    if (j.contains("rules")) {
      std::string text;
      for (const auto& line : j.at("rules")) text += line.get<std::string>() + "\n";
      return machine_from_rule_lines(name, parse_rule_lines(text));
    }
    throw ParseError(name + ": machine needs code or rules");
  } catch (const json::exception& e) {
    throw ParseError(std::string("machine entry: ") + e.what());
  }
}

inline json machine_to_json(const TuringMachine& m) {
  json j{{"name", m.name()}};
  if (m.is_binary()) {
    j["code"] = encode_rule_index(m);
  } else {
    j["rules"] = format_rule_lines(m);
  }
  return j;
}

inline Breed breed_from_json(const json& j) {
  try {
    std::vector<TuringMachine> members;
    for (const auto& m : j.at("machines")) members.push_back(machine_from_json(m));
    if (members.empty()) throw ParseError("breed file lists no machines");
    return Breed(j.value("name", std::string("breed")), std::move(members));
  } catch (const json::exception& e) {
    throw ParseError(std::string("breed file: ") + e.what());
  }
}

inline json breed_to_json(const Breed& b) {
  json machines = json::array();
  for (const TuringMachine& m : b.members()) machines.push_back(machine_to_json(m));
  return json{{"name", b.name()}, {"machines", machines}};
}

inline Breed load_breed(const std::filesystem::path& p) {
  return breed_from_json(parse_json(read_file(p), p.string()));
}

inline void save_breed(const std::filesystem::path& p, const Breed& b) { write_file(p, breed_to_json(b).dump(2) + "\n"); }

inline Ndtm load_ndtm(const std::filesystem::path& p) { return parse_ndtm(read_file(p), p.stem().string()); }

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::halted: return "halted";
    case Termination::cap_reached: return "cap_reached";
    case Termination::script_exhausted: return "script_exhausted";
  }
  return "?";
}

inline json policy_to_json(const SelectionPolicy& p, const Breed& breed) {
  switch (p.kind()) {
    case SelectionPolicy::Kind::seeded_random: return json{{"kind", "seeded_random"}, {"seed", p.seed()}};
    case SelectionPolicy::Kind::follow:
      return json{{"kind", "follow"}, {"member", breed[p.followed()].name()}, {"seed", p.seed()}};
    case SelectionPolicy::Kind::scripted:
    case SelectionPolicy::Kind::replay: {
      json names = json::array();
      for (std::uint32_t i : p.script()) names.push_back(breed[i].name());
      return json{{"kind", p.kind() == SelectionPolicy::Kind::scripted ? "scripted" : "replay"}, {"script", names}};
    }
    case SelectionPolicy::Kind::choice_path: return json{{"kind", "choice_path"}, {"script", p.script()}};
  }
  return json::object();
}

// One JSONL trace record. N is null unless the run halted.
inline json trace_record(const Breed& breed, const SelectionPolicy& policy, const RunTrace& t) {
  json counts = json::object();
  for (std::size_t i = 0; i < breed.size(); ++i) counts[breed[i].name()] = t.selected_counts.at(i);
  return json{{"breed", breed.name()},
              {"policy", policy_to_json(policy, breed)},
              {"N", t.halted() ? json(t.iterations) : json(nullptr)},
              {"iterations", t.iterations},
              {"halted", t.halted()},
              {"termination", to_string(t.termination)},
              {"o2", t.o2()},
              {"o_mean", t.o_mean()},
              {"o_mean_floor", t.o_mean_floor()},
              {"ones", t.ones},
              {"tape_word", t.tape_word},
              {"selections_total", t.selection_count},
              {"per_member_selected_counts", counts}};
}

// Full selection log: step,member,from_index,to_index,rule. The index columns
// are empty for rules that involve blank.
inline std::string selection_csv(const std::vector<LoggedSelection>& log) {
  std::string out = "step,member,from_index,to_index,rule\n";
  for (std::size_t k = 0; k < log.size(); ++k) {
    const Rule& r = log[k].rule;
    const bool binary = r.from.read != Symbol::blank && r.to.write != Symbol::blank;
    out += std::to_string(k) + "," + log[k].member + "," +
           (binary ? std::to_string(encode_from_index(r.from)) + "," + std::to_string(encode_to_index(r.to))
                   : std::string(",")) +
           ",\"" + to_string(r) + "\"\n";
  }
  return out;
}

inline std::vector<LoggedSelection> parse_selection_csv(std::string_view text) {
  std::vector<LoggedSelection> out;
  std::size_t start = 0;
  bool header = true;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.starts_with("step")) continue;
    }
    const auto q1 = line.find('"');
    const auto q2 = line.rfind('"');
    if (q1 == std::string_view::npos || q2 == q1) throw ParseError("selection row without quoted rule: " + std::string(line));
    const auto fields = detail::split(line.substr(0, q1), ',');
    if (fields.size() < 3) throw ParseError("selection row too short: " + std::string(line));
    const RuleLine rl = parse_rule_line(line.substr(q1 + 1, q2 - q1 - 1));
    if (rl.to.size() != 1) throw ParseError("selection row with several right sides: " + std::string(line));
    out.push_back(LoggedSelection{std::string(fields[1]), Rule{rl.from, rl.to.front()}});
  }
  return out;
}

inline json bounds_to_json(const EnumerationBounds& b) {
  return json{{"depth_cap", b.depth_cap},
              {"node_cap", b.node_cap},
              {"word_length_cap", b.word_length_cap},
              {"cycle_depth", b.cycle_depth}};
}

inline json computation_to_json(const Breed& breed, const Computation& c) {
  json path = json::array();
  for (std::uint32_t m : c.path) path.push_back(breed[m].name());
  return json{{"N", c.N},        {"o2", c.o2},   {"o_mean_floor", c.o_mean_floor()}, {"tape_word", c.tape_word},
              {"ones", c.ones},  {"path", path}, {"multiplicity", c.multiplicity}};
}

inline json witness_to_json(const Breed& breed, const DivergenceWitness& w) {
  json prefix = json::array();
  for (std::uint32_t m : w.prefix) prefix.push_back(breed[m].name());
  json j{{"kind", w.kind == DivergenceWitness::Kind::cycle ? "cycle" : "runaway"}, {"depth", w.depth}, {"prefix", prefix}};
  if (w.kind == DivergenceWitness::Kind::cycle) {
    j["cycle_start"] = w.cycle_start;
  } else {
    j["repeat_member"] = breed[w.member].name();
  }
  return j;
}

inline json verdict_report(const Breed& breed, const EnumerationBounds& bounds, const Enumeration& e,
                           const IqEqReport& iq) {
  json witnesses = json::array();
  for (const auto& w : e.witnesses) witnesses.push_back(witness_to_json(breed, w));
  return json{{"breed", breed.name()},
              {"verdict", to_string(e.verdict)},
              {"bounds", bounds_to_json(bounds)},
              {"witnesses", witnesses},
              {"computations", e.computations.size()},
              {"paths", e.path_count()},
              {"nodes", e.nodes},
              {"frontier", e.frontier},
              {"node_cap_hit", e.node_cap_hit},
              {"halting", iq.found},
              {"iq_lower", iq.iq_lower},
              {"eq_lower", iq.eq_lower},
              {"mean_max", iq.mean_max},
              {"exact", iq.exact}};
}

inline json purebred_to_json(const PurebredVerdict& v) {
  json j{{"verdict", to_string(v.kind)}, {"detail", v.detail}};
  if (v.witness_mask) j["witness"] = v.witness_members;
  return j;
}

inline json episode_to_json(const EpisodeResult& e) {
  return json{{"breed", e.breed},
              {"seed", e.seed},
              {"policy", e.policy},
              {"halted", e.halted},
              {"N", e.halted ? json(e.N) : json(nullptr)},
              {"iterations", e.N},
              {"selections", e.selections},
              {"ones", e.ones},
              {"o2", e.o2},
              {"o_mean_floor", e.o_mean_floor},
              {"selected_counts", e.selected_counts}};
}

inline EpisodeResult episode_from_json(const json& j) {
  try {
    EpisodeResult e;
    e.breed = j.at("breed").get<std::string>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.policy = j.value("policy", std::string("random"));
    e.halted = j.at("halted").get<bool>();
    e.N = j.at("iterations").get<std::uint64_t>();
    e.selections = j.at("selections").get<std::uint64_t>();
    e.ones = j.at("ones").get<std::uint64_t>();
    e.o2 = j.at("o2").get<std::uint32_t>();
    e.o_mean_floor = j.at("o_mean_floor").get<std::uint64_t>();
    e.selected_counts = j.value("selected_counts", std::vector<std::uint64_t>{});
    return e;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("episode record: ") + ex.what());
  }
}

inline std::string episodes_jsonl(std::span<const EpisodeResult> episodes) {
  std::string out;
  for (const auto& e : episodes) out += episode_to_json(e).dump() + "\n";
  return out;
}

inline std::vector<EpisodeResult> parse_episodes_jsonl(std::string_view text) {
  std::vector<EpisodeResult> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    if (!line.empty()) out.push_back(episode_from_json(parse_json(line, "results line")));
  }
  return out;
}

inline json triplet_to_json(const std::optional<Triplet>& t) {
  if (!t) return nullptr;
  return json{{"o2", t->o2}, {"N", t->N}, {"ones", t->ones}, {"seed", t->seed}, {"policy", t->policy}};
}

inline json best_to_json(const BestTriplets& b) {
  return json{{"by_o2", triplet_to_json(b.by_o2)},
              {"by_N", triplet_to_json(b.by_N)},
              {"by_ones", triplet_to_json(b.by_ones)},
              {"empty", b.empty()}};
}

// Experiment config file. "breed" is a path relative to the config file or an
// inline breed object; "results", "table" and "plot" are optional output paths.
struct ExperimentFile {
  Breed breed;
  ExperimentConfig config;
  std::uint64_t standalone_cap = 100'000'000;
  std::filesystem::path results;
  std::filesystem::path table;
  std::filesystem::path plot;
};

inline ExperimentFile load_experiment(const std::filesystem::path& p) {
  const json j = parse_json(read_file(p), p.string());
  const auto dir = p.parent_path();
  auto rel = [&](const std::string& s) {
    const std::filesystem::path q(s);
    return q.is_absolute() ? q : dir / q;
  };
  try {
    ExperimentFile f;
    const json& b = j.at("breed");
    f.breed = b.is_string() ? load_breed(rel(b.get<std::string>())) : breed_from_json(b);
    f.config.episodes = j.value("episodes", f.config.episodes);
    f.config.cap = j.value("cap", f.config.cap);
    f.config.seed_base = j.value("seed_base", f.config.seed_base);
    f.config.jobs = j.value("jobs", f.config.jobs);
    f.config.long_run = j.value("long_run", f.config.long_run);
    f.config.baseline = j.value("baseline", f.config.baseline);
    f.standalone_cap = j.value("standalone_cap", f.standalone_cap);
    if (j.contains("results")) f.results = rel(j.at("results").get<std::string>());
    if (j.contains("table")) f.table = rel(j.at("table").get<std::string>());
    if (j.contains("plot")) f.plot = rel(j.at("plot").get<std::string>());
    return f;
  } catch (const json::exception& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
}

}  // namespace orchmach::io
