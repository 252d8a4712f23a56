#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orchmach/catalog.hpp"
#include "orchmach/io.hpp"
#include "orchmach/orchmach.hpp"

namespace fs = std::filesystem;
using namespace orchmach;
using io::json;

namespace {

// Exit codes: 0 ok, 1 usage or input error, 2 policy or replay mismatch.
constexpr int kInputError = 1;
constexpr int kPolicyError = 2;

// "catalog:cd" names a built-in breed; anything else is a breed file.
Breed resolve_breed(const std::string& ref) {
  constexpr std::string_view prefix = "catalog:";
  if (ref.starts_with(prefix)) {
    const std::string key = ref.substr(prefix.size());
    for (auto& e : catalog::entries())
      if (e.name == key) return e.breed;
    throw ParseError("no catalog breed named '" + key + "'");
  }
  return io::load_breed(ref);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// A script is either a file of member names or an inline list like "x,x,y,y".
std::vector<std::uint32_t> resolve_script(const Breed& breed, const std::string& arg) {
  const std::string text = fs::is_regular_file(arg) ? io::read_file(arg) : arg;
  std::vector<std::uint32_t> out;
  for (const std::string& name : split_list(text)) {
    const auto idx = breed.find(name);
    if (!idx) throw ParseError("script names '" + name + "', which is not a member of " + breed.name());
    out.push_back(*idx);
  }
  return out;
}

unsigned jobs_from_env(unsigned jobs) {
  if (const char* env = std::getenv("ORCHMACH_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring ORCHMACH_JOBS=" << env << "\n";
  }
  return jobs;
}

std::ostream& out_stream(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw ParseError("cannot write " + path);
  return file;
}

std::string shown_word(const TapeWord& w) { return w.empty() ? "(empty)" : w; }

struct EnumArgs {
  std::uint64_t depth_cap = 64;
  std::uint64_t node_cap = 1'000'000;
  std::uint64_t word_length_cap = 4;
  std::uint64_t cycle_depth = 4096;

  void add(CLI::App* cmd) {
    cmd->add_option("--depth-cap", depth_cap, "selections per computation")->capture_default_str();
    cmd->add_option("--node-cap", node_cap, "rounds explored in total")->capture_default_str();
    cmd->add_option("--word-length-cap", word_length_cap, "longest word probed for languages")->capture_default_str();
    cmd->add_option("--cycle-depth", cycle_depth, "deepest round checked for repeats")->capture_default_str();
  }
  EnumerationBounds bounds() const { return EnumerationBounds{depth_cap, node_cap, word_length_cap, cycle_depth}; }
};

// run-tm ------------------------------------------------------------------

struct RunTmArgs {
  std::string code;
  std::string file;
  std::uint64_t cap = 100'000'000;
  bool cycles = false;
  bool as_json = false;
};

int run_tm(const RunTmArgs& a) {
  const std::string text = a.file.empty() ? a.code : io::read_file(a.file);
  const TuringMachine m = decode_rule_index(parse_rule_index(text), a.file.empty() ? "tm" : fs::path(a.file).stem().string());
  const RunResult r = tm_run(m, TmRunOptions{a.cap, a.cycles});
  const char* status = r.status == RunStatus::halted ? "halted" : r.status == RunStatus::cycle ? "cycle" : "cap_reached";
  if (a.as_json) {
    std::cout << json{{"machine", format_rule_index(encode_rule_index(m))},
                      {"halted", r.halted()},
                      {"status", status},
                      {"steps", r.steps},
                      {"ones", r.ones},
                      {"tape_word", r.tape_word}}
                     .dump()
              << "\n";
    return 0;
  }
  std::cout << "status " << status << "\nsteps " << r.steps << "\nones " << r.ones << "\n";
  if (r.tape_word.size() <= 80) {
    std::cout << "tape_word " << shown_word(r.tape_word) << "\n";
  } else {
    std::cout << "tape_word_length " << r.tape_word.size() << "\n";
  }
  return 0;
}

// run-breed -----------------------------------------------------------------

struct RunBreedArgs {
  std::string breed;
  std::string engine = "om1";
  std::string word;
  std::string words;  // om3: one word per member
  std::optional<std::uint64_t> seed;
  std::string script;
  std::uint64_t cap = 1'000'000;
  std::string ret = "N";
  bool blank_background = false;
  std::string log;
  std::string dump;
  bool as_json = false;
};

void print_projection(const Breed& breed, const RunTrace& t, const std::string& mode) {
  if (mode == "N") {
    if (t.halted()) {
      std::cout << t.iterations << "\n";
    } else {
      std::cout << "inf (" << io::to_string(t.termination) << " after " << t.selection_count << " selections)\n";
    }
  } else if (mode == "T") {
    std::cout << shown_word(t.tape_word) << "\n";
  } else if (mode == "O") {
    for (const Selection& s : t.selections) std::cout << breed[s.member].name() << " " << to_string(s.rule) << "\n";
  } else {
    std::string line;
    if (t.alive_counts.size() <= 10'000) {
      for (std::uint32_t v : t.alive_counts.expand()) line += (line.empty() ? "" : " ") + std::to_string(v);
    } else {
      for (const auto& [v, n] : t.alive_counts.runs())
        line += (line.empty() ? "" : " ") + std::to_string(v) + "x" + std::to_string(n);
    }
    std::cout << line << "\n";
  }
}

int run_breed(const RunBreedArgs& a) {
  const Breed breed = resolve_breed(a.breed);
  SelectionPolicy policy = a.script.empty() ? SelectionPolicy::seeded_random(a.seed.value_or(1))
                                            : SelectionPolicy::scripted(resolve_script(breed, a.script));
  RunOptions opt;
  opt.cap = a.cap;
  opt.record_selections = a.ret == "O" || !a.dump.empty();
  RunTrace t;
  if (a.engine == "om1") {
    t = om1_run(breed, policy, opt);
  } else if (a.engine == "om2") {
    t = om2_run(breed, parse_word(a.word), policy, opt, a.blank_background);
  } else {
    std::vector<std::vector<Symbol>> inputs;
    const auto list = split_list(a.words);
    for (const auto& w : list) inputs.push_back(parse_word(w == "-" ? "" : w));
    if (list.empty()) inputs.assign(breed.size(), {});
    t = om3_run(breed, inputs, policy, opt, a.blank_background);
  }
  const json record = io::trace_record(breed, policy, t);
  if (a.log.empty()) {
    std::cerr << record.dump() << "\n";
  } else {
    std::ofstream log(a.log, std::ios::app);
    if (!log) throw ParseError("cannot write " + a.log);
    log << record.dump() << "\n";
  }
  if (!a.dump.empty()) io::write_file(a.dump, io::selection_csv(selection_log(breed, t)));
  if (a.as_json) {
    std::cout << record.dump() << "\n";
  } else {
    print_projection(breed, t, a.ret);
  }
  return 0;
}

// enumerate / analyze ----------------------------------------------------------

struct EnumerateArgs {
  std::string breed;
  std::string word;
  bool om2 = false;
  bool blank_background = false;
  bool no_prune = false;
  bool list = false;
  bool as_json = false;
  EnumArgs b;
};

int enumerate_cmd(const EnumerateArgs& a) {
  const Breed breed = resolve_breed(a.breed);
  EngineSpec spec;
  if (a.om2) spec.word = parse_word(a.word);
  spec.blank_background = a.blank_background;
  spec.prune_cycles = !a.no_prune;
  const EnumerationBounds bounds = a.b.bounds();
  const Enumeration e = enumerate_computations(breed, bounds, spec);
  IqEqReport iq;
  iq.bounds = bounds;
  for (const Computation& c : e.computations) detail::absorb(iq, c);
  iq.exact = e.verdict == Verdict::certified_convergent;
  if (a.as_json) {
    json j = io::verdict_report(breed, bounds, e, iq);
    if (a.list) {
      j["computation_list"] = json::array();
      for (const auto& c : e.computations) j["computation_list"].push_back(io::computation_to_json(breed, c));
    }
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << "verdict " << to_string(e.verdict) << "\ncomputations " << e.computations.size() << "\npaths "
            << e.path_count() << "\nnodes " << e.nodes << "\nfrontier " << e.frontier << "\nwitnesses "
            << e.witnesses.size() << "\n";
  if (a.list) {
    for (const Computation& c : e.computations) {
      std::cout << "N=" << c.N << " o2=" << c.o2 << " eq=" << c.o_mean_floor() << " T=" << shown_word(c.tape_word)
                << " x" << c.multiplicity << " path=";
      for (std::size_t i = 0; i < c.path.size(); ++i) std::cout << (i ? "," : "") << breed[c.path[i]].name();
      std::cout << "\n";
    }
  }
  return 0;
}

struct AnalyzeArgs {
  std::string breed;
  bool purebred = false;
  bool om2 = false;
  std::string word;
  std::string words;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  bool blank_background = false;
  bool as_json = false;
  EnumArgs b;
};

int analyze(const AnalyzeArgs& a) {
  const Breed breed = resolve_breed(a.breed);
  const EnumerationBounds bounds = a.b.bounds();
  EngineSpec spec;
  if (a.om2 && !a.word.empty()) spec.word = parse_word(a.word);
  spec.blank_background = a.blank_background;
  const Enumeration e = enumerate_computations(breed, bounds, spec);
  const IqEqReport iq = breed_iq_eq(breed, bounds, spec, a.samples, a.seed);
  json report = io::verdict_report(breed, bounds, e, iq);
  std::optional<PurebredVerdict> pv;
  if (a.purebred) {
    if (a.om2) {
      std::vector<TapeWord> domain;
      for (const auto& w : split_list(a.words)) domain.push_back(w == "-" ? "" : w);
      pv = purebred_check_om2(breed, bounds, domain.empty() ? nullptr : &domain, a.blank_background);
    } else {
      pv = purebred_check_om1(breed, bounds);
    }
    report["purebred"] = io::purebred_to_json(*pv);
  }
  if (a.as_json) {
    std::cout << report.dump() << "\n";
    return 0;
  }
  std::cout << "breed " << breed.name() << "\nverdict " << to_string(e.verdict) << "\n";
  if (iq.found) {
    std::cout << (iq.exact ? "iq " : "iq >= ") << iq.iq_lower << "\n"
              << (iq.exact ? "eq " : "eq >= ") << iq.eq_lower << "\n";
  } else {
    std::cout << "no halting computation within bounds\n";
  }
  if (pv) {
    std::cout << to_string(pv->kind);
    if (pv->witness_mask) {
      std::cout << " witness {";
      for (std::size_t i = 0; i < pv->witness_members.size(); ++i) std::cout << (i ? "," : "") << pv->witness_members[i];
      std::cout << "}";
    }
    std::cout << "\n";
  }
  return 0;
}

// decompose / verify -----------------------------------------------------------

int decompose(const std::string& ndtm, const std::string& out) {
  const Breed b = decompose_to_breed(io::load_ndtm(ndtm));
  std::ofstream file;
  out_stream(out, file) << io::breed_to_json(b).dump(2) << "\n";
  std::cerr << b.size() << " machines\n";
  return 0;
}

struct VerifyArgs {
  std::string ndtm;
  std::string breed;
  std::uint64_t cap = 10;
  std::uint64_t node_cap = 2'000'000;
  std::string word;
  bool as_json = false;
};

int verify(const VerifyArgs& a) {
  const Ndtm m = io::load_ndtm(a.ndtm);
  const Breed breed = resolve_breed(a.breed);
  std::optional<std::vector<Symbol>> word;
  if (!a.word.empty()) word = parse_word(a.word);
  const EquivalenceVerdict v = verify_equivalence_bounded(m, breed, a.cap, a.node_cap, word);
  if (a.as_json) {
    json j{{"verdict", to_string(v.kind)}, {"detail", v.detail}, {"depth_cap", a.cap}};
    if (v.differing) j["differing"] = json{{"steps", v.differing->steps}, {"word", v.differing->word}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << to_string(v.kind) << "\n" << v.detail << "\n";
  }
  return 0;
}

// search / iq-plot / replay ----------------------------------------------------

struct SearchArgs {
  std::string config;
  std::string breed;
  std::uint64_t episodes = 100;
  std::uint64_t cap = 1'000'000;
  std::uint64_t seed_base = 1;
  unsigned jobs = 0;
  bool long_run = false;
  bool baseline = false;
  std::string results;
  std::string table;
  std::string plot;
  bool as_json = false;
};

int search(SearchArgs a) {
  io::ExperimentFile f;
  if (!a.config.empty()) {
    f = io::load_experiment(a.config);
  } else {
    if (a.breed.empty()) throw ParseError("search needs --config or --breed");
    f.breed = resolve_breed(a.breed);
    f.config = ExperimentConfig{a.episodes, a.cap, a.seed_base, a.jobs, a.long_run, a.baseline};
  }
  if (a.jobs != 0) f.config.jobs = a.jobs;
  if (a.long_run) f.config.long_run = true;
  f.config.jobs = jobs_from_env(f.config.jobs);
  if (!a.results.empty()) f.results = a.results;
  if (!a.table.empty()) f.table = a.table;
  if (!a.plot.empty()) f.plot = a.plot;

  const ExperimentResult r = run_experiment(f.breed, f.config, [](const std::string& m) { std::cerr << m << "\n"; });
  const TableRow row = make_table_row(f.breed, r.best, f.standalone_cap);
  if (!f.results.empty()) io::write_file(f.results, io::episodes_jsonl(r.episodes));
  if (!f.table.empty()) io::write_file(f.table, table_csv(std::span(&row, 1)));
  if (!f.plot.empty()) io::write_file(f.plot, iqplot_csv(iqplot_rows(r.episodes)));
  if (a.as_json) {
    std::cout << json{{"breed", f.breed.name()},
                      {"episodes", r.episodes.size()},
                      {"halted", r.halted},
                      {"best", io::best_to_json(r.best)},
                      {"best_member", row.best_member},
                      {"ones", row.best_ones},
                      {"c_t", row.best_steps}}
                     .dump()
              << "\n";
  } else {
    std::cout << table_text(std::span(&row, 1));
    if (r.best.empty()) std::cout << "no halted episodes\n";
  }
  return 0;
}

int iq_plot(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<EpisodeResult> all;
  for (const auto& p : inputs) {
    auto part = io::parse_episodes_jsonl(io::read_file(p));
    all.insert(all.end(), part.begin(), part.end());
  }
  std::ofstream file;
  out_stream(out, file) << iqplot_csv(iqplot_rows(all));
  return 0;
}

struct ReplayArgs {
  std::string breed;
  std::string log;
  std::string word;
  bool om2 = false;
  bool blank_background = false;
  std::string ret = "N";
};

int replay_cmd(const ReplayArgs& a) {
  const Breed breed = resolve_breed(a.breed);
  const auto log = io::parse_selection_csv(io::read_file(a.log));
  ReplayInput in;
  if (a.om2) in.word = parse_word(a.word);
  in.blank_background = a.blank_background;
  const RunTrace t = replay(breed, log, in);
  print_projection(breed, t, a.ret);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orchestrated Turing machine simulator and analysis tools"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  RunTmArgs tm;
  auto* c_tm = app.add_subcommand("run-tm", "run one machine given in rule-index notation");
  auto* code_opt = c_tm->add_option("--code", tm.code, "rule-index code, e.g. \"1,0,4\"");
  c_tm->add_option("--file", tm.file, "file holding a rule-index code")->excludes(code_opt)->check(CLI::ExistingFile);
  c_tm->add_option("--cap", tm.cap, "maximum number of transitions")->capture_default_str();
  c_tm->add_flag("--cycles", tm.cycles, "stop when a configuration repeats");
  c_tm->add_flag("--json", tm.as_json);

  RunBreedArgs rb;
  auto* c_rb = app.add_subcommand("run-breed", "run a breed once");
  c_rb->add_option("--breed", rb.breed, "breed file or catalog:<name>")->required();
  c_rb->add_option("--engine", rb.engine)->check(CLI::IsMember({"om1", "om2", "om3"}))->capture_default_str();
  c_rb->add_option("--word", rb.word, "input word for om2");
  c_rb->add_option("--words", rb.words, "om3: one word per member, comma separated, '-' for empty");
  auto* seed_opt = c_rb->add_option("--seed", rb.seed, "random selection seed (default 1)");
  c_rb->add_option("--script", rb.script, "member names, inline (x,x,y,y) or a file")->excludes(seed_opt);
  c_rb->add_option("--cap", rb.cap, "maximum number of selections")->capture_default_str();
  c_rb->add_option("--return", rb.ret, "N, T, O or o")->check(CLI::IsMember({"N", "T", "O", "o"}))->capture_default_str();
  c_rb->add_flag("--blank-background", rb.blank_background, "empty input word on a blank tape");
  c_rb->add_option("--log", rb.log, "append the JSONL trace record here (default stderr)");
  c_rb->add_option("--dump", rb.dump, "write the selection log as CSV");
  c_rb->add_flag("--json", rb.as_json, "print the trace record instead of a projection");

  EnumerateArgs en;
  auto* c_en = app.add_subcommand("enumerate", "explore every computation of a breed within bounds");
  c_en->add_option("--breed", en.breed)->required();
  c_en->add_option("--word", en.word, "om2 input word")->each([&](const std::string&) { en.om2 = true; });
  c_en->add_flag("--blank-background", en.blank_background);
  c_en->add_flag("--no-prune", en.no_prune, "keep expanding repeated configurations");
  c_en->add_flag("--list", en.list, "print every halting computation");
  c_en->add_flag("--json", en.as_json);
  en.b.add(c_en);

  AnalyzeArgs an;
  auto* c_an = app.add_subcommand("analyze", "convergence verdict, iq/eq and purebred check");
  c_an->add_option("--breed", an.breed)->required();
  c_an->add_flag("--purebred", an.purebred);
  c_an->add_flag("--om2", an.om2, "purebred check on recognized languages");
  c_an->add_option("--word", an.word, "om2 input word for iq/eq");
  c_an->add_option("--words", an.words, "om2 purebred word list, comma separated (default: all words up to the cap)");
  c_an->add_option("--samples", an.samples, "random runs added when enumeration is cut short");
  c_an->add_option("--seed", an.seed)->capture_default_str();
  c_an->add_flag("--blank-background", an.blank_background);
  c_an->add_flag("--json", an.as_json);
  an.b.add(c_an);

  std::string dc_ndtm, dc_out;
  auto* c_dc = app.add_subcommand("decompose", "turn an NDTM into a breed of deterministic machines");
  c_dc->add_option("--ndtm", dc_ndtm)->required()->check(CLI::ExistingFile);
  c_dc->add_option("-o,--out", dc_out, "breed file to write (default stdout)");

  VerifyArgs vf;
  auto* c_vf = app.add_subcommand("verify", "compare halting outcomes of an NDTM and a breed");
  c_vf->add_option("--ndtm", vf.ndtm)->required()->check(CLI::ExistingFile);
  c_vf->add_option("--breed", vf.breed)->required();
  c_vf->add_option("--cap", vf.cap, "depth cap")->capture_default_str();
  c_vf->add_option("--node-cap", vf.node_cap)->capture_default_str();
  c_vf->add_option("--word", vf.word);
  c_vf->add_flag("--json", vf.as_json);

  SearchArgs se;
  auto* c_se = app.add_subcommand("search", "seeded random episodes and best triplets");
  c_se->add_option("--config", se.config, "experiment config file")->check(CLI::ExistingFile);
  c_se->add_option("--breed", se.breed);
  c_se->add_option("--episodes", se.episodes)->capture_default_str();
  c_se->add_option("--cap", se.cap)->capture_default_str();
  c_se->add_option("--seed-base", se.seed_base)->capture_default_str();
  c_se->add_option("--jobs", se.jobs, "worker threads (0: all cores; ORCHMACH_JOBS overrides)");
  c_se->add_flag("--long-run", se.long_run, "allow caps of 10^9 and more");
  c_se->add_flag("--baseline", se.baseline, "add one follow-member episode per member");
  c_se->add_option("--results", se.results, "episode JSONL output");
  c_se->add_option("--table", se.table, "table CSV output");
  c_se->add_option("--plot", se.plot, "o2,maxN CSV output");
  c_se->add_flag("--json", se.as_json);

  std::vector<std::string> ip_in;
  std::string ip_out;
  auto* c_ip = app.add_subcommand("iq-plot", "largest N per o2 from episode results");
  c_ip->add_option("--in", ip_in, "results JSONL files")->required()->check(CLI::ExistingFile);
  c_ip->add_option("-o,--out", ip_out);

  ReplayArgs rp;
  auto* c_rp = app.add_subcommand("replay", "re-execute a selection log");
  c_rp->add_option("--breed", rp.breed)->required();
  c_rp->add_option("--log", rp.log, "selection CSV written by run-breed --dump")->required()->check(CLI::ExistingFile);
  c_rp->add_option("--word", rp.word)->each([&](const std::string&) { rp.om2 = true; });
  c_rp->add_flag("--blank-background", rp.blank_background);
  c_rp->add_option("--return", rp.ret)->check(CLI::IsMember({"N", "T", "O", "o"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*c_tm) {
      if (tm.code.empty() && tm.file.empty()) throw ParseError("run-tm needs --code or --file");
      return run_tm(tm);
    }
    if (*c_rb) return run_breed(rb);
    if (*c_en) return enumerate_cmd(en);
    if (*c_an) return analyze(an);
    if (*c_dc) return decompose(dc_ndtm, dc_out);
    if (*c_vf) return verify(vf);
    if (*c_se) return search(se);
    if (*c_ip) return iq_plot(ip_in, ip_out);
    if (*c_rp) return replay_cmd(rp);
  } catch (const PolicyError& e) {
    std::cerr << "policy error: " << e.what() << "\n";
    return kPolicyError;
  } catch (const ReplayMismatch& e) {
    std::cerr << "replay mismatch: " << e.what() << "\n";
    return kPolicyError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return 0;
}
