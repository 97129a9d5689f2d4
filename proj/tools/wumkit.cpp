// wumkit command-line front end.
//
// Exit status: 0 success, 1 data error, 2 usage error. Logs go to stderr;
// data goes to files under --output-dir, or to stdout when none is given.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wumkit/bounce.hpp"
#include "wumkit/enrichment.hpp"
#include "wumkit/error.hpp"
#include "wumkit/graphs.hpp"
#include "wumkit/io.hpp"
#include "wumkit/report.hpp"
#include "wumkit/rules.hpp"
#include "wumkit/synth.hpp"
#include "wumkit/verify.hpp"

namespace fs = std::filesystem;
using namespace wumkit;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output_dir;
  std::string config;
  std::string registry;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::uint64_t sessions = 0;
  double min_support = 0.25;
  double min_confidence = 0.98;
  bool percentage_mode = false;
  std::string yates = "auto";
  std::string normalize = "source";
  std::string format = "csv";
  std::size_t top = 30;
  std::string order = "lift";
  std::vector<std::uint32_t> relogin_pages;
  std::vector<std::string> attributes;
  std::vector<std::string> attribute_items;
  bool calibrate = false;
  std::string tag;
  std::string from;
  std::string to;
  std::vector<std::string> only;
  std::vector<std::string> skip;
  unsigned threads = 0;
  bool quiet = false;
  const CLI::App* command = nullptr;  // the parsed subcommand

  bool given(const char* flag) const {
    const auto* opt = command ? command->get_option_no_throw(flag) : nullptr;
    return opt && opt->count() > 0;
  }
};

void log(const Options& o, const std::string& message) {
  if (!o.quiet) std::cerr << "wumkit: " << message << '\n';
}

const CLI::Validator kFraction(
    [](std::string& text) -> std::string {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(text, &used);
        if (used != text.size()) return "'" + text + "' is not a number";
      } catch (const std::exception&) {
        return "'" + text + "' is not a number";
      }
      if (!(v > 0.0 && v <= 1.0)) return "value must be in (0, 1], got " + text;
      return {};
    },
    "FRACTION in (0,1]");

ServiceRegistry load_registry(const Options& o) {
  if (o.registry.empty()) return ServiceRegistry::standard();
  std::ifstream in(o.registry);
  if (!in) throw IoError("cannot open registry file " + o.registry);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ServiceRegistry::parse(buffer.str());
}

std::ifstream open_input(const std::string& path) {
  if (path.empty()) throw UsageError("--input is required");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input " + path);
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

// Writes to <output-dir>/<name>, or to stdout without an output dir.
void emit(const Options& o, const std::string& name, const std::string& text) {
  if (o.output_dir.empty()) {
    std::cout << text;
    return;
  }
  const fs::path path = fs::path(o.output_dir) / name;
  auto out = open_output(path);
  out << text;
  log(o, "wrote " + path.string());
}

enum class InputKind { events, sessions, pageviews };

InputKind sniff(const std::string& path) {
  auto in = open_input(path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("log_id,session_id,timestamp", 0) == 0) return InputKind::events;
  if (header.rfind("Log_ID,Session_ID,Log_Date_Time", 0) == 0) return InputKind::sessions;
  if (header.rfind("Log_ID,Session_ID,Pageview_Date_Time", 0) == 0) return InputKind::pageviews;
  throw ParseError(1, 0, "unrecognized input header in " + path);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

// Settings from --config, if any; flags given on the command line win.
PipelineConfig pipeline_config(const Options& o) {
  const bool from_file = !o.config.empty();
  PipelineConfig c = from_file ? pipeline_config_from_json(read_json(o.config)) : PipelineConfig{};
  const auto use = [&](const char* flag) { return !from_file || o.given(flag); };
  c.input = o.input;
  c.output_dir = o.output_dir;
  if (!o.registry.empty()) c.registry_file = o.registry;
  c.threads = o.threads;
  if (use("--min-support")) c.min_support = o.min_support;
  if (use("--min-confidence")) c.min_confidence = o.min_confidence;
  if (use("--percentage-mode")) {
    c.chisq_mode = o.percentage_mode ? TableMode::row_percentages : TableMode::counts;
  }
  if (use("--seed")) c.seed = o.seed;
  if (use("--top")) c.top_rules = o.top;
  if (use("--relogin-page")) {
    c.relogin_pages.clear();
    c.relogin_pages.insert(o.relogin_pages.begin(), o.relogin_pages.end());
  }
  try {
    if (use("--yates")) c.yates = parse_yates_policy(o.yates);
    if (use("--normalize")) c.normalization = parse_normalization(o.normalize);
    if (use("--order")) c.rule_ordering = parse_rule_ordering(o.order);
    if (use("--attribute-item")) {
      c.transactions.attribute_items.clear();
      for (const auto& name : o.attribute_items) {
        c.transactions.attribute_items.push_back(parse_attribute(name));
      }
    }
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return c;
}

bool* toggle(AnalysisToggles& t, const std::string& name) {
  if (name == "bounce") return &t.bounce;
  if (name == "chisq") return &t.chisq;
  if (name == "exits") return &t.exits;
  if (name == "transitions") return &t.transitions;
  if (name == "rules") return &t.rules;
  return nullptr;
}

SessionTable load_events(const Options& o, const ServiceRegistry& registry) {
  auto in = open_input(o.input);
  auto events = read_events(in, registry);
  log(o, "read " + std::to_string(events.size()) + " events");
  return SessionTable(std::move(events));
}

// Pageview datasets keep only the logout flag; any logout counts as a
// secure exit, which is all the exit graph distinguishes.
SessionTable load_pageviews(const Options& o) {
  auto in = open_input(o.input);
  const auto pageviews = read_enriched_pageviews(in);
  std::vector<PageviewEvent> events;
  events.reserve(pageviews.size());
  for (const auto& p : pageviews) {
    PageviewEvent e;
    e.log_id = p.log_id;
    e.session_id = p.session_id;
    e.timestamp = p.timestamp;
    e.service_id = p.service_id;
    e.page_id = p.page_id;
    e.login_state = p.login_state;
    e.is_logout_event = p.is_logout_event;
    e.logout_kind = p.is_logout_event ? LogoutKind::secure_button : LogoutKind::none;
    e.user_id = p.user_id;
    events.push_back(e);
  }
  log(o, "read " + std::to_string(events.size()) + " pageviews");
  return SessionTable(std::move(events));
}

AnalysisResults run_analyses(const Options& o, const ServiceRegistry& registry,
                             const PipelineConfig& config) {
  switch (sniff(o.input)) {
    case InputKind::events:
      return analyze_table(load_events(o, registry), registry, config);
    case InputKind::sessions: {
      if (config.analyses.transitions) {
        throw Error("transitions need raw events or a pageview dataset, not a session dataset");
      }
      validate(config);
      auto in = open_input(o.input);
      EnrichedSessionReader reader(in, registry);
      SessionAnalyzer analyzer(registry, config);
      while (auto s = reader.next()) analyzer.add(*s);
      log(o, "read " + std::to_string(reader.count()) + " sessions");
      return analyzer.finish();
    }
    case InputKind::pageviews: {
      const auto& a = config.analyses;
      if (a.bounce || a.chisq || a.rules) {
        throw Error("a pageview dataset supports only the exit and transition graphs");
      }
      const auto table = load_pageviews(o);
      AnalysisResults r;
      if (a.exits) r.exits = build_exit_graph(table, registry, config.normalization, o.threads);
      if (a.transitions) {
        r.transitions = build_transition_graph(table, registry, config.normalization,
                                               config.relogin_pages, o.threads);
      }
      return r;
    }
  }
  return {};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string format_extension(GraphFormat f) {
  switch (f) {
    case GraphFormat::dot:
      return "dot";
    case GraphFormat::edge_list_csv:
      return "csv";
    case GraphFormat::json:
      return "json";
  }
  return "csv";
}

GraphFormat graph_format(const Options& o) {
  try {
    return parse_graph_format(o.format);
  } catch (const UnknownFormatError& e) {
    throw UsageError(e.what());
  }
}

std::string rules_csv(const std::vector<AssociationRule>& rules) {
  std::ostringstream out;
  write_rules_csv(rules, out);
  return out.str();
}

AnalysisToggles only(bool AnalysisToggles::*field) {
  AnalysisToggles t{false, false, false, false, false};
  t.*field = true;
  return t;
}

// --- subcommands -----------------------------------------------------------

int cmd_synth(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  GeneratorConfig config;
  bool calibrate_now = o.calibrate;
  if (o.config.empty()) {
    config = default_generator_config();
    calibrate_now = true;
  } else {
    config = generator_config_from_json(read_json(o.config));
  }
  if (!o.registry.empty()) config.registry = load_registry(o);
  if (o.sessions) config.session_count = o.sessions;
  if (o.seed_set) config.seed = o.seed;
  if (calibrate_now) config = calibrate(std::move(config));
  validate(config);

  ensure_dir(o.output_dir);
  const fs::path dir = o.output_dir.empty() ? fs::path(".") : fs::path(o.output_dir);
  auto out = open_output(dir / "events.csv");
  EventWriter writer(out);
  generate(config, [&](const PageviewEvent& e) { writer.write(e); }, o.threads);
  out.close();

  auto truth = open_output(dir / "ground_truth.json");
  truth << dump(to_json(describe_ground_truth(config), config.registry));
  auto echo = open_output(dir / "generator_config.json");
  echo << dump(to_json(config));

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log(o, "generated " + std::to_string(config.session_count) + " sessions, " +
             std::to_string(writer.count()) + " events in " + std::to_string(seconds) + " s");
  return 0;
}

int cmd_enrich(const Options& o) {
  const auto registry = load_registry(o);
  const auto table = load_events(o, registry);
  ensure_dir(o.output_dir);
  const fs::path dir = o.output_dir.empty() ? fs::path(".") : fs::path(o.output_dir);

  std::optional<TimeRange> range;
  if (!o.from.empty() || !o.to.empty()) {
    const auto from = parse_iso(o.from);
    const auto to = parse_iso(o.to);
    if (!from || !to) throw UsageError("--from and --to must both be YYYY-MM-DD[ HH:MM:SS]");
    // A bare end date covers that whole day.
    const auto end = o.to.size() == 10 ? *to + std::chrono::seconds(86399) : *to;
    if (end < *from) throw UsageError("--from is after --to");
    range = TimeRange{*from, end};
  }

  const fs::path sessions_path = dir / session_dataset_name(o.tag);
  const fs::path pageviews_path = dir / pageview_dataset_name(o.tag);
  auto sessions_out = open_output(sessions_path);
  auto pageviews_out = open_output(pageviews_path);
  EnrichedSessionWriter sessions(sessions_out, registry);
  EnrichedPageviewWriter pageviews(pageviews_out);
  std::vector<EnrichedPageview> buffer;
  std::optional<TimeRange> seen;

  const LoginCounts logins = compute_user_login_counts(table);
  enrich_streaming(
      table, registry, logins, AgeGroupBounds{},
      [&](const SessionGroup& g, const EnrichedSession& s) {
        if (range && !range->contains(s.log_date_time)) return;
        sessions.write(s);
        buffer.clear();
        append_enriched_pageviews(g, s, buffer);
        for (const auto& p : buffer) pageviews.write(p);
        if (!seen) seen = TimeRange{s.log_date_time, s.log_date_time};
        seen->start = std::min(seen->start, s.log_date_time);
        seen->end = std::max(seen->end, s.log_date_time);
      },
      o.threads);
  sessions_out.close();
  pageviews_out.close();

  const TimeRange manifest_range = range ? *range : seen.value_or(TimeRange{});
  nlohmann::json manifest = {
      {"sessions", to_json(describe_file(sessions_path, manifest_range))},
      {"pageviews", to_json(describe_file(pageviews_path, manifest_range))},
  };
  auto m = open_output(dir / (o.tag.empty() ? "manifest.json" : "manifest" + o.tag + ".json"));
  m << dump(manifest);
  log(o, "wrote " + std::to_string(sessions.count()) + " sessions and " +
             std::to_string(pageviews.count()) + " pageviews to " + dir.string());
  return 0;
}

int cmd_bounce(const Options& o) {
  const auto registry = load_registry(o);
  auto config = pipeline_config(o);
  config.analyses = only(&AnalysisToggles::bounce);
  const auto r = run_analyses(o, registry, config);
  ensure_dir(o.output_dir);
  emit(o, "bounce.json", dump(to_json(*r.bounce)));
  return 0;
}

int cmd_chisq(const Options& o) {
  const auto registry = load_registry(o);
  auto config = pipeline_config(o);
  config.analyses = only(&AnalysisToggles::chisq);
  const auto r = run_analyses(o, registry, config);
  std::vector<ChiSquareEntry> entries = *r.chisq;
  if (!o.attributes.empty()) {
    std::vector<ChiSquareEntry> picked;
    for (const auto& name : o.attributes) {
      const auto it = std::find_if(entries.begin(), entries.end(),
                                   [&](const auto& e) { return e.table.attribute == name; });
      if (it == entries.end()) {
        throw UsageError("unsupported attribute '" + name +
                         "'; choose Browser_Type, Referer_Type, User_Language_TR or "
                         "User_Location");
      }
      picked.push_back(*it);
    }
    entries = std::move(picked);
  }
  ensure_dir(o.output_dir);
  nlohmann::json doc = {{"mode", o.percentage_mode ? "row_percentages" : "counts"},
                        {"yates", o.yates},
                        {"tests", to_json(entries)}};
  emit(o, "chisq.json", dump(doc));
  return 0;
}

int cmd_graph(const Options& o, bool exits) {
  const auto registry = load_registry(o);
  auto config = pipeline_config(o);
  const auto format = graph_format(o);
  config.analyses = only(exits ? &AnalysisToggles::exits : &AnalysisToggles::transitions);
  const auto r = run_analyses(o, registry, config);
  const auto& graph = exits ? *r.exits : *r.transitions;
  const std::string name = exits ? "exits" : "transitions";
  ensure_dir(o.output_dir);
  emit(o, name + "." + format_extension(format), export_graph(graph, format, name));
  return 0;
}

int cmd_mine(const Options& o) {
  const auto registry = load_registry(o);
  auto config = pipeline_config(o);
  config.analyses = only(&AnalysisToggles::rules);
  const auto r = run_analyses(o, registry, config);
  log(o, std::to_string(r.rules->itemsets.size()) + " frequent itemsets, " +
             std::to_string(r.rules->rules.size()) + " rules over " +
             std::to_string(r.rules->transactions) + " transactions");
  ensure_dir(o.output_dir);
  if (o.format == "json") {
    emit(o, "rules.json", dump(to_json(*r.rules)));
  } else {
    emit(o, "rules.csv", rules_csv(r.rules->top));
  }
  return 0;
}

int cmd_report(const Options& o) {
  if (o.output_dir.empty()) throw UsageError("report needs --output-dir");
  const auto registry = load_registry(o);
  auto config = pipeline_config(o);
  const auto format = graph_format(o);
  if (!o.only.empty()) {
    config.analyses = AnalysisToggles{false, false, false, false, false};
    for (const auto& name : o.only) *toggle(config.analyses, name) = true;
  }
  for (const auto& name : o.skip) *toggle(config.analyses, name) = false;
  if (sniff(o.input) == InputKind::sessions) config.analyses.transitions = false;
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_analyses(o, registry, config);
  ensure_dir(o.output_dir);
  if (r.bounce) emit(o, "bounce.json", dump(to_json(*r.bounce)));
  if (r.chisq) emit(o, "chisq.json", dump(to_json(*r.chisq)));
  if (r.exits) {
    emit(o, "exits." + format_extension(format), export_graph(*r.exits, format, "exits"));
  }
  if (r.transitions) {
    emit(o, "transitions." + format_extension(format),
         export_graph(*r.transitions, format, "transitions"));
  }
  if (r.rules) emit(o, "rules.csv", rules_csv(r.rules->top));
  emit(o, "summary.json", dump(emit_summary(r, config)));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log(o, "report finished in " + std::to_string(seconds) + " s");
  return 0;
}

int cmd_verify(const Options& o) {
  const auto report = verify_reference_tables();
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.group << ": " << c.name << " - "
              << c.detail << '\n';
  }
  std::cout << report.checks.size() - report.failures() << "/" << report.checks.size()
            << " checks passed\n";
  if (!o.output_dir.empty()) {
    ensure_dir(o.output_dir);
    auto out = open_output(fs::path(o.output_dir) / "verify.json");
    out << dump(to_json(report));
  }
  return report.passed() ? 0 : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Web usage mining pipeline: enrichment, bounce, exit, transition and rule analyses",
               "wumkit"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  app.add_option("--registry", o.registry, "Service registry file (id,name lines)")
      ->check(CLI::ExistingFile);
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  app.add_flag("-q,--quiet", o.quiet, "Suppress progress messages on stderr");

  const auto add_input = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("-i,--input", o.input, "Input CSV (events, sessions or pageviews)")
                    ->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  const auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output-dir", o.output_dir, "Directory for output files");
  };
  const std::vector<std::string> yates = {"auto", "on", "off"};
  const std::vector<std::string> norms = {"source", "global"};
  const std::vector<std::string> formats = {"csv", "json", "dot"};
  const std::vector<std::string> orders = {"support", "confidence", "lift", "zhang"};

  auto* synth = app.add_subcommand("synth", "Generate a synthetic event log");
  synth->add_option("--config", o.config, "Generator config (JSON)")->check(CLI::ExistingFile);
  synth->add_option("--sessions", o.sessions, "Number of sessions")->check(CLI::PositiveNumber);
  synth->add_option("--seed", o.seed, "Random seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  synth->add_flag("--calibrate", o.calibrate, "Calibrate bounce and exit targets");
  add_output(synth);

  auto* enrich = app.add_subcommand("enrich", "Build enriched session and pageview datasets");
  add_input(enrich);
  add_output(enrich);
  enrich->add_option("--tag", o.tag, "Dataset name suffix, e.g. 5 for va_sess5.csv");
  enrich->add_option("--from", o.from, "Keep sessions starting at or after this time");
  enrich->add_option("--to", o.to, "Keep sessions starting at or before this time");

  auto* bounce = app.add_subcommand("bounce", "Single- versus multi-page shares");
  add_input(bounce);
  add_output(bounce);

  auto* chisq = app.add_subcommand("chisq", "Chi-squared tests of client attributes");
  add_input(chisq);
  add_output(chisq);
  chisq->add_flag("--percentage-mode", o.percentage_mode, "Test row percentages, not counts");
  chisq->add_option("--yates", o.yates, "Continuity correction")->check(CLI::IsMember(yates));
  chisq->add_option("--attribute", o.attributes, "Restrict to these attributes");

  auto* exits = app.add_subcommand("exits", "Service to exit-method graph");
  auto* transitions = app.add_subcommand("transitions", "Service transition graph");
  for (auto* cmd : {exits, transitions}) {
    add_input(cmd);
    add_output(cmd);
    cmd->add_option("--normalize", o.normalize, "Edge weight normalization")
        ->check(CLI::IsMember(norms));
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember(formats));
  }
  transitions->add_option("--relogin-page", o.relogin_pages,
                          "Page id that counts as a re-login (self edge)");

  auto* mine = app.add_subcommand("mine", "Apriori association rules over visited services");
  add_input(mine);
  add_output(mine);
  mine->add_option("--top", o.top, "Number of rules to report");
  mine->add_option("--order", o.order, "Ranking metric")->check(CLI::IsMember(orders));
  mine->add_option("--attribute-item", o.attribute_items,
                   "Also use this session attribute as items");
  mine->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(formats));

  auto* report = app.add_subcommand("report", "Run every analysis and write a summary");
  add_input(report);
  add_output(report);
  report->add_flag("--percentage-mode", o.percentage_mode, "Test row percentages, not counts");
  report->add_option("--yates", o.yates, "Continuity correction")->check(CLI::IsMember(yates));
  report->add_option("--normalize", o.normalize, "Edge weight normalization")
      ->check(CLI::IsMember(norms));
  report->add_option("--format", o.format, "Graph output format")->check(CLI::IsMember(formats));
  report->add_option("--top", o.top, "Number of rules to report");
  report->add_option("--order", o.order, "Ranking metric")->check(CLI::IsMember(orders));
  report->add_option("--relogin-page", o.relogin_pages,
                     "Page id that counts as a re-login (self edge)");
  report->add_option("--seed", o.seed, "Seed echoed into the summary");
  report->add_option("--config", o.config, "Pipeline config (JSON, as echoed in summary.json)")
      ->check(CLI::ExistingFile);
  const std::vector<std::string> analyses = {"bounce", "chisq", "exits", "transitions", "rules"};
  report->add_option("--only", o.only, "Run only these analyses")
      ->check(CLI::IsMember(analyses))
      ->delimiter(',');
  report->add_option("--skip", o.skip, "Leave out these analyses")
      ->check(CLI::IsMember(analyses))
      ->delimiter(',');

  for (auto* cmd : {mine, report}) {
    cmd->add_option("--min-support", o.min_support, "Minimum itemset support")->check(kFraction);
    cmd->add_option("--min-confidence", o.min_confidence, "Minimum rule confidence")
        ->check(kFraction);
  }

  auto* verify = app.add_subcommand("verify", "Check the bundled reference tables");
  add_output(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  for (const auto* cmd : app.get_subcommands()) o.command = cmd;

  try {
    if (*synth) return cmd_synth(o);
    if (*enrich) return cmd_enrich(o);
    if (*bounce) return cmd_bounce(o);
    if (*chisq) return cmd_chisq(o);
    if (*exits) return cmd_graph(o, true);
    if (*transitions) return cmd_graph(o, false);
    if (*mine) return cmd_mine(o);
    if (*report) return cmd_report(o);
    if (*verify) return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "wumkit: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "wumkit: error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
