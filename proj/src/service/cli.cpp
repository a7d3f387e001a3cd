#include "ragsmith/service/cli.hpp"

#include <csignal>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/parallel.hpp"
#include "ragsmith/common/text.hpp"
#include "ragsmith/corpus/corpus_store.hpp"
#include "ragsmith/eval/report.hpp"
#include "ragsmith/raft/dataset.hpp"
#include "ragsmith/raft/pipeline.hpp"
#include "ragsmith/retrieval/chunk_index.hpp"
#include "ragsmith/service/app_config.hpp"
#include "ragsmith/service/assistant.hpp"
#include "ragsmith/service/http_server.hpp"
#include "ragsmith/service/offline_generator.hpp"
#include "ragsmith/synth/q2a.hpp"
#include "ragsmith/synth/synthesizer.hpp"

namespace ragsmith::service {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config;
  std::string log_level = "warn";
};

struct IngestOptions {
  std::vector<std::string> paths;
  std::string group_rules;
  std::string category_rules;
  bool skip_index = false;
};

struct SynthOptions {
  bool rafs = false;
  std::size_t rafs_k = 5;
  std::size_t sample = 0;
  std::uint64_t seed = 17;
  std::size_t workers = 4;
  std::string out = "synth/qa.jsonl";
};

struct RefineOptions {
  std::string posts;
  std::string out = "q2a/qa.jsonl";
  bool raw = false;
  std::size_t workers = 4;
};

struct BuildRaftOptions {
  std::string qa;
  std::string q2a;
  std::string out = "datasets";
  double idk_fraction = 0.1;
  double test_fraction = 0.1;
  double q2a_test_fraction = 0.1;
  std::size_t mc_count = 100;
  std::uint64_t seed = 17;
  std::size_t top_n = 0;
  std::size_t max_prompt_chars = 0;
  std::string groups;
  std::size_t workers = 4;
};

struct EvalRunOptions {
  std::string dataset;
  std::string predictions;
  std::string scorer = "oracle";
  std::string out;
  bool table = false;
  std::size_t workers = 4;
};

struct EvalPredictOptions {
  std::string dataset;
  std::string out;
  std::size_t workers = 4;
};

struct EvalLeakageOptions {
  std::string full;
  std::string missing_context;
  std::string label = "model";
  std::string out;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
};

struct QueryOptions {
  std::string user;
  std::string question;
  std::size_t top_n = 0;
  bool json = false;
};

void configure_logging(const std::string& level) {
  static std::once_flag once;
  std::call_once(once, [] { spdlog::set_default_logger(spdlog::stderr_color_mt("ragsmith")); });
  spdlog::set_level(spdlog::level::from_str(level));
}

AppConfig load_config(const GlobalOptions& g) {
  return AppConfig::load(g.config.empty() ? std::nullopt : std::optional<fs::path>(g.config));
}

gateway::Gateway make_gateway(const AppConfig& cfg) { return gateway::Gateway::create(cfg.gateway, make_offline_generator()); }

corpus::GroupSet parse_groups(const std::string& csv) {
  corpus::GroupSet out;
  for (const auto& g : text::split(csv, ',')) {
    const auto t = text::trim(g);
    if (!t.empty()) {
      out.emplace(t);
    }
  }
  return out;
}

std::shared_ptr<const retrieval::ChunkIndex> load_index(const AppConfig& cfg) {
  if (!fs::exists(cfg.index_dir)) {
    throw std::runtime_error("no index at " + cfg.index_dir.string() + "; run `ragsmith ingest` first");
  }
  return retrieval::ChunkIndex::load(cfg.index_dir);
}

int cmd_ingest(const GlobalOptions& g, const IngestOptions& o, std::ostream& out) {
  const auto cfg = load_config(g);
  corpus::IngestRules rules;
  auto group_file = o.group_rules.empty() ? cfg.group_rules : std::optional<fs::path>(o.group_rules);
  auto category_file = o.category_rules.empty() ? cfg.category_rules : std::optional<fs::path>(o.category_rules);
  if (group_file) {
    rules.group_patterns = corpus::IngestRules::load_group_rules(*group_file);
  }
  if (category_file) {
    rules.category_patterns = corpus::IngestRules::load_category_rules(*category_file);
  }
  std::vector<fs::path> paths(o.paths.begin(), o.paths.end());
  corpus::CorpusStore store(cfg.corpus_dir);
  const auto stats = store.ingest(paths, rules, cfg.corpus);
  auto report = stats.to_json();
  if (!o.skip_index) {
    auto gw = make_gateway(cfg);
    auto index = retrieval::ChunkIndex::build(store.chunks(), *gw.embedder);
    index->save(cfg.index_dir);
    report["index_chunks"] = index->size();
    report["index_dir"] = cfg.index_dir.string();
  }
  out << report.dump(2) << "\n";
  return 0;
}

int cmd_synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& out) {
  const auto cfg = load_config(g);
  corpus::CorpusStore store(cfg.corpus_dir);
  auto docs = synth::sample_source_documents(store.documents(), cfg.corpus, o.sample, o.seed);
  synth::SynthConfig scfg;
  scfg.use_rafs = o.rafs;
  scfg.rafs_k = o.rafs_k;
  const auto history = store.history().all();
  auto gw = make_gateway(cfg);
  const auto run = synth::run_synthesis(docs, history, scfg, *gw.generator, cfg.templates(), o.workers);
  synth::write_qa_file(o.out, run.pairs);
  std::size_t rafs = 0;
  for (const auto& p : run.pairs) {
    rafs += p.provenance == synth::Provenance::SyntheticRafs ? 1 : 0;
  }
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& [doc, reason] : run.failures) {
    failures.push_back({{"doc_id", doc}, {"reason", reason}});
  }
  out << nlohmann::ordered_json{{"documents", docs.size()},
                                {"pairs", run.pairs.size()},
                                {"rafs_pairs", rafs},
                                {"failures", failures},
                                {"out", o.out}}
             .dump(2)
      << "\n";
  return run.pairs.empty() && !docs.empty() ? 1 : 0;
}

int cmd_refine(const GlobalOptions& g, const RefineOptions& o, std::ostream& out) {
  const auto cfg = load_config(g);
  const auto posts = synth::read_posts(o.posts);
  auto pairs = synth::filter_q2a_posts(posts);
  std::size_t failed = 0;
  if (!o.raw) {
    auto gw = make_gateway(cfg);
    const auto templates = cfg.templates();
    std::vector<std::optional<synth::QAPair>> refined(pairs.size());
    parallel_for(pairs.size(), o.workers, [&](std::size_t i) {
      try {
        refined[i] = synth::refine_answer(pairs[i], *gw.generator, templates);
      } catch (const std::exception& e) {
        spdlog::warn("refinement of {} failed, keeping the raw answer: {}", pairs[i].qa_id, e.what());
      }
    });
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (refined[i]) {
        pairs[i] = std::move(*refined[i]);
      } else {
        ++failed;
      }
    }
  }
  synth::write_qa_file(o.out, pairs);
  out << nlohmann::ordered_json{{"posts", posts.size()}, {"pairs", pairs.size()}, {"refine_failures", failed},
                                {"out", o.out}}
             .dump(2)
      << "\n";
  return 0;
}

int cmd_build_raft(const GlobalOptions& g, const BuildRaftOptions& o, std::ostream& out) {
  const auto cfg = load_config(g);
  std::vector<synth::QAPair> synthetic;
  if (!o.qa.empty()) {
    synthetic = synth::read_qa_file(o.qa);
  }
  std::vector<synth::QAPair> forum;
  if (!o.q2a.empty()) {
    forum = synth::read_qa_file(o.q2a);
  }
  if (synthetic.empty() && forum.empty()) {
    throw std::runtime_error("build-raft needs --qa and/or --q2a with at least one pair");
  }
  auto gw = make_gateway(cfg);
  auto retriever = std::make_shared<retrieval::HybridRetriever>(load_index(cfg), gw.embedder);

  raft::RaftBuildOptions bopts;
  bopts.retrieval = cfg.retrieval;
  if (o.top_n > 0) {
    bopts.retrieval.top_n = o.top_n;
  }
  bopts.max_prompt_chars = o.max_prompt_chars > 0 ? o.max_prompt_chars : cfg.max_prompt_chars;
  if (!o.groups.empty()) {
    bopts.filter = retrieval::AccessFilter(parse_groups(o.groups));
  }
  raft::RaftBuilder builder(*retriever, cfg.templates(), bopts);

  raft::RaftPipelineOptions popts;
  popts.test_fraction = o.test_fraction;
  popts.q2a_test_fraction = o.q2a_test_fraction;
  popts.mc_test_count = o.mc_count;
  popts.seed = o.seed;
  popts.idk.fraction = o.idk_fraction;
  popts.idk.seed = o.seed;
  popts.workers = o.workers;

  const auto data = raft::build_raft_datasets(synthetic, forum, builder, popts);
  const auto manifest = raft::make_manifest(data, builder, popts);
  raft::emit_dataset(o.out, data, manifest);
  out << manifest.at("counts").dump(2) << "\n";
  return 0;
}

int cmd_eval_predict(const GlobalOptions& g, const EvalPredictOptions& o, std::ostream& out) {
  const auto cfg = load_config(g);
  const auto examples = raft::read_examples(o.dataset);
  auto gw = make_gateway(cfg);
  std::vector<std::string> responses(examples.size());
  parallel_for(examples.size(), o.workers, [&](std::size_t i) {
    gateway::GenerationRequest req;
    req.prompt = examples[i].prompt;
    responses[i] = gw.generator->generate(req);
  });
  std::map<std::string, std::string> predictions;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    predictions[examples[i].example_id] = responses[i];
  }
  eval::write_predictions(o.out, predictions);
  out << nlohmann::ordered_json{{"predictions", predictions.size()}, {"out", o.out}}.dump(2) << "\n";
  return 0;
}

int cmd_eval_run(const GlobalOptions& g, const EvalRunOptions& o, std::ostream& out) {
  auto cfg = load_config(g);
  if (o.scorer == "oracle") {
    cfg.gateway.score.url.clear();
  } else if (cfg.gateway.score.url.empty()) {
    throw std::runtime_error("--scorer remote needs gateway.score_url in the config");
  } else {
    cfg.gateway.mode = gateway::Mode::Remote;
  }
  const auto examples = raft::read_examples(o.dataset);
  const auto items = eval::join_predictions(examples, eval::read_predictions(o.predictions));
  auto gw = make_gateway(cfg);
  const auto report = eval::score_predictions(items, *gw.scorer, {}, o.workers);
  const auto j = report.to_json();
  if (!o.out.empty()) {
    jsonl::write_text_atomically(o.out, j.dump(2) + "\n");
  }
  if (o.table) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "n=%zu  precision=%.2f%%  recall=%.2f%%  f1=%.2f%%  #IDK=%zu\n", report.n,
                  report.mean_precision * 100.0, report.mean_recall * 100.0, report.mean_f1 * 100.0,
                  report.idk_count);
    out << buf;
  } else if (o.out.empty()) {
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_eval_leakage(const EvalLeakageOptions& o, std::ostream& out) {
  const auto full = eval::ScoreReport::from_json(nlohmann::json::parse(jsonl::read_text(o.full)));
  const auto mc = eval::ScoreReport::from_json(nlohmann::json::parse(jsonl::read_text(o.missing_context)));
  const auto report = eval::leakage_report(full, mc, o.label);
  if (!o.out.empty()) {
    jsonl::write_text_atomically(o.out, report.to_json().dump(2) + "\n");
  }
  out << report.to_table();
  return 0;
}

struct LoadedService {
  AppConfig cfg;
  std::unique_ptr<corpus::CorpusStore> store;
  std::unique_ptr<AssistantService> service;
};

LoadedService load_service(const GlobalOptions& g) {
  LoadedService s;
  s.cfg = load_config(g);
  s.store = std::make_unique<corpus::CorpusStore>(s.cfg.corpus_dir);
  auto gw = make_gateway(s.cfg);
  auto retriever = std::make_shared<retrieval::HybridRetriever>(load_index(s.cfg), gw.embedder);
  UserDirectory users;
  if (s.cfg.users_file) {
    users = UserDirectory::load(*s.cfg.users_file);
  }
  AssistantOptions opts;
  opts.retrieval = s.cfg.retrieval;
  opts.max_prompt_chars = s.cfg.max_prompt_chars;
  const auto docs = s.store->documents();
  s.service = std::make_unique<AssistantService>(retriever, gw.generator, std::move(users), s.store->history(),
                                                 s.cfg.templates(), docs, opts);
  return s;
}

int cmd_query(const GlobalOptions& g, const QueryOptions& o, std::ostream& out) {
  auto s = load_service(g);
  const auto response =
      s.service->handle_query(o.user, o.question, o.top_n > 0 ? std::optional<std::size_t>(o.top_n) : std::nullopt);
  if (o.json) {
    out << response.to_json().dump(2) << "\n";
    return response.error ? 1 : 0;
  }
  if (response.error) {
    out << "error: " << *response.error << "\n";
  } else {
    out << response.answer << "\n";
  }
  if (response.degraded) {
    out << "(lexical-only retrieval: " << response.degraded_reason << ")\n";
  }
  out << "\n";
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%-3s %-28s %-18s %-10s %s\n", "#", "chunk", "category", "score", "groups");
  out << buf;
  for (std::size_t i = 0; i < response.provenance.size(); ++i) {
    const auto& p = response.provenance[i];
    const auto groups =
        p.access_groups.empty() ? std::string("public")
                                : text::join(std::vector<std::string>(p.access_groups.begin(), p.access_groups.end()), ",");
    std::snprintf(buf, sizeof(buf), "%-3zu %-28s %-18s %-10.6f %s\n", i + 1, p.chunk_id.c_str(),
                  std::string(corpus::to_string(p.category)).c_str(), p.fused_score, groups.c_str());
    out << buf;
  }
  return response.error ? 1 : 0;
}

HttpServer* g_server = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_server != nullptr) {
    g_server->stop();
  }
}

int cmd_serve(const GlobalOptions& g, const ServeOptions& o, std::ostream& out) {
  auto s = load_service(g);
  HttpServer server(*s.service);
  const int port = server.bind(o.host, o.port);
  out << "listening on http://" << o.host << ":" << port << std::endl;
  g_server = &server;
  std::signal(SIGINT, handle_stop_signal);
  std::signal(SIGTERM, handle_stop_signal);
  server.listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Access-controlled retrieval assistant and RAFT dataset tooling", "ragsmith"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--config", global.config, "Config file (defaults to $ASSISTANT_CONFIG)");
  app.add_option("--log-level", global.log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Ingest text files into the corpus and rebuild the index");
  ingest_cmd->add_option("paths", ingest.paths, "Files or directories")->required();
  ingest_cmd->add_option("--group-rules", ingest.group_rules, "`pattern: group,group` lines");
  ingest_cmd->add_option("--category-rules", ingest.category_rules, "`pattern: Category` lines");
  ingest_cmd->add_flag("--no-index", ingest.skip_index, "Only update the corpus files");

  SynthOptions synth_opts;
  auto* synth_cmd = app.add_subcommand("synth-gen", "Generate one synthetic QA pair per sampled document");
  synth_cmd->add_flag("--rafs", synth_opts.rafs, "Add retrieval-augmented few-shot questions from query history");
  synth_cmd->add_option("--rafs-k", synth_opts.rafs_k, "Few-shot examples per prompt")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--sample", synth_opts.sample, "Documents to sample (0 = all)");
  synth_cmd->add_option("--seed", synth_opts.seed, "Sampling seed");
  synth_cmd->add_option("--workers", synth_opts.workers, "Parallel requests")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", synth_opts.out, "Output JSONL");

  RefineOptions refine;
  auto* refine_cmd = app.add_subcommand("refine-q2a", "Filter forum posts and refine their answers");
  refine_cmd->add_option("--posts", refine.posts, "Forum posts JSONL")->required();
  refine_cmd->add_option("--out", refine.out, "Output JSONL");
  refine_cmd->add_flag("--raw", refine.raw, "Skip refinement and keep the original answers");
  refine_cmd->add_option("--workers", refine.workers, "Parallel requests")->check(CLI::PositiveNumber);

  BuildRaftOptions raft_opts;
  auto* raft_cmd = app.add_subcommand("build-raft", "Build RAFT train/test datasets");
  raft_cmd->add_option("--qa", raft_opts.qa, "Synthetic QA JSONL");
  raft_cmd->add_option("--q2a", raft_opts.q2a, "Forum QA JSONL");
  raft_cmd->add_option("--out", raft_opts.out, "Output directory");
  raft_cmd->add_option("--idk-fraction", raft_opts.idk_fraction, "Share of train examples copied as IDK")
      ->check(CLI::Range(0.0, 1.0));
  raft_cmd->add_option("--test-fraction", raft_opts.test_fraction, "Synthetic test share")
      ->check(CLI::Range(0.0, 1.0));
  raft_cmd->add_option("--q2a-test-fraction", raft_opts.q2a_test_fraction, "Forum test share")
      ->check(CLI::Range(0.0, 1.0));
  raft_cmd->add_option("--mc-count", raft_opts.mc_count, "Size of the missing-context test set");
  raft_cmd->add_option("--seed", raft_opts.seed, "Split and sampling seed");
  raft_cmd->add_option("--top-n", raft_opts.top_n, "Passages per prompt (default from config)");
  raft_cmd->add_option("--max-prompt-chars", raft_opts.max_prompt_chars, "Prompt length cap (default from config)");
  raft_cmd->add_option("--groups", raft_opts.groups, "Restrict context to these access groups (comma separated)");
  raft_cmd->add_option("--workers", raft_opts.workers, "Parallel retrievals")->check(CLI::PositiveNumber);

  auto* eval_cmd = app.add_subcommand("eval", "Score predictions");
  eval_cmd->require_subcommand(1);
  EvalRunOptions eval_run;
  auto* run_cmd = eval_cmd->add_subcommand("run", "Normalized precision/recall/F1 for a prediction file");
  run_cmd->add_option("--dataset", eval_run.dataset, "RAFT examples JSONL")->required();
  run_cmd->add_option("--predictions", eval_run.predictions, "{example_id, response} JSONL")->required();
  run_cmd->add_option("--scorer", eval_run.scorer, "oracle or remote")->check(CLI::IsMember({"oracle", "remote"}));
  run_cmd->add_option("--out", eval_run.out, "Report JSON");
  run_cmd->add_flag("--table", eval_run.table, "Print a one-line summary");
  run_cmd->add_option("--workers", eval_run.workers, "Parallel scorer calls")->check(CLI::PositiveNumber);
  EvalPredictOptions eval_predict;
  auto* predict_cmd = eval_cmd->add_subcommand("predict", "Generate a prediction for every example prompt");
  predict_cmd->add_option("--dataset", eval_predict.dataset, "RAFT examples JSONL")->required();
  predict_cmd->add_option("--out", eval_predict.out, "Predictions JSONL")->required();
  predict_cmd->add_option("--workers", eval_predict.workers, "Parallel requests")->check(CLI::PositiveNumber);
  EvalLeakageOptions eval_leak;
  auto* leak_cmd = eval_cmd->add_subcommand("leakage", "Compare recall on the full and missing-context sets");
  leak_cmd->add_option("--full", eval_leak.full, "Report for the full test set")->required();
  leak_cmd->add_option("--mc", eval_leak.missing_context, "Report for the missing-context set")->required();
  leak_cmd->add_option("--label", eval_leak.label, "Row label");
  leak_cmd->add_option("--out", eval_leak.out, "Leakage JSON");

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--port", serve.port, "Port (0 = any free port)")->check(CLI::Range(0, 65535));

  QueryOptions query;
  auto* query_cmd = app.add_subcommand("query", "Ask one question");
  query_cmd->add_option("--user", query.user, "User id (unknown users see public documents only)");
  query_cmd->add_option("question", query.question, "Question text")->required();
  query_cmd->add_option("--top-n", query.top_n, "Passages to retrieve");
  query_cmd->add_flag("--json", query.json, "Print the full response as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    if (e.get_exit_code() != 0) {
      err << "\n" << app.help();
      return 2;
    }
    return 0;
  }

  try {
    configure_logging(global.log_level);
    if (*ingest_cmd) {
      return cmd_ingest(global, ingest, out);
    }
    if (*synth_cmd) {
      return cmd_synth(global, synth_opts, out);
    }
    if (*refine_cmd) {
      return cmd_refine(global, refine, out);
    }
    if (*raft_cmd) {
      return cmd_build_raft(global, raft_opts, out);
    }
    if (*run_cmd) {
      return cmd_eval_run(global, eval_run, out);
    }
    if (*predict_cmd) {
      return cmd_eval_predict(global, eval_predict, out);
    }
    if (*leak_cmd) {
      return cmd_eval_leakage(eval_leak, out);
    }
    if (*serve_cmd) {
      return cmd_serve(global, serve, out);
    }
    if (*query_cmd) {
      return cmd_query(global, query, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    args.emplace_back(argv[i]);
  }
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace ragsmith::service
