// pmprag: run sarcasm-detection pipelines over a dataset, recompute
// reports from run logs, and maintain the word-information cache.

#include "CLI11.hpp"

#include "pmprag/http_client.hpp"
#include "pmprag/pmprag.hpp"

#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

int exit_code_for(const pmprag::Error& e) {
  switch (e.code()) {
  case pmprag::Errc::Config:
  case pmprag::Errc::InvalidArgument: return 2;
  default: return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrieval-aware prompting pipelines for sarcasm detection"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run one variant over one dataset");
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  auto flag = [&](const std::string& key, const std::string& help) {
    options[key] = run->add_option("--" + key, values[key], help);
  };
  flag("dataset", "semeval | mustard | twitter-id");
  flag("data-path", "Dataset file");
  flag("variant", "pmp | pmpwl | pmpwg | pmpwl-fs | pmpwg-fs");
  flag("model", "Model name sent to the endpoint");
  flag("backend", "live | replay (default live)");
  flag("endpoint", "Chat endpoint URL (also LLM_ENDPOINT)");
  flag("concurrency", "Worker count (default 4)");
  flag("limit", "Only the first N samples");
  flag("out", "Output directory (default runs)");
  flag("transcripts", "Transcript store (default <out>/transcripts/<model>)");
  flag("cache", "Word-information cache (default <out>/cache)");
  flag("templates", "Template root with en/ and id/ subdirectories");
  flag("tagger-url", "Out-of-process tagger; the built-in heuristic tagger is used otherwise");
  flag("web-archive", "Search/page archive (default <transcripts>/web)");
  flag("expected-rows", "Fail unless the dataset has exactly this many rows");
  bool no_cache = false;
  run->add_flag("--no-cache", no_cache, "Do not read or write the word-information cache");
  std::string config_path;
  run->add_option("--config", config_path, "key = value config file");
  bool quiet = false;
  run->add_flag("-q,--quiet", quiet, "No per-sample progress");

  // report
  auto* report = app.add_subcommand("report", "Recompute metrics from a run log");
  std::string log_path;
  report->add_option("run_log", log_path, "run.jsonl")->required();
  bool as_json = false;
  report->add_flag("--json", as_json, "Print JSON instead of a table");

  // cache
  auto* cache = app.add_subcommand("cache", "List or purge cached word information");
  cache->require_subcommand(1);
  std::string cache_dir = "runs/cache";
  std::string source_filter;
  auto* cache_list = cache->add_subcommand("list", "List cached entries");
  auto* cache_purge = cache->add_subcommand("purge", "Delete cached entries");
  for (auto* sub : {cache_list, cache_purge}) {
    sub->add_option("--cache", cache_dir, "Cache directory")->capture_default_str();
    sub->add_option("--source", source_filter, "llm-only | google-search");
  }

  // Secrets never come from the command line, where they end up in shell history.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    for (auto key : pmprag::kSecretKeys)
      if (arg == "--" + std::string(key) || arg.starts_with("--" + std::string(key) + "=")) {
        std::cerr << "error: ConfigError: " << key
                  << " may only be set via the environment (SEARCH_API_KEY, SEARCH_ENGINE_ID) or a config file\n";
        return 2;
      }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      pmprag::ConfigLayer flags;
      for (const auto& [key, opt] : options)
        if (opt->count() > 0) flags[key] = values[key];
      if (no_cache) flags["no-cache"] = "true";
      const auto file = config_path.empty() ? pmprag::ConfigLayer{} : pmprag::load_config_file(config_path);
      const auto config =
          pmprag::resolve_run_config(flags, pmprag::config_from_env(pmprag::process_env), file);

      pmprag::HttplibTransport network;
      pmprag::CountingTransport offline;
      pmprag::RunEnvironment env;
      env.transport = config.backend == pmprag::BackendKind::Live ? static_cast<pmprag::HttpTransport*>(&network)
                                                                  : &offline;
      env.progress = quiet ? nullptr : &std::cerr;
      const auto result = pmprag::cmd_run(config, env);
      std::cerr << result.records << " samples, " << result.skipped << " skipped, " << result.llm_calls
                << " model calls\n";
      if (result.report) {
        std::cout << pmprag::render_table(*result.report, result.run_dir.string());
      } else {
        std::cout << "no scored samples\n";
      }
      return 0;
    }
    if (*report) {
      const auto r = pmprag::report_from_log(log_path);
      if (as_json) std::cout << pmprag::to_json(r).dump(2) << '\n';
      else std::cout << pmprag::render_table(r, log_path);
      return 0;
    }
    if (*cache) {
      std::optional<pmprag::WordInfoSource> filter;
      if (!source_filter.empty()) filter = pmprag::parse_word_info_source(source_filter);
      if (*cache_list) {
        std::cout << pmprag::render_cache_table(pmprag::cmd_cache_list(cache_dir, filter));
      } else {
        std::cout << "removed " << pmprag::cmd_cache_purge(cache_dir, filter) << " entries\n";
      }
      return 0;
    }
  } catch (const pmprag::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
