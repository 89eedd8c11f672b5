#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "sketchsearch/error.hpp"
#include "sketchsearch/recognizer.hpp"
#include "sketchsearch/scorer.hpp"
#include "sketchsearch/screen_index.hpp"
#include "sketchsearch/search_service.hpp"
#include "sketchsearch/synthetic.hpp"
#include "sketchsearch/tuner.hpp"

namespace fs = std::filesystem;
using namespace sketchsearch;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::VersionMismatch:
    case ErrorCode::ChecksumMismatch:
      return kExitRuntime;
    default:
      return kExitUsage;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

void print_df_table(const ScreenIndex& index) {
  std::cout << "class\tdf\tidf\n";
  for (auto c : all_element_classes()) {
    std::cout << to_string(c) << '\t' << index.df(c) << '\t' << std::setprecision(6) << index.idf(c)
              << '\n';
  }
}

struct GenCorpusArgs {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  fs::path out;
  std::string profile = "rico";
  fs::path rules = SKETCHSEARCH_DATA_DIR "/label_fix_rules.json";
};

int gen_corpus(const GenCorpusArgs& a) {
  if (a.n == 0) throw Error(ErrorCode::InvalidArgument, "--n must be >= 1");
  std::string profile_spec = a.profile;
  if (fs::is_regular_file(a.profile)) profile_spec = read_text(a.profile);
  const auto corpus = generate_synthetic_corpus(a.seed, a.n, parse_profile(profile_spec));
  const auto rules = load_label_fix_rules(a.rules);

  fs::create_directories(a.out / "screens");
  std::size_t accepted = 0;
  for (const auto& doc : corpus.docs) {
    write_text(a.out / "screens" / (doc.id + ".json"), dump_screen_doc(doc));
    accepted += filter_screen(doc, rules) ? 0 : 1;
  }
  write_text(a.out / "manifest.json", dump_manifest(corpus));
  std::cout << "screens\t" << corpus.docs.size() << "\naccepted\t" << accepted << '\n';
  return 0;
}

int build(const fs::path& corpus_dir, const fs::path& rules_path, const fs::path& out) {
  if (!fs::is_directory(corpus_dir)) throw Error(ErrorCode::IoError, corpus_dir.string() + " is not a directory");
  const auto docs = load_corpus_dir(corpus_dir);
  const auto rules = load_label_fix_rules(rules_path);
  BuildReport report;
  const auto index = build_index(docs, rules, &report);
  save_index(index, out);
  std::cout << "input\t" << report.input_count << "\nscreen_count\t" << index.screen_count() << '\n';
  for (const auto& [reason, count] : report.rejected) {
    std::cout << "rejected_" << to_string(reason) << '\t' << count << '\n';
  }
  print_df_table(index);
  return 0;
}

int query(const fs::path& index_path, const fs::path& sketch_path, std::size_t top,
          const std::string& hp_csv) {
  if (top == 0) throw Error(ErrorCode::InvalidN, "--top must be >= 1");
  const auto hp = parse_hyperparams(hp_csv);
  const auto sketch = load_sketch(sketch_path);
  const auto index = load_index(index_path);
  std::cout << "rank\tid\tscore\n" << std::setprecision(10);
  std::size_t rank = 0;
  for (const auto& r : score_screens(sketch, index, hp, top)) {
    std::cout << ++rank << '\t' << r.screen_id << '\t' << r.score << '\n';
  }
  return 0;
}

int eval_search(const fs::path& index_path, const fs::path& pairs_path, std::size_t k,
                const std::string& hp_csv) {
  const auto hp = parse_hyperparams(hp_csv);
  const auto pairs = load_eval_pairs(pairs_path);
  const auto index = load_index(index_path);
  const auto s = evaluate_search(pairs, index, hp, k);
  std::cout << "k\thits\ttotal\taccuracy\n"
            << s.k << '\t' << s.hits << '\t' << s.total << '\t' << s.accuracy << "\n\npair\ttarget_id\trank\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::cout << i << '\t' << pairs[i].target_id << '\t';
    if (s.ranks[i]) {
      std::cout << *s.ranks[i];
    } else {
      std::cout << "inf";
    }
    std::cout << '\n';
  }
  return 0;
}

int eval_recognizer(const fs::path& templates_path, const fs::path& dataset_path) {
  const auto dataset = load_labeled_dataset(dataset_path);
  if (dataset.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no doodles");
  const TemplateRecognizer recognizer(load_templates(templates_path));
  std::cout << format_eval_report(eval_recognizer(dataset, recognizer));
  return 0;
}

int tune(const fs::path& index_path, const fs::path& pairs_path, const fs::path& grid_path,
         const fs::path& report_path) {
  const auto grid = load_grid(grid_path);
  const auto pairs = load_eval_pairs(pairs_path);
  const auto index = load_index(index_path);
  const auto result = grid_search(pairs, index, grid);
  write_text(report_path, format_tune_report(result));
  std::cout << "best\t" << format_hyperparams(result.best) << '\n';
  return 0;
}

httplib::Server* g_server = nullptr;

int serve(const fs::path& index_path, const fs::path& templates_path, const std::string& hp_csv,
          const std::string& host, int port) {
  auto index = std::make_shared<const ScreenIndex>(load_index(index_path));
  auto templates = load_templates(templates_path);
  auto recognizer = std::make_shared<const TemplateRecognizer>(std::move(templates));
  SessionManager sessions(index, recognizer, parse_hyperparams(hp_csv));

  httplib::Server server;
  register_routes(server, sessions);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });

  if (port == 0) {
    port = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  std::cout << "listening\t" << host << ':' << port << "\nscreens\t" << index->screen_count()
            << std::endl;
  server.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketch-based search over app screen layouts"};
  app.require_subcommand(1);
  const std::string default_hp = "39,8,9,0.4,11";
  int rc = 0;

  GenCorpusArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a synthetic screen corpus");
  gen_cmd->add_option("--n", gen.n, "Number of screens")->required();
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--profile", gen.profile, "rico, uniform, or a JSON profile (inline or file)");
  gen_cmd->add_option("--rules", gen.rules, "Label-fix rules used to count accepted screens");
  gen_cmd->callback([&] { rc = gen_corpus(gen); });

  fs::path corpus_dir, rules = SKETCHSEARCH_DATA_DIR "/label_fix_rules.json", out;
  auto* index_cmd = app.add_subcommand("index", "Build a screen index from a corpus directory");
  index_cmd->add_option("--corpus", corpus_dir, "Directory of screen documents")->required();
  index_cmd->add_option("--rules", rules, "Label-fix rules");
  index_cmd->add_option("--out", out, "Index file to write")->required();
  index_cmd->callback([&] { rc = build(corpus_dir, rules, out); });

  fs::path index_path, sketch_path;
  std::size_t top = kDefaultResultCount;
  std::string hp = default_hp;
  auto* query_cmd = app.add_subcommand("query", "Rank screens for a sketch file");
  query_cmd->add_option("--index", index_path)->required();
  query_cmd->add_option("--sketch", sketch_path)->required();
  query_cmd->add_option("--top", top, "Number of results");
  query_cmd->add_option("--hp", hp, "p1,p2,p3,delta_w,c_w");
  query_cmd->callback([&] { rc = query(index_path, sketch_path, top, hp); });

  fs::path pairs_path;
  std::size_t k = 10;
  auto* eval_cmd = app.add_subcommand("eval-search", "Top-k retrieval accuracy over sketch/target pairs");
  eval_cmd->add_option("--index", index_path)->required();
  eval_cmd->add_option("--pairs", pairs_path)->required();
  eval_cmd->add_option("--k", k, "Cutoff");
  eval_cmd->add_option("--hp", hp, "p1,p2,p3,delta_w,c_w");
  eval_cmd->callback([&] { rc = eval_search(index_path, pairs_path, k, hp); });

  fs::path templates_path = SKETCHSEARCH_DATA_DIR "/templates.json", dataset_path;
  auto* rec_cmd = app.add_subcommand("eval-recognizer", "Per-stroke recognition statistics");
  rec_cmd->add_option("--templates", templates_path);
  rec_cmd->add_option("--dataset", dataset_path)->required();
  rec_cmd->callback([&] { rc = eval_recognizer(templates_path, dataset_path); });

  fs::path grid_path, report_path = "tune_report.tsv";
  auto* tune_cmd = app.add_subcommand("tune", "Exhaustive hyperparameter grid search");
  tune_cmd->add_option("--index", index_path)->required();
  tune_cmd->add_option("--pairs", pairs_path)->required();
  tune_cmd->add_option("--grid", grid_path)->required();
  tune_cmd->add_option("--report", report_path, "Report file");
  tune_cmd->callback([&] { rc = tune(index_path, pairs_path, grid_path, report_path); });

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the interactive search HTTP service");
  serve_cmd->add_option("--index", index_path)->required();
  serve_cmd->add_option("--templates", templates_path);
  serve_cmd->add_option("--hp", hp, "p1,p2,p3,delta_w,c_w");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port, "0 picks a free port");
  serve_cmd->callback([&] { rc = serve(index_path, templates_path, hp, host, port); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.detail() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return rc;
}
