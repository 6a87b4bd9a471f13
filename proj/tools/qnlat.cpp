// Command-line front end: run job files, verify them against expected
// results, expand case trees, and check the bundled corpus.
//
// Exit codes: 0 success, 1 verification mismatch, 2 input error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qnlat/casetree.hpp"
#include "qnlat/manifest.hpp"
#include "qnlat/runner.hpp"

namespace fs = std::filesystem;
using namespace qnlat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInputError = 2;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

struct CommonFlags {
  bool verbose = false;
  int subtrahend = 8;
  bool subtrahend_set = false;
  int jobs = 1;
};

void apply_overrides(Document& doc, const CommonFlags& flags) {
  if (flags.verbose) doc.settings.verbose = true;
  if (flags.subtrahend_set) doc.settings.subtrahend = flags.subtrahend;
}

void echo_results(const Document& doc, const std::vector<JobResult>& results) {
  for (const JobResult& r : results) {
    if (r.ok)
      std::cout << r.name << ": |Sub(L)|=" << r.sub_count
                << ", sigma = " << r.sigma.to_decimal_trimmed() << "\n";
    else
      std::cout << r.name << ": error: " << r.error << "\n";
  }
}

int cmd_run(const std::string& input, std::string output,
            const CommonFlags& flags) {
  Document doc = parse_document(slurp(input));
  apply_overrides(doc, flags);
  auto t0 = std::chrono::steady_clock::now();
  std::vector<JobResult> results = run_document(doc, {flags.jobs});
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  if (output.empty()) {
    fs::path p(input);
    output = (p.parent_path() / (p.stem().string() + "-out.txt")).string();
  }
  spill(output, render_output(doc, results, ms));
  echo_results(doc, results);
  for (const JobResult& r : results)
    if (!r.ok) return kExitInputError;
  return kExitOk;
}

int cmd_verify(const std::string& input, const std::string& manifest_path,
               const CommonFlags& flags) {
  Document doc = parse_document(slurp(input));
  apply_overrides(doc, flags);
  auto manifest = parse_manifest(slurp(manifest_path));
  std::vector<JobResult> results = run_document(doc, {flags.jobs});
  VerifyOutcome outcome = verify_results(results, manifest);
  for (const auto& m : outcome.mismatches) {
    std::cout << "mismatch: " << m.name << ": computed ";
    if (m.got.ok)
      std::cout << m.got.sub_count << " / "
                << m.got.sigma.to_decimal_trimmed();
    else
      std::cout << "error (" << m.got.error << ")";
    std::cout << ", expected " << m.expected.sub_count << " / "
              << m.expected.sigma.to_decimal_trimmed() << "\n";
  }
  for (const std::string& name : outcome.missing_jobs)
    std::cout << "warning: manifest entry with no job: " << name << "\n";
  for (const std::string& name : outcome.extra_jobs)
    std::cout << "warning: job with no manifest entry: " << name << "\n";
  std::cout << results.size() << " jobs, " << outcome.mismatches.size()
            << " mismatches\n";
  return outcome.ok() ? kExitOk : kExitMismatch;
}

int cmd_expand(const std::string& tree_path, std::string output,
               const std::string& threshold_text, const CommonFlags& flags) {
  CaseTree tree = parse_tree(slurp(tree_path));
  if (!threshold_text.empty()) {
    auto t = SigmaValue::parse(threshold_text);
    if (!t)
      throw Error(ErrorCode::MalformedCommand,
                  "--threshold expects an exact dyadic decimal");
    tree.threshold = *t;
  }
  if (flags.verbose) tree.settings.verbose = true;
  if (flags.subtrahend_set) tree.settings.subtrahend = flags.subtrahend;
  Document doc = expand(tree);
  if (output.empty()) {
    fs::path p(tree_path);
    output = (p.parent_path() / (p.stem().string() + "-expanded.txt"))
                 .string();
  }
  spill(output, render_input(doc));
  std::cout << "wrote " << doc.jobs().size() << " jobs to " << output << "\n";
  AuditReport report = audit(tree);
  for (const AuditEntry& e : report.entries) {
    std::cout << (e.is_leaf ? "leaf    " : "node    ") << e.name << ": ";
    if (!e.result.ok) {
      std::cout << "error: " << e.result.error << "\n";
      continue;
    }
    std::cout << "sigma = " << e.result.sigma.to_decimal_trimmed();
    if (e.exceeds_threshold)
      std::cout << "  EXCEEDS threshold "
                << report.threshold.to_decimal_trimmed()
                << " (needs splitting)";
    if (e.redundant_split)
      std::cout << "  within threshold "
                << report.threshold.to_decimal_trimmed()
                << " (children redundant)";
    if (e.expectation_mismatch)
      std::cout << "  MISMATCH: expected "
                << e.expected->to_decimal_trimmed();
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_corpus(std::string dir, const CommonFlags& flags) {
  if (dir.empty()) {
    if (const char* env = std::getenv("QNLAT_CORPUS_DIR"))
      dir = env;
    else
      dir = QNLAT_DEFAULT_CORPUS_DIR;
  }
  fs::path root(dir);
  auto manifest = parse_manifest(slurp(root / "manifest.tsv"));
  std::vector<fs::path> inputs;
  for (const auto& ent : fs::directory_iterator(root / "inputs"))
    if (ent.path().extension() == ".txt") inputs.push_back(ent.path());
  std::sort(inputs.begin(), inputs.end());

  auto t0 = std::chrono::steady_clock::now();
  std::vector<JobResult> all;
  int output_mismatches = 0;
  for (const fs::path& path : inputs) {
    Document doc = parse_document(slurp(path));
    auto t1 = std::chrono::steady_clock::now();
    std::vector<JobResult> results = run_document(doc, {flags.jobs});
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t1)
                  .count();
    all.insert(all.end(), results.begin(), results.end());
    fs::path expected =
        root / "expected" / (path.stem().string() + "-out.txt");
    if (fs::exists(expected)) {
      std::string want = normalize_output(slurp(expected));
      std::string got = normalize_output(render_output(doc, results, ms));
      if (want != got) {
        std::cout << "output mismatch: " << path.stem().string() << "\n";
        ++output_mismatches;
      }
    }
  }
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();

  VerifyOutcome outcome = verify_results(all, manifest);
  for (const auto& m : outcome.mismatches) {
    std::cout << "mismatch: " << m.name << ": computed ";
    if (m.got.ok)
      std::cout << m.got.sub_count << " / "
                << m.got.sigma.to_decimal_trimmed();
    else
      std::cout << "error (" << m.got.error << ")";
    std::cout << ", expected " << m.expected.sub_count << " / "
              << m.expected.sigma.to_decimal_trimmed() << "\n";
  }
  for (const std::string& name : outcome.missing_jobs)
    std::cout << "missing job: " << name << "\n";
  for (const std::string& name : outcome.extra_jobs)
    std::cout << "extra job: " << name << "\n";

  bool within_budget = seconds <= 5.0;
  std::cout << all.size() << " jobs from " << inputs.size() << " files in "
            << seconds << " s (budget 5 s: "
            << (within_budget ? "ok" : "EXCEEDED") << ")\n";
  bool ok = outcome.ok() && outcome.missing_jobs.empty() &&
            output_mismatches == 0 && within_budget;
  for (const JobResult& r : all)
    if (!r.ok) ok = false;
  std::cout << (ok ? "corpus ok" : "corpus FAILED") << "\n";
  return ok ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qn-lattice subuniverse counter"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input, output, manifest_path, threshold, corpus_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--verbose", flags.verbose,
                  "list the determined operation tables in the output");
    sub->add_option("--subtrahend", flags.subtrahend,
                    "exponent subtrahend for sigma (default 8)")
        ->each([&](const std::string&) { flags.subtrahend_set = true; });
    sub->add_option("--jobs", flags.jobs, "worker thread count");
  };

  CLI::App* run = app.add_subcommand("run", "run a job file");
  run->add_option("input", input, "job file")->required();
  run->add_option("-o,--output", output,
                  "output file (default <input>-out.txt)");
  add_common(run);

  CLI::App* verify =
      app.add_subcommand("verify", "run a job file and check a manifest");
  verify->add_option("input", input, "job file")->required();
  verify->add_option("--manifest", manifest_path, "expected results")
      ->required();
  add_common(verify);

  CLI::App* expand =
      app.add_subcommand("expand", "flatten a case tree and audit it");
  expand->add_option("tree", input, "case tree file")->required();
  expand->add_option("-o,--output", output,
                     "output file (default <tree>-expanded.txt)");
  expand->add_option("--threshold", threshold,
                     "sigma threshold for the audit (default 83)");
  add_common(expand);

  CLI::App* corpus =
      app.add_subcommand("corpus", "verify the bundled corpus");
  corpus->add_option("--dir", corpus_dir,
                     "corpus directory (default $QNLAT_CORPUS_DIR or the "
                     "bundled one)");
  add_common(corpus);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(input, output, flags);
    if (verify->parsed()) return cmd_verify(input, manifest_path, flags);
    if (expand->parsed()) return cmd_expand(input, output, threshold, flags);
    if (corpus->parsed()) return cmd_corpus(corpus_dir, flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
